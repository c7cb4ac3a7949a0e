#include <doctest.h>

#include <set>
#include <vector>

#include "palmpc/generators.hpp"
#include "support.hpp"

using namespace palmpc;
using palmpc::testing::word;

TEST_SUITE("generators") {

TEST_CASE("fixed families") {
  CHECK(gen::unary(4).letters() == word("aaaa"));
  CHECK(gen::unary(4).sigma() == 1);
  CHECK(gen::alternating(5).letters() == word("ababa"));
  CHECK(gen::fibonacci(13).letters() == word("abaababaabaab"));
  CHECK(gen::thue_morse(8).letters() == word("abbabaab"));
  CHECK(gen::fibonacci(0).empty());
}

TEST_CASE("random text is reproducible and in range") {
  const auto a = gen::random(1000, 4, 9);
  CHECK(a == gen::random(1000, 4, 9));
  CHECK_FALSE(a == gen::random(1000, 4, 10));
  std::set<Symbol> seen(a.letters().begin(), a.letters().end());
  CHECK(seen == std::set<Symbol>{0, 1, 2, 3});
}

TEST_CASE("odometer enumerates every string once") {
  gen::StringOdometer odo(3, 3);
  std::set<std::vector<Symbol>> all;
  do {
    all.insert(odo.letters());
  } while (odo.next());
  CHECK(all.size() == 27);
  gen::StringOdometer empty(0, 2);
  CHECK_FALSE(empty.next());
}

}  // TEST_SUITE
