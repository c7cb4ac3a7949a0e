#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "palmpc/strings.hpp"

namespace palmpc {

namespace detail {
__extension__ using u128 = unsigned __int128;
}

inline constexpr std::size_t kMaxLayers = 4;
inline constexpr std::uint64_t kMersenne61 = (std::uint64_t{1} << 61) - 1;

/// Karp-Rabin fingerprint. Per layer: value = sum S[i] x^i mod q, plus x^len
/// and x^-len so concatenation and splitting stay O(1).
struct Fingerprint {
  std::size_t length = 0;
  std::array<std::uint64_t, kMaxLayers> value{};
  std::array<std::uint64_t, kMaxLayers> power{1, 1, 1, 1};
  std::array<std::uint64_t, kMaxLayers> inverse_power{1, 1, 1, 1};
  std::uint64_t scheme_tag = 0;
};

/// Which parts of W = U V are supplied to `FingerprintScheme::solve_third`.
enum class Missing { Whole, Left, Right };

class FingerprintScheme {
 public:
  struct Layer {
    std::uint64_t modulus;
    std::uint64_t base;
    std::uint64_t inverse_base;
  };

  /// Random bases over the Mersenne prime 2^61 - 1. Requires the combined
  /// modulus q^layers to be at least max(sigma, n^3); deterministic in `seed`.
  static FingerprintScheme create(std::uint64_t n, std::uint64_t sigma, std::size_t layers,
                                  std::uint64_t seed);

  /// Explicit (prime modulus, base) pairs, e.g. toy schemes in tests.
  static FingerprintScheme with_parameters(std::span<const std::pair<std::uint64_t, std::uint64_t>> layers);

  std::size_t layers() const noexcept { return layer_count_; }
  const Layer& layer(std::size_t k) const { return layers_[k]; }
  std::uint64_t tag() const noexcept { return tag_; }

  /// Words used to ship the values of one fingerprint (length implied).
  std::size_t value_words() const noexcept { return layer_count_; }
  /// Words used to ship or store a full fingerprint with powers and length.
  std::size_t full_words() const noexcept { return 3 * layer_count_ + 1; }

  Fingerprint empty() const noexcept;
  Fingerprint of(std::span<const Symbol> s) const;
  Fingerprint of_symbol(Symbol s) const;
  /// Fingerprint of reverse(s).
  Fingerprint of_reversed(std::span<const Symbol> s) const;

  /// phi(U V) = phi(U) + x^|U| phi(V).
  Fingerprint concat(const Fingerprint& u, const Fingerprint& v) const;
  /// Given two of phi(U), phi(V), phi(W) with W = U V, returns the third.
  /// Arguments are always passed in (first, second) order of the known pair:
  /// Missing::Whole -> (U, V); Missing::Left -> (W, V); Missing::Right -> (W, U).
  Fingerprint solve_third(Missing missing, const Fingerprint& a, const Fingerprint& b) const;

  /// True iff lengths and all layer values agree. Throws on scheme mismatch.
  bool equal(const Fingerprint& a, const Fingerprint& b) const;

  std::uint64_t mul(std::size_t k, std::uint64_t a, std::uint64_t b) const noexcept {
    return static_cast<std::uint64_t>(static_cast<detail::u128>(a) * b % layers_[k].modulus);
  }
  std::uint64_t add(std::size_t k, std::uint64_t a, std::uint64_t b) const noexcept {
    const std::uint64_t q = layers_[k].modulus;
    const std::uint64_t s = a + b;
    return s >= q ? s - q : s;
  }
  std::uint64_t sub(std::size_t k, std::uint64_t a, std::uint64_t b) const noexcept {
    return a >= b ? a - b : a + layers_[k].modulus - b;
  }
  std::uint64_t pow(std::size_t k, std::uint64_t base, std::uint64_t exp) const noexcept;

 private:
  std::array<Layer, kMaxLayers> layers_{};
  std::size_t layer_count_ = 0;
  std::uint64_t tag_ = 0;

  void finish_init();
};

/// Free-function spellings.
inline Fingerprint fp_of(std::span<const Symbol> s, const FingerprintScheme& scheme) {
  return scheme.of(s);
}
inline bool fp_eq(const Fingerprint& a, const Fingerprint& b, const FingerprintScheme& scheme) {
  return scheme.equal(a, b);
}

/// Prefix fingerprints of one buffer: any fragment's fingerprint in O(layers).
class FragmentHasher {
 public:
  FragmentHasher(const FingerprintScheme& scheme, std::span<const Symbol> letters,
                 OpTally* tally = nullptr);

  std::size_t size() const noexcept { return size_; }
  /// Values of letters[begin, end) written to out[0, layers).
  void values(std::size_t begin, std::size_t end, std::uint64_t* out) const;
  Fingerprint fragment(std::size_t begin, std::size_t end) const;

 private:
  const FingerprintScheme* scheme_;
  std::size_t size_;
  // Layer-major: prefix_[k * (size_ + 1) + i]
  std::vector<std::uint64_t> prefix_;
  std::vector<std::uint64_t> power_;
  std::vector<std::uint64_t> inverse_power_;
};

}  // namespace palmpc
