#include "palmpc/pipeline.hpp"

namespace palmpc {

PalindromeTable PalindromeRun::gather() const {
  PalindromeTable table = PalindromeTable::zeros(config.n);
  for (const TableSlice& s : slices) {
    for (std::size_t k = 0; k < s.lengths.size(); ++k) table.set(Center{s.center_begin + k}, s.lengths[k]);
  }
  return table;
}

}  // namespace palmpc
