#pragma once

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

namespace lmtk {

// Byte-level suffix array (doubling with counting sort, O(n log n)).
std::vector<int32_t> build_suffix_array(std::string_view text);

// Half-open range [lo, hi) of suffixes that start with `pattern`.
std::pair<size_t, size_t> sa_find(std::string_view text, const std::vector<int32_t>& sa,
                                  std::string_view pattern);

} // namespace lmtk
