#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <vector>

namespace nullmodels::detail {

// LSD radix sort of 64-bit keys, 16 bits per pass; passes whose digit is
// constant across all keys are skipped.
inline void radix_sort(std::vector<std::uint64_t>& keys) {
  if (keys.size() < 2) return;
  if (keys.size() < 4096) {
    std::sort(keys.begin(), keys.end());
    return;
  }
  std::vector<std::uint64_t> buffer(keys.size());
  for (int shift = 0; shift < 64; shift += 16) {
    std::array<std::size_t, 65537> count{};
    for (std::uint64_t k : keys) ++count[((k >> shift) & 0xffff) + 1];
    bool trivial = false;
    for (std::size_t d = 1; d <= 65536; ++d) {
      if (count[d] == keys.size()) {
        trivial = true;
        break;
      }
    }
    if (trivial) continue;
    for (std::size_t d = 1; d <= 65536; ++d) count[d] += count[d - 1];
    for (std::uint64_t k : keys) buffer[count[(k >> shift) & 0xffff]++] = k;
    keys.swap(buffer);
  }
}

}  // namespace nullmodels::detail
