#pragma once

#include <utility>
#include <vector>

namespace bvbfv::detail {

/// Stable insertion sort accumulating the Koszul sign: every transposition of
/// two odd elements contributes a factor -1. Returns {sorted, sign}.
template <class T, class Less, class ParityFn>
std::pair<std::vector<T>, int> koszul_sort(std::vector<T> items, Less less,
                                           ParityFn parity) {
  int sign = 1;
  for (std::size_t i = 1; i < items.size(); ++i) {
    std::size_t j = i;
    while (j > 0 && less(items[j], items[j - 1])) {
      if (parity(items[j]) && parity(items[j - 1])) sign = -sign;
      std::swap(items[j], items[j - 1]);
      --j;
    }
  }
  return {std::move(items), sign};
}

/// Sign of extracting the element at `pos` to the front of the word.
template <class T, class ParityFn>
int koszul_extract_sign(const std::vector<T>& items, std::size_t pos,
                        ParityFn parity) {
  if (!parity(items[pos])) return 1;
  int crossings = 0;
  for (std::size_t j = 0; j < pos; ++j) {
    if (parity(items[j])) ++crossings;
  }
  return (crossings % 2 == 0) ? 1 : -1;
}

}  // namespace bvbfv::detail
