#pragma once

#include <cstddef>
#include <vector>

namespace radshift::num {

// Pairwise (cascade) summation. Error grows like log(n) instead of n,
// and the result does not depend on how work was distributed across
// threads as long as the element order is fixed.
template <class T>
T pairwise_sum(const T* data, std::size_t n) {
  if (n == 0) return T{};
  if (n == 1) return data[0];
  if (n <= 8) {
    T s = data[0];
    for (std::size_t i = 1; i < n; ++i) s += data[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
}

template <class T>
T pairwise_sum(const std::vector<T>& v) {
  return pairwise_sum(v.data(), v.size());
}

}  // namespace radshift::num
