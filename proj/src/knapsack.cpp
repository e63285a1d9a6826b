#include "ttosc/knapsack.hpp"

namespace ttosc {

IntVector knapsack_select(const Vector& values, const IntVector& sizes, int capacity) {
  const int n = static_cast<int>(values.size());
  if (sizes.size() != n) throw std::invalid_argument("knapsack_select: length mismatch");
  if (capacity < 0) throw std::invalid_argument("knapsack_select: negative capacity");
  for (int j = 0; j < n; ++j)
    if (sizes(j) < 1) throw std::invalid_argument("knapsack_select: sizes must be >= 1");

  // best(j, w) = best value over items j..n-1 with w units of capacity left.
  Matrix best = Matrix::Zero(n + 1, capacity + 1);
  for (int j = n - 1; j >= 0; --j)
    for (int w = 0; w <= capacity; ++w) {
      double value = best(j + 1, w);  // skip item j
      if (sizes(j) <= w) value = std::max(value, values(j) + best(j + 1, w - sizes(j)));
      best(j, w) = value;
    }

  // Walk forward, skipping whenever skipping still attains the optimum; this
  // yields the lexicographically smallest optimal bit vector.
  IntVector bits = IntVector::Zero(n);
  int w = capacity;
  for (int j = 0; j < n; ++j) {
    if (sizes(j) <= w && values(j) + best(j + 1, w - sizes(j)) > best(j + 1, w)) {
      bits(j) = 1;
      w -= sizes(j);
    }
  }
  return bits;
}

}  // namespace ttosc
