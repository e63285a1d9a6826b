#pragma once

#include "ttosc/system.hpp"

namespace ttosc {

// Exact 0/1 knapsack: pick the bit vector maximizing values . bits subject to
// sizes . bits <= capacity. Values may be negative; the empty selection
// (value 0) is always available, so non-positive items are never forced in.
// Ties resolve to the lexicographically smallest bit vector.
IntVector knapsack_select(const Vector& values, const IntVector& sizes, int capacity);

}  // namespace ttosc
