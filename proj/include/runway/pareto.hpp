#pragma once

#include <vector>

#include "runway/domain.hpp"

namespace runway {

enum class Dominance : std::uint8_t { Strict, WeakOnly, None };

/// Strict: a <= b componentwise and a != b. WeakOnly: a == b.
Dominance dominates(const ObjectiveVector& a, const ObjectiveVector& b);
inline bool strictly_dominates(const ObjectiveVector& a, const ObjectiveVector& b) {
  return dominates(a, b) == Dominance::Strict;
}

/// NSGA-II crowding distance. Boundary points get +inf; interior points sum
/// (next - prev) / range over both objectives. Degenerate ranges add 0.
std::vector<double> crowding_distance(const std::vector<ObjectiveVector>& front);

/// Non-domination rank per point (0 = not dominated by anyone).
std::vector<int> pareto_ranks(const std::vector<ObjectiveVector>& points);

/// Indices of the points no other point strictly dominates, in input order.
std::vector<std::size_t> nondominated_indices(const std::vector<ObjectiveVector>& points);
std::vector<ObjectiveVector> nondominated_filter(const std::vector<ObjectiveVector>& points);

}  // namespace runway
