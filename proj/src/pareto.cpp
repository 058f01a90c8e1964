#include "runway/pareto.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace runway {

Dominance dominates(const ObjectiveVector& a, const ObjectiveVector& b) {
  if (a.f1 == b.f1 && a.f2 == b.f2) return Dominance::WeakOnly;
  if (a.f1 <= b.f1 && a.f2 <= b.f2) return Dominance::Strict;
  return Dominance::None;
}

std::vector<double> crowding_distance(const std::vector<ObjectiveVector>& front) {
  const std::size_t n = front.size();
  std::vector<double> d(n, 0.0);
  if (n <= 2) {
    std::fill(d.begin(), d.end(), std::numeric_limits<double>::infinity());
    return d;
  }
  std::vector<std::size_t> order(n);
  for (std::size_t k = 0; k < 2; ++k) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return front[a][k] < front[b][k]; });
    const double range = front[order.back()][k] - front[order.front()][k];
    d[order.front()] = std::numeric_limits<double>::infinity();
    d[order.back()] = std::numeric_limits<double>::infinity();
    if (range <= 0.0) continue;
    for (std::size_t i = 1; i + 1 < n; ++i)
      d[order[i]] += (front[order[i + 1]][k] - front[order[i - 1]][k]) / range;
  }
  return d;
}

std::vector<int> pareto_ranks(const std::vector<ObjectiveVector>& points) {
  const std::size_t n = points.size();
  std::vector<int> rank(n, 0);
  std::vector<int> dominated_by(n, 0);
  std::vector<std::vector<std::size_t>> dominates_list(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      if (strictly_dominates(points[a], points[b])) {
        dominates_list[a].push_back(b);
        ++dominated_by[b];
      } else if (strictly_dominates(points[b], points[a])) {
        dominates_list[b].push_back(a);
        ++dominated_by[a];
      }
    }
  std::vector<std::size_t> current;
  for (std::size_t k = 0; k < n; ++k)
    if (dominated_by[k] == 0) current.push_back(k);
  int level = 0;
  while (!current.empty()) {
    std::vector<std::size_t> next;
    for (auto a : current) {
      rank[a] = level;
      for (auto b : dominates_list[a])
        if (--dominated_by[b] == 0) next.push_back(b);
    }
    current = std::move(next);
    ++level;
  }
  return rank;
}

std::vector<std::size_t> nondominated_indices(const std::vector<ObjectiveVector>& points) {
  const std::size_t n = points.size();
  // Sweep by (f1, f2): a point survives if no earlier point has f2 below it,
  // or an equal point precedes it.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return points[a].f1 != points[b].f1 ? points[a].f1 < points[b].f1 : points[a].f2 < points[b].f2;
  });
  std::vector<char> keep(n, 0);
  double best_f2 = std::numeric_limits<double>::infinity();
  const ObjectiveVector* best = nullptr;
  for (auto k : order) {
    const auto& p = points[k];
    if (p.f2 < best_f2) {
      keep[k] = 1;
      best_f2 = p.f2;
      best = &p;
    } else if (best && p == *best) {
      keep[k] = 1;
    }
  }
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < n; ++k)
    if (keep[k]) out.push_back(k);
  return out;
}

std::vector<ObjectiveVector> nondominated_filter(const std::vector<ObjectiveVector>& points) {
  std::vector<ObjectiveVector> out;
  for (auto k : nondominated_indices(points)) out.push_back(points[k]);
  return out;
}

}  // namespace runway
