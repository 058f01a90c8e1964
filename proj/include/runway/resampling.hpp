#pragma once

#include <functional>
#include <vector>

#include "runway/domain.hpp"

namespace runway {

struct SedrParams {
  int t_min = 14;
  /// Compared with the average standard error of the scaled objectives.
  double se_threshold = 22.0;
  int hard_cap = 30;
  /// Objective k is divided by scale[k] before standard errors are taken,
  /// so the two objectives enter the average in comparable units.
  ObjectiveVector scale{1.0, 1.0};

  /// Throws std::invalid_argument on t_min < 2, threshold <= 0, cap < t_min
  /// or a non-positive scale.
  void validate() const;
};

struct EvalRecord {
  ObjectiveVector mean;
  ObjectiveVector sd;  // sample sd, n - 1 denominator
  ObjectiveVector se;  // sd / sqrt(n), unscaled
  int n = 0;
  bool budget_capped = false;
  std::vector<ObjectiveVector> samples;

  /// Mean of se[k] / scale[k] over both objectives.
  double ase(const ObjectiveVector& scale) const;
};

/// Sample mean, sd and standard error of a sample list.
EvalRecord summarize(std::vector<ObjectiveVector> samples);

/// Draws sample(i) for i = 0, 1, ... Sample i always gets the same random
/// numbers (the caller keys its streams by i), so two solutions compared at
/// equal n share draws.
using Sampler = std::function<ObjectiveVector(int sample_index)>;

/// t_min samples, then one more while the average standard error is at or
/// above the threshold and the cap is not reached.
EvalRecord sedr_evaluate(const Sampler& sample, const SedrParams& params);

}  // namespace runway
