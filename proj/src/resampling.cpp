#include "runway/resampling.hpp"

#include <cmath>
#include <stdexcept>

namespace runway {

void SedrParams::validate() const {
  if (t_min < 2) throw std::invalid_argument("t_min must be at least 2");
  if (!(se_threshold > 0.0)) throw std::invalid_argument("se_threshold must be positive");
  if (hard_cap < t_min) throw std::invalid_argument("hard_cap must be at least t_min");
  if (!(scale.f1 > 0.0) || !(scale.f2 > 0.0)) throw std::invalid_argument("objective scales must be positive");
}

double EvalRecord::ase(const ObjectiveVector& scale) const { return 0.5 * (se.f1 / scale.f1 + se.f2 / scale.f2); }

EvalRecord summarize(std::vector<ObjectiveVector> samples) {
  EvalRecord r;
  r.n = static_cast<int>(samples.size());
  if (r.n == 0) return r;
  double m1 = 0.0, m2 = 0.0;
  for (const auto& s : samples) {
    m1 += s.f1;
    m2 += s.f2;
  }
  m1 /= r.n;
  m2 /= r.n;
  r.mean = {m1, m2};
  if (r.n > 1) {
    // Deviations from the first sample, so identical samples give exactly zero.
    const ObjectiveVector o = samples.front();
    double c1 = 0.0, c2 = 0.0;
    for (const auto& s : samples) {
      c1 += s.f1 - o.f1;
      c2 += s.f2 - o.f2;
    }
    c1 /= r.n;
    c2 /= r.n;
    double v1 = 0.0, v2 = 0.0;
    for (const auto& s : samples) {
      v1 += (s.f1 - o.f1 - c1) * (s.f1 - o.f1 - c1);
      v2 += (s.f2 - o.f2 - c2) * (s.f2 - o.f2 - c2);
    }
    r.sd = {std::sqrt(v1 / (r.n - 1)), std::sqrt(v2 / (r.n - 1))};
    const double root = std::sqrt(static_cast<double>(r.n));
    r.se = {r.sd.f1 / root, r.sd.f2 / root};
  }
  r.samples = std::move(samples);
  return r;
}

EvalRecord sedr_evaluate(const Sampler& sample, const SedrParams& params) {
  params.validate();
  std::vector<ObjectiveVector> samples;
  samples.reserve(static_cast<std::size_t>(params.hard_cap));
  for (int i = 0; i < params.t_min; ++i) samples.push_back(sample(i));
  auto rec = summarize(samples);
  while (rec.ase(params.scale) >= params.se_threshold && rec.n < params.hard_cap) {
    samples.push_back(sample(rec.n));
    rec = summarize(samples);
  }
  rec.budget_capped = rec.n >= params.hard_cap && rec.ase(params.scale) >= params.se_threshold;
  return rec;
}

}  // namespace runway
