#include "runway/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace runway {

Bounds bounds_of(const std::vector<ObjectiveVector>& points) {
  Bounds b{{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()},
           {-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()}};
  for (const auto& p : points) {
    b.lo = {std::min(b.lo.f1, p.f1), std::min(b.lo.f2, p.f2)};
    b.hi = {std::max(b.hi.f1, p.f1), std::max(b.hi.f2, p.f2)};
  }
  if (points.empty()) b = {{0, 0}, {0, 0}};
  return b;
}

ObjectiveVector normalize(const ObjectiveVector& p, const Bounds& b) {
  auto one = [](double x, double lo, double hi) { return hi > lo ? (x - lo) / (hi - lo) : 0.0; };
  return {one(p.f1, b.lo.f1, b.hi.f1), one(p.f2, b.lo.f2, b.hi.f2)};
}

std::vector<ObjectiveVector> normalize(const std::vector<ObjectiveVector>& points, const Bounds& b) {
  std::vector<ObjectiveVector> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(normalize(p, b));
  return out;
}

double hypervolume(const std::vector<ObjectiveVector>& front, const ObjectiveVector& ref, std::size_t* skipped) {
  std::vector<ObjectiveVector> inside;
  std::size_t outside = 0;
  for (const auto& p : front) {
    if (p.f1 > ref.f1 || p.f2 > ref.f2 || std::isnan(p.f1) || std::isnan(p.f2))
      ++outside;
    else
      inside.push_back(p);
  }
  if (skipped) *skipped = outside;
  std::sort(inside.begin(), inside.end(),
            [](const ObjectiveVector& a, const ObjectiveVector& b) { return a.f1 != b.f1 ? a.f1 < b.f1 : a.f2 < b.f2; });
  double area = 0.0;
  double ceiling = ref.f2;
  for (const auto& p : inside) {
    if (p.f2 < ceiling) {
      area += (ref.f1 - p.f1) * (ceiling - p.f2);
      ceiling = p.f2;
    }
  }
  return area;
}

double y_metric(const std::vector<ObjectiveVector>& front, const std::vector<ObjectiveVector>& reference) {
  if (front.empty() || reference.empty()) throw std::invalid_argument("y_metric needs two non-empty fronts");
  double total = 0.0;
  for (const auto& p : front) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& q : reference) best = std::min(best, std::hypot(p.f1 - q.f1, p.f2 - q.f2));
    total += best;
  }
  return total / static_cast<double>(front.size());
}

std::string_view to_string(Benchmark b) { return b == Benchmark::FonsecaFleming ? "ff" : "zdt3"; }

ObjectiveVector ff(double x1, double x2) {
  if (x1 < -4.0 || x1 > 4.0 || x2 < -4.0 || x2 > 4.0) throw std::domain_error("ff input outside [-4, 4]^2");
  const double c = 1.0 / std::numbers::sqrt2;
  const double a = (x1 - c) * (x1 - c) + (x2 - c) * (x2 - c);
  const double b = (x1 + c) * (x1 + c) + (x2 + c) * (x2 + c);
  return {1.0 - std::exp(-a), 1.0 - std::exp(-b)};
}

ObjectiveVector zdt3(double x1, double x2) {
  if (x1 < 0.0 || x1 > 1.0 || x2 < 0.0 || x2 > 1.0) throw std::domain_error("zdt3 input outside [0, 1]^2");
  const double g = 1.0 + 9.0 / 29.0 * x2;
  const double r = x1 / g;
  return {x1, g * (1.0 - std::sqrt(r) - r * std::sin(10.0 * std::numbers::pi * x1))};
}

Box box_of(Benchmark b) {
  if (b == Benchmark::FonsecaFleming) return {{-4.0, -4.0}, {4.0, 4.0}};
  return {{0.0, 0.0}, {1.0, 1.0}};
}

ObjectiveVector evaluate(Benchmark b, double x1, double x2) {
  return b == Benchmark::FonsecaFleming ? ff(x1, x2) : zdt3(x1, x2);
}

ObjectiveVector NoisyBenchmark::operator()(double x1, double x2) {
  auto f = evaluate(bench_, x1, x2);
  ++calls_;
  if (sigma_ > 0.0) {
    f.f1 += sigma_ * KeyedStream::normal_quantile(rng_.uniform());
    f.f2 += sigma_ * KeyedStream::normal_quantile(rng_.uniform());
  }
  return f;
}

std::vector<ObjectiveVector> true_front(Benchmark b, std::size_t samples) {
  std::vector<ObjectiveVector> pts;
  pts.reserve(samples);
  const double denom = static_cast<double>(std::max<std::size_t>(samples, 2) - 1);
  for (std::size_t k = 0; k < samples; ++k) {
    const double u = static_cast<double>(k) / denom;
    if (b == Benchmark::FonsecaFleming) {
      const double t = (2.0 * u - 1.0) / std::numbers::sqrt2;
      pts.push_back(ff(t, t));
    } else {
      pts.push_back(zdt3(u, 0.0));
    }
  }
  auto front = nondominated_filter(pts);
  std::sort(front.begin(), front.end(), [](const ObjectiveVector& a, const ObjectiveVector& c) { return a.f1 < c.f1; });
  return front;
}

namespace {
struct Reference {
  std::vector<ObjectiveVector> front;
  Bounds bounds;
  double hv;
};

const Reference& reference_for(Benchmark b) {
  static const Reference refs[2] = {
      [] {
        Reference r{true_front(Benchmark::FonsecaFleming), {}, 0.0};
        r.bounds = bounds_of(r.front);
        r.front = normalize(r.front, r.bounds);
        r.hv = hypervolume(r.front, {1.0, 1.0});
        return r;
      }(),
      [] {
        Reference r{true_front(Benchmark::Zdt3), {}, 0.0};
        r.bounds = bounds_of(r.front);
        r.front = normalize(r.front, r.bounds);
        r.hv = hypervolume(r.front, {1.0, 1.0});
        return r;
      }(),
  };
  return refs[static_cast<int>(b)];
}
}  // namespace

double normalized_hvm(const std::vector<ObjectiveVector>& front, Benchmark b) {
  const auto& ref = reference_for(b);
  return hypervolume(normalize(front, ref.bounds), {1.0, 1.0}) / ref.hv;
}

double normalized_y(const std::vector<ObjectiveVector>& front, Benchmark b) {
  const auto& ref = reference_for(b);
  return y_metric(normalize(front, ref.bounds), ref.front);
}

void write_front_csv(std::ostream& out, const std::vector<ObjectiveVector>& front,
                     const std::vector<std::string>& encodings) {
  const bool enc = !encodings.empty();
  out << (enc ? "f1,f2,encoding\n" : "f1,f2\n");
  const auto old_precision = out.precision(17);
  for (std::size_t k = 0; k < front.size(); ++k) {
    out << front[k].f1 << ',' << front[k].f2;
    if (enc) out << ',' << (k < encodings.size() ? encodings[k] : std::string{});
    out << '\n';
  }
  out.precision(old_precision);
}

std::vector<ObjectiveVector> read_front_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("f1,f2", 0) != 0) throw std::runtime_error("front CSV must start with f1,f2");
  std::vector<ObjectiveVector> out;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    double v[2];
    const char* p = line.data();
    const char* end = line.data() + line.size();
    for (int k = 0; k < 2; ++k) {
      auto [next, ec] = std::from_chars(p, end, v[k]);
      if (ec != std::errc{}) throw std::runtime_error("bad number in front CSV row " + std::to_string(row));
      p = next;
      if (k == 0) {
        if (p == end || *p != ',') throw std::runtime_error("missing f2 in front CSV row " + std::to_string(row));
        ++p;
      }
    }
    out.push_back({v[0], v[1]});
  }
  return out;
}

}  // namespace runway
