#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "runway/pareto.hpp"
#include "runway/rng.hpp"

namespace runway {

/// Per-objective [lo, hi] used to map a front onto the unit square.
struct Bounds {
  ObjectiveVector lo;
  ObjectiveVector hi;
};

Bounds bounds_of(const std::vector<ObjectiveVector>& points);
/// (x - lo) / (hi - lo) per objective; a degenerate range maps to 0.
ObjectiveVector normalize(const ObjectiveVector& p, const Bounds& b);
std::vector<ObjectiveVector> normalize(const std::vector<ObjectiveVector>& points, const Bounds& b);

/// Area dominated by `front` and bounded by `ref` (minimization). Points not
/// strictly inside ref in both objectives are skipped and counted.
double hypervolume(const std::vector<ObjectiveVector>& front, const ObjectiveVector& ref,
                   std::size_t* skipped = nullptr);

/// Mean over `front` of the minimum Euclidean distance to `reference`.
double y_metric(const std::vector<ObjectiveVector>& front, const std::vector<ObjectiveVector>& reference);

enum class Benchmark : std::uint8_t { FonsecaFleming, Zdt3 };

std::string_view to_string(Benchmark b);

/// Fonseca-Fleming on [-4, 4]^2. Throws std::domain_error outside the box.
ObjectiveVector ff(double x1, double x2);
/// Two-variable ZDT3 on [0, 1]^2. Throws std::domain_error outside the box.
ObjectiveVector zdt3(double x1, double x2);

struct Box {
  std::array<double, 2> lo;
  std::array<double, 2> hi;
};
Box box_of(Benchmark b);
ObjectiveVector evaluate(Benchmark b, double x1, double x2);

/// f(x) plus independent N(0, sigma^2) per objective on every call. The k-th
/// call's noise depends only on (seed, stream, k).
class NoisyBenchmark {
 public:
  NoisyBenchmark(Benchmark b, double sigma, std::uint64_t seed, std::uint64_t stream = 0)
      : bench_(b), sigma_(sigma), rng_(seed, stream, 0, Purpose::Benchmark) {}

  ObjectiveVector operator()(double x1, double x2);
  Benchmark benchmark() const { return bench_; }
  double sigma() const { return sigma_; }
  std::uint64_t calls() const { return calls_; }

 private:
  Benchmark bench_;
  double sigma_;
  KeyedStream rng_;
  std::uint64_t calls_ = 0;
};

/// Dense sample of the exact Pareto front, non-dominated and sorted by f1.
std::vector<ObjectiveVector> true_front(Benchmark b, std::size_t samples = 20000);

/// Hypervolume of `front` over that of the true front, both normalized by
/// the true front's bounds with reference (1, 1). `front` should hold the
/// noise-free objective values of the returned solutions.
double normalized_hvm(const std::vector<ObjectiveVector>& front, Benchmark b);
/// Y metric of `front` against the true front in the same normalized space.
double normalized_y(const std::vector<ObjectiveVector>& front, Benchmark b);

/// "f1,f2[,encoding]" rows; the encoding column is written when non-empty.
void write_front_csv(std::ostream& out, const std::vector<ObjectiveVector>& front,
                     const std::vector<std::string>& encodings = {});
/// Reads the first two columns; throws std::runtime_error on a bad header or row.
std::vector<ObjectiveVector> read_front_csv(std::istream& in);

}  // namespace runway
