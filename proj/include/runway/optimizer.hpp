#pragma once

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "runway/metrics.hpp"
#include "runway/pareto.hpp"

namespace runway {

struct OptParams {
  int psize = 100;
  int b = 20;
  int b1 = 10;
  int improve_threshold = 7;
  double dist_threshold = 17.0;
  int archive_cap = 55;

  /// Budget; a zero entry is unlimited, but at least one must be set.
  std::uint64_t max_evaluations = 10000;
  int max_iter = 0;
  double max_cpu_s = 0.0;

  bool elitist = true;
  bool dynamic_update = true;
  bool rebuild = true;

  /// Evaluations one local-search descent may spend.
  int ls_max_evals = 12;
  /// Tabu step: iterations and neighbors evaluated per iteration.
  int tabu_iterations = 3;
  int tabu_sample = 6;
  /// Fresh candidates generated per diversity-tier slot when rebuilding.
  int rebuild_pool_factor = 3;
  std::uint64_t seed = 1;

  static OptParams moo();
  static OptParams sbo();
  int b2() const { return b - b1; }
  /// Throws std::invalid_argument on broken invariants.
  void validate() const;
};

inline OptParams OptParams::moo() { return OptParams{}; }

inline OptParams OptParams::sbo() {
  OptParams p;
  p.psize = 120;
  p.b = 22;
  p.b1 = 11;
  p.improve_threshold = 6;
  p.dist_threshold = 14.0;
  p.archive_cap = 45;
  return p;
}

inline void OptParams::validate() const {
  if (b < 4 || psize < b) throw std::invalid_argument("need psize >= b >= 4");
  if (b1 < 1 || b1 >= b) throw std::invalid_argument("need 1 <= b1 < b");
  if (archive_cap < 1) throw std::invalid_argument("archive_cap must be positive");
  if (dist_threshold < 0.0) throw std::invalid_argument("dist_threshold must be non-negative");
  if (max_evaluations == 0 && max_iter <= 0 && max_cpu_s <= 0.0)
    throw std::invalid_argument("set at least one of max_evaluations, max_iter, max_cpu_s");
}

using SolutionKey = std::vector<std::int64_t>;

struct SolutionKeyHash {
  std::size_t operator()(const SolutionKey& k) const {
    std::uint64_t h = 0x243F6A8885A308D3ULL;
    for (auto v : k) h = hash_combine(h, static_cast<std::uint64_t>(v));
    return static_cast<std::size_t>(h);
  }
};

/// What the engine needs from a problem. Solutions are plain values; the
/// problem owns evaluation, neighborhoods, recombination and the
/// placement-frequency memory used to bias diversification.
template <typename P>
concept SearchProblem = requires(P p, const P& cp, const typename P::Solution& s, std::mt19937_64& rng,
                                 const typename P::Move& mv) {
  typename P::Solution;
  typename P::Move;
  { p.initial() } -> std::convertible_to<typename P::Solution>;
  { p.evaluate(s) } -> std::convertible_to<ObjectiveVector>;
  { cp.encode(s) } -> std::convertible_to<SolutionKey>;
  { cp.distance(s, s) } -> std::convertible_to<double>;
  { p.diversify(s, rng) } -> std::convertible_to<std::optional<typename P::Solution>>;
  { p.record(s) };
  { p.moves(s, rng) } -> std::convertible_to<std::vector<typename P::Move>>;
  { cp.apply(s, mv) } -> std::convertible_to<std::optional<typename P::Solution>>;
  { p.combine(s, s, rng) } -> std::convertible_to<std::vector<typename P::Solution>>;
};

/// Visited solutions (with objectives once evaluated) and combined pairs.
/// Lookups are exact: keys are full encodings, hashing only buckets them.
class TabuMemory {
 public:
  bool visited(const SolutionKey& k) const { return seen_.count(k) != 0; }
  /// True if newly inserted.
  bool mark_visited(const SolutionKey& k) { return seen_.emplace(k, std::nullopt).second; }
  std::optional<ObjectiveVector> cached(const SolutionKey& k) const {
    auto it = seen_.find(k);
    return it == seen_.end() ? std::nullopt : it->second;
  }
  void store(const SolutionKey& k, const ObjectiveVector& v) { seen_[k] = v; }
  std::size_t visited_count() const { return seen_.size(); }

  bool combined(std::uint64_t a, std::uint64_t b) const { return pairs_.count(pair_key(a, b)) != 0; }
  bool mark_combined(std::uint64_t a, std::uint64_t b) { return pairs_.insert(pair_key(a, b)).second; }

 private:
  static std::pair<std::uint64_t, std::uint64_t> pair_key(std::uint64_t a, std::uint64_t b) {
    return a < b ? std::pair{a, b} : std::pair{b, a};
  }
  struct PairHash {
    std::size_t operator()(const std::pair<std::uint64_t, std::uint64_t>& p) const {
      return static_cast<std::size_t>(hash_combine(p.first, p.second));
    }
  };
  std::unordered_map<SolutionKey, std::optional<ObjectiveVector>, SolutionKeyHash> seen_;
  std::unordered_set<std::pair<std::uint64_t, std::uint64_t>, PairHash> pairs_;
};

template <typename S>
struct Member {
  S solution;
  ObjectiveVector obj;
  SolutionKey key;
  std::uint64_t serial = 0;
};

/// Bounded store of mutually non-dominated members.
template <typename S>
class Archive {
 public:
  explicit Archive(int cap) : cap_(static_cast<std::size_t>(cap)) {}

  /// Rejects a candidate some member strictly dominates (or an identical
  /// solution); otherwise drops the members it strictly dominates, appends
  /// it, and evicts the most crowded member while over capacity (ties: the
  /// later member).
  bool insert(const Member<S>& m) {
    for (const auto& a : items_)
      if (strictly_dominates(a.obj, m.obj) || a.key == m.key) return false;
    std::erase_if(items_, [&](const Member<S>& a) { return strictly_dominates(m.obj, a.obj); });
    items_.push_back(m);
    while (items_.size() > cap_) {
      const auto cd = crowding_distance(objectives());
      std::size_t worst = 0;
      for (std::size_t k = 1; k < cd.size(); ++k)
        if (cd[k] <= cd[worst]) worst = k;
      items_.erase(items_.begin() + static_cast<std::ptrdiff_t>(worst));
    }
    return true;
  }

  std::vector<ObjectiveVector> objectives() const {
    std::vector<ObjectiveVector> out;
    out.reserve(items_.size());
    for (const auto& a : items_) out.push_back(a.obj);
    return out;
  }
  const std::vector<Member<S>>& items() const { return items_; }
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }

 private:
  std::size_t cap_;
  std::vector<Member<S>> items_;
};

/// Orders members by (non-domination rank, crowding distance descending,
/// f1, f2, serial) computed over the given set. Returns indices.
template <typename S>
std::vector<std::size_t> fitness_order(const std::vector<Member<S>>& set) {
  std::vector<ObjectiveVector> objs;
  objs.reserve(set.size());
  for (const auto& m : set) objs.push_back(m.obj);
  const auto rank = pareto_ranks(objs);
  std::vector<double> crowd(set.size(), 0.0);
  const int levels = rank.empty() ? 0 : *std::max_element(rank.begin(), rank.end()) + 1;
  for (int level = 0; level < levels; ++level) {
    std::vector<std::size_t> idx;
    std::vector<ObjectiveVector> front;
    for (std::size_t k = 0; k < set.size(); ++k)
      if (rank[k] == level) {
        idx.push_back(k);
        front.push_back(objs[k]);
      }
    const auto cd = crowding_distance(front);
    for (std::size_t i = 0; i < idx.size(); ++i) crowd[idx[i]] = cd[i];
  }
  std::vector<std::size_t> order(set.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (rank[a] != rank[b]) return rank[a] < rank[b];
    if (crowd[a] != crowd[b]) return crowd[a] > crowd[b];
    if (objs[a].f1 != objs[b].f1) return objs[a].f1 < objs[b].f1;
    if (objs[a].f2 != objs[b].f2) return objs[a].f2 < objs[b].f2;
    return set[a].serial < set[b].serial;
  });
  return order;
}

struct ProgressRow {
  int iteration = 0;
  std::uint64_t evaluations = 0;
  std::size_t archive_size = 0;
  double hvm = 0.0;
};

struct RunStats {
  std::uint64_t evaluations = 0;
  int iterations = 0;
  int refset_insertions = 0;
  int rebuilds = 0;
  int threshold_relaxations = 0;
  bool diversification_short = false;
  double cpu_s = 0.0;
};

template <typename S>
struct RunResult {
  std::vector<Member<S>> front;
  std::vector<Member<S>> refset;
  RunStats stats;
  std::vector<ProgressRow> progress;
};

double thread_cpu_seconds();

/// Two-tier scatter search with tabu memory. Tier 1 (the first b1 refset
/// entries) holds the fittest members, tier 2 the most diverse.
template <SearchProblem P>
class ScatterSearch {
 public:
  using S = typename P::Solution;
  using M = Member<S>;

  ScatterSearch(P& problem, OptParams params)
      : problem_(problem), params_(params), rng_(params.seed), archive_(params.archive_cap) {
    params_.validate();
  }

  RunResult<S> run() {
    cpu_start_ = thread_cpu_seconds();
    const S seed = problem_.initial();
    std::vector<M> pop;
    if (auto m = evaluate(seed)) pop.push_back(*m);
    auto [fresh, short_flag] = diversification_generate(seed, static_cast<std::size_t>(params_.psize) - 1);
    stats_.diversification_short = short_flag;
    for (auto& s : fresh)
      if (auto m = evaluate(s)) pop.push_back(*m);
    std::vector<ObjectiveVector> context;
    for (const auto& m : pop) context.push_back(m.obj);
    hv_bounds_ = bounds_of(context);
    for (auto& m : pop) m = improve(m, context);

    refset_init(pop);
    log_progress(0);

    int iter = 0;
    while (!exhausted() && (params_.max_iter <= 0 || iter < params_.max_iter)) {
      auto pairs = subset_generate();
      if (pairs.empty()) {
        if (!params_.rebuild) break;
        rebuild();
        pairs = subset_generate();
        if (pairs.empty()) break;
      }
      ++iter;
      int admitted = 0;
      std::vector<M> pool;
      for (std::size_t q = 0; q < pairs.size() && !exhausted(); ++q) {
        const auto [sa, sb] = pairs[q];
        const M* a = find_serial(sa);
        const M* b = find_serial(sb);
        if (!a || !b) continue;
        std::vector<S> children = problem_.combine(a->solution, b->solution, rng_);
        if (params_.elitist && !archive_.empty()) {
          const M partner = tournament();
          if (partner.key != a->key) {
            auto extra = problem_.combine(a->solution, partner.solution, rng_);
            children.insert(children.end(), extra.begin(), extra.end());
          }
        }
        std::vector<ObjectiveVector> ctx = refset_objectives();
        for (auto& child : children) {
          if (memory_.visited(problem_.encode(child))) continue;
          auto m = evaluate(child);
          if (!m) break;
          M best = improve(*m, ctx);
          if (params_.dynamic_update) {
            if (refset_update_dynamic(best)) {
              ++admitted;
              auto more = subset_generate();
              pairs.insert(pairs.end(), more.begin(), more.end());
              ctx = refset_objectives();
            }
          } else {
            pool.push_back(std::move(best));
          }
        }
      }
      if (!params_.dynamic_update) admitted = refset_update_static(pool);
      stats_.refset_insertions += admitted;
      if (admitted == 0 && params_.rebuild && !exhausted()) rebuild();
      log_progress(iter);
    }
    stats_.iterations = iter;
    return finish();
  }

  // ---- individual methods, public for testing -----------------------------

  /// Up to `count` distinct, unvisited solutions, each marked visited. The
  /// flag is set when attempts ran out first.
  std::pair<std::vector<S>, bool> diversification_generate(const S& seed, std::size_t count) {
    std::vector<S> out;
    const std::size_t max_attempts = 20 * count + 50;
    for (std::size_t attempt = 0; attempt < max_attempts && out.size() < count; ++attempt) {
      auto s = problem_.diversify(seed, rng_);
      if (!s) continue;
      if (!memory_.mark_visited(problem_.encode(*s))) continue;
      problem_.record(*s);
      out.push_back(std::move(*s));
    }
    const bool short_of = out.size() < count;
    return {std::move(out), short_of};
  }

  /// Evaluates unless already evaluated; nullopt once the budget is spent.
  std::optional<M> evaluate(const S& s) {
    auto key = problem_.encode(s);
    if (auto c = memory_.cached(key)) return M{s, *c, std::move(key), next_serial_++};
    if (exhausted()) return std::nullopt;
    const bool fresh = memory_.mark_visited(key);
    if (fresh) problem_.record(s);
    const ObjectiveVector obj = problem_.evaluate(s);
    ++stats_.evaluations;
    memory_.store(key, obj);
    M m{s, obj, std::move(key), next_serial_++};
    if (params_.elitist) archive_.insert(m);
    return m;
  }

  /// Tabu step when `m` dominates at least improve_threshold members of
  /// `context`, then first-improvement descent. Never returns a member
  /// worse than `m`.
  M improve(const M& m, const std::vector<ObjectiveVector>& context) {
    int count = 0;
    for (const auto& o : context)
      if (strictly_dominates(m.obj, o)) ++count;
    M cur = m;
    if (count >= params_.improve_threshold) cur = tabu_step(cur);
    return local_search(cur);
  }

  /// Minimum diversity test: candidates in fitness order are admitted
  /// when their distance to the admitted set is at least the threshold (and
  /// positive); the threshold halves while the set cannot be filled.
  void refset_init(const std::vector<M>& population) {
    refset_.clear();
    if (population.empty()) return;
    const auto order = fitness_order(population);
    std::vector<char> taken(population.size(), 0);
    double threshold = params_.dist_threshold;
    const auto b = static_cast<std::size_t>(params_.b);
    refset_.push_back(population[order[0]]);
    taken[order[0]] = 1;
    for (;;) {
      bool any_positive = false;
      for (auto k : order) {
        if (refset_.size() >= b) break;
        if (taken[k]) continue;
        const double d = distance_min(population[k].solution, refset_);
        if (d > 0.0) any_positive = true;
        if (d > 0.0 && d >= threshold) {
          refset_.push_back(population[k]);
          taken[k] = 1;
        }
      }
      if (refset_.size() >= b || !any_positive) break;
      threshold *= 0.5;
      ++stats_.threshold_relaxations;
      if (threshold < 1e-9) threshold = 0.0;
    }
    reorder();
  }

  /// Pairs (by member serial) with at least one member not yet combined
  /// with the other; every emitted pair is recorded.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> subset_generate() {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
    for (std::size_t i = 0; i < refset_.size(); ++i)
      for (std::size_t j = i + 1; j < refset_.size(); ++j)
        if (memory_.mark_combined(refset_[i].serial, refset_[j].serial))
          out.push_back({refset_[i].serial, refset_[j].serial});
    return out;
  }

  /// Immediate admission: replaces the worst tier-1 member if the candidate
  /// ranks above it, else the least diverse tier-2 member if the candidate
  /// is farther from the refset than that member is.
  bool refset_update_dynamic(const M& cand) {
    for (const auto& r : refset_)
      if (r.key == cand.key) return false;
    const auto b1 = tier1_size();
    std::vector<M> t1(refset_.begin(), refset_.begin() + static_cast<std::ptrdiff_t>(b1));
    if (b1 < static_cast<std::size_t>(params_.b1) || refset_.size() < static_cast<std::size_t>(params_.b)) {
      refset_.push_back(cand);
      reorder();
      return true;
    }
    t1.push_back(cand);
    const auto order = fitness_order(t1);
    if (order.back() != t1.size() - 1) {
      refset_[order.back()] = cand;
      reorder();
      return true;
    }
    const double d = distance_min(cand.solution, refset_);
    std::size_t least = b1;
    double least_d = std::numeric_limits<double>::infinity();
    for (std::size_t k = b1; k < refset_.size(); ++k) {
      const double dk = distance_min_excluding(k);
      if (dk < least_d) {
        least_d = dk;
        least = k;
      }
    }
    if (least < refset_.size() && d > least_d) {
      refset_[least] = cand;
      reorder();
      return true;
    }
    return false;
  }

  /// Batch admission after a sweep: best b1 of refset and pool by fitness,
  /// the rest by max-min distance. Returns how many pool members got in.
  int refset_update_static(const std::vector<M>& pool) {
    std::vector<M> all = refset_;
    for (const auto& p : pool) {
      bool dup = false;
      for (const auto& a : all) dup = dup || a.key == p.key;
      if (!dup) all.push_back(p);
    }
    const auto order = fitness_order(all);
    std::vector<M> next;
    std::vector<char> taken(all.size(), 0);
    for (std::size_t k = 0; k < order.size() && next.size() < static_cast<std::size_t>(params_.b1); ++k) {
      next.push_back(all[order[k]]);
      taken[order[k]] = 1;
    }
    fill_diverse(next, all, taken, static_cast<std::size_t>(params_.b));
    std::unordered_set<std::uint64_t> before;
    for (const auto& r : refset_) before.insert(r.serial);
    int admitted = 0;
    for (const auto& n : next)
      if (!before.count(n.serial)) ++admitted;
    refset_ = std::move(next);
    reorder();
    return admitted;
  }

  /// Keeps tier 1; refills tier 2 from freshly diversified, improved
  /// solutions by max-min distance to everything kept. The old tier 2 stays
  /// if the new one would be less spread out.
  void rebuild() {
    ++stats_.rebuilds;
    const auto b1 = tier1_size();
    std::vector<M> keep(refset_.begin(), refset_.begin() + static_cast<std::ptrdiff_t>(b1));
    std::vector<M> old2(refset_.begin() + static_cast<std::ptrdiff_t>(b1), refset_.end());
    const auto want = static_cast<std::size_t>(params_.b) - keep.size();
    std::vector<M> cands;
    const std::vector<ObjectiveVector> ctx = refset_objectives();
    const std::size_t per_seed = std::max<std::size_t>(1, want * static_cast<std::size_t>(params_.rebuild_pool_factor) /
                                                                std::max<std::size_t>(keep.size(), 1));
    for (std::size_t i = 0; i < std::max<std::size_t>(keep.size(), 1) && !exhausted(); ++i) {
      const S& seed = keep.empty() ? refset_.front().solution : keep[i].solution;
      auto [fresh, _] = diversification_generate(seed, per_seed);
      for (auto& s : fresh) {
        auto m = evaluate(s);
        if (!m) break;
        cands.push_back(improve(*m, ctx));
      }
    }
    std::vector<M> next = keep;
    std::vector<char> taken(cands.size(), 0);
    fill_diverse(next, cands, taken, static_cast<std::size_t>(params_.b));
    std::vector<M> new2(next.begin() + static_cast<std::ptrdiff_t>(keep.size()), next.end());
    if (new2.empty()) return;
    if (old2.size() >= 2 && new2.size() >= old2.size() && min_pairwise(new2) < min_pairwise(old2)) return;
    if (new2.size() < old2.size()) return;
    refset_ = std::move(next);
    reorder();
  }

  const std::vector<M>& refset() const { return refset_; }
  const Archive<S>& archive() const { return archive_; }
  TabuMemory& memory() { return memory_; }
  const RunStats& stats() const { return stats_; }
  std::size_t tier1_size() const { return std::min(refset_.size(), static_cast<std::size_t>(params_.b1)); }
  double min_pairwise(const std::vector<M>& set) const {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < set.size(); ++i)
      for (std::size_t j = i + 1; j < set.size(); ++j)
        best = std::min(best, problem_.distance(set[i].solution, set[j].solution));
    return best;
  }

 private:
  bool exhausted() {
    if (params_.max_evaluations > 0 && stats_.evaluations >= params_.max_evaluations) return true;
    if (params_.max_cpu_s > 0.0 && thread_cpu_seconds() - cpu_start_ >= params_.max_cpu_s) return true;
    return false;
  }

  double distance_min(const S& s, const std::vector<M>& set) const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& m : set) best = std::min(best, problem_.distance(s, m.solution));
    return best;
  }

  double distance_min_excluding(std::size_t k) const {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < refset_.size(); ++j)
      if (j != k) best = std::min(best, problem_.distance(refset_[k].solution, refset_[j].solution));
    return best;
  }

  void fill_diverse(std::vector<M>& next, const std::vector<M>& from, std::vector<char>& taken, std::size_t cap) {
    while (next.size() < cap) {
      std::size_t pick = from.size();
      double best = 0.0;
      for (std::size_t k = 0; k < from.size(); ++k) {
        if (taken[k]) continue;
        const double d = distance_min(from[k].solution, next);
        if (d > best) {
          best = d;
          pick = k;
        }
      }
      if (pick == from.size()) break;
      taken[pick] = 1;
      next.push_back(from[pick]);
    }
  }

  // Tier 1 by fitness, tier 2 by distance to the rest (most diverse first).
  void reorder() {
    const auto b1 = tier1_size();
    std::vector<M> all = std::move(refset_);
    const auto order = fitness_order(all);
    refset_.clear();
    for (std::size_t k = 0; k < b1; ++k) refset_.push_back(all[order[k]]);
    std::vector<M> rest;
    for (std::size_t k = b1; k < order.size(); ++k) rest.push_back(all[order[k]]);
    std::vector<double> d(rest.size());
    for (std::size_t k = 0; k < rest.size(); ++k) {
      d[k] = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < all.size(); ++j)
        if (all[j].serial != rest[k].serial) d[k] = std::min(d[k], problem_.distance(rest[k].solution, all[j].solution));
    }
    std::vector<std::size_t> idx(rest.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return d[a] > d[b]; });
    for (auto k : idx) refset_.push_back(rest[k]);
  }

  const M* find_serial(std::uint64_t s) const {
    for (const auto& m : refset_)
      if (m.serial == s) return &m;
    return nullptr;
  }

  std::vector<ObjectiveVector> refset_objectives() const {
    std::vector<ObjectiveVector> out;
    for (const auto& m : refset_) out.push_back(m.obj);
    return out;
  }

  // Binary tournament over archive and refset: lower rank wins, then the
  // less crowded.
  M tournament() {
    std::vector<M> pool = archive_.items();
    pool.insert(pool.end(), refset_.begin(), refset_.end());
    const auto order = fitness_order(pool);
    std::vector<std::size_t> place(pool.size());
    for (std::size_t k = 0; k < order.size(); ++k) place[order[k]] = k;
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    const auto a = pick(rng_);
    const auto b = pick(rng_);
    return pool[place[a] <= place[b] ? a : b];
  }

  M tabu_step(const M& start) {
    M cur = start;
    M best = start;
    for (int it = 0; it < params_.tabu_iterations && !exhausted(); ++it) {
      auto moves = problem_.moves(cur.solution, rng_);
      std::optional<M> step;
      int tried = 0;
      for (const auto& mv : moves) {
        if (tried >= params_.tabu_sample) break;
        auto s = problem_.apply(cur.solution, mv);
        if (!s || memory_.visited(problem_.encode(*s))) continue;
        auto m = evaluate(*s);
        if (!m) break;
        ++tried;
        if (!step || better_step(m->obj, step->obj)) step = std::move(*m);
      }
      if (!step) break;
      cur = *step;
      if (strictly_dominates(cur.obj, best.obj)) best = cur;
    }
    return best;
  }

  // Neighbor preference inside the tabu step: dominance first, then the
  // smaller normalized objective sum.
  bool better_step(const ObjectiveVector& a, const ObjectiveVector& b) const {
    if (strictly_dominates(a, b)) return true;
    if (strictly_dominates(b, a)) return false;
    const auto na = normalize(a, hv_bounds_);
    const auto nb = normalize(b, hv_bounds_);
    return na.f1 + na.f2 < nb.f1 + nb.f2;
  }

  M local_search(const M& start) {
    M cur = start;
    int spent = 0;
    for (;;) {
      bool moved = false;
      for (const auto& mv : problem_.moves(cur.solution, rng_)) {
        if (spent >= params_.ls_max_evals) return cur;
        auto s = problem_.apply(cur.solution, mv);
        if (!s) continue;
        const auto key = problem_.encode(*s);
        std::optional<M> m;
        if (auto c = memory_.cached(key)) {
          m = M{*s, *c, key, next_serial_++};
        } else {
          m = evaluate(*s);
          if (!m) return cur;
          ++spent;
        }
        if (strictly_dominates(m->obj, cur.obj)) {
          cur = std::move(*m);
          moved = true;
          break;
        }
      }
      if (!moved) return cur;
    }
  }

  void log_progress(int iteration) {
    std::vector<ObjectiveVector> pts = params_.elitist ? archive_.objectives() : refset_objectives();
    const double hv = hypervolume(normalize(nondominated_filter(pts), hv_bounds_), {1.0, 1.0});
    progress_.push_back({iteration, stats_.evaluations, archive_.size(), hv});
  }

  RunResult<S> finish() {
    RunResult<S> out;
    std::vector<M> pool = refset_;
    if (params_.elitist) pool.insert(pool.end(), archive_.items().begin(), archive_.items().end());
    std::vector<ObjectiveVector> objs;
    for (const auto& m : pool) objs.push_back(m.obj);
    std::unordered_set<SolutionKey, SolutionKeyHash> seen;
    for (auto k : nondominated_indices(objs))
      if (seen.insert(pool[k].key).second) out.front.push_back(pool[k]);
    out.refset = refset_;
    stats_.cpu_s = thread_cpu_seconds() - cpu_start_;
    out.stats = stats_;
    out.progress = progress_;
    return out;
  }

  P& problem_;
  OptParams params_;
  std::mt19937_64 rng_;
  TabuMemory memory_;
  Archive<S> archive_;
  std::vector<M> refset_;
  RunStats stats_;
  std::vector<ProgressRow> progress_;
  Bounds hv_bounds_{{0, 0}, {1, 1}};
  std::uint64_t next_serial_ = 1;
  double cpu_start_ = 0.0;
};

}  // namespace runway
