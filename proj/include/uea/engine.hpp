#pragma once

#include <algorithm>
#include <atomic>
#include <cassert>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "uea/bitstring.hpp"
#include "uea/distributions.hpp"
#include "uea/error.hpp"
#include "uea/mutation.hpp"
#include "uea/objectives.hpp"
#include "uea/rng.hpp"

namespace uea {

enum class StartKind { Uniform, Fixed, Distance };

struct StartPoint {
  StartKind kind = StartKind::Uniform;
  BitString point;            // Fixed
  std::size_t distance = 0;   // Distance: Hamming distance from 1^n

  static StartPoint uniform() { return {}; }
  static StartPoint fixed(BitString x) { return {StartKind::Fixed, std::move(x), 0}; }
  static StartPoint at_distance(std::size_t d) { return {StartKind::Distance, {}, d}; }
};

struct EngineConfig {
  static constexpr std::uint64_t kDefaultMaxEvaluations = 10'000'000'000ULL;

  StartPoint start;
  std::uint64_t max_evaluations = kDefaultMaxEvaluations;
  bool record_trace = false;
  std::uint64_t seed = 0;
};

struct TracePoint {
  std::uint64_t t = 0;
  double fitness = 0.0;
  std::size_t potential = 0;  // X_t, best distance of any incumbent so far

  friend bool operator==(const TracePoint&, const TracePoint&) = default;
};

struct RunRecord {
  std::uint64_t seed = 0;
  std::uint64_t iterations = 0;   // mutation steps executed
  std::uint64_t evaluations = 0;  // iterations + 1, counting the initial point
  bool hit_optimum = false;
  double final_fitness = 0.0;
  std::vector<TracePoint> trace;

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

namespace detail {

inline BitString initial_point(const StartPoint& start, std::size_t n, Rng& rng) {
  switch (start.kind) {
    case StartKind::Uniform:
      return BitString::random(n, rng);
    case StartKind::Fixed:
      if (start.point.size() != n) throw Error(ErrorCode::DimensionMismatch, "start point length differs from n");
      return start.point;
    case StartKind::Distance:
      if (start.distance > n) throw Error(ErrorCode::OutOfRange, "start distance exceeds n");
      return flip_k(BitString::ones(n), start.distance, rng);
  }
  return BitString::random(n, rng);
}

}  // namespace detail

// One trajectory of the (1+1) EA with flip distribution D: sample a start,
// then repeatedly draw k ~ D, flip k random bits, keep the offspring iff its
// fitness is >= the parent's. Stops once an optimum is the incumbent or the
// evaluation cap is reached.
inline RunRecord run(const Objective& f, const FlipDistribution& d, const EngineConfig& cfg) {
  const std::size_t n = f.n();
  if (d.n() != n) throw Error(ErrorCode::DimensionMismatch, "distribution n differs from objective n");
  if (cfg.max_evaluations < 1) throw Error(ErrorCode::OutOfRange, "max_evaluations must be >= 1");

  Rng rng(cfg.seed);
  BitString x = detail::initial_point(cfg.start, n, rng);

  RunRecord rec;
  rec.seed = cfg.seed;
  double fitness = f.evaluate(x);
  std::size_t best_distance = distance(x);
  if (cfg.record_trace) rec.trace.push_back({0, fitness, best_distance});

  bool hit = f.is_optimal(x);
  std::uint64_t t = 0;
  if (!hit) {
    FlipSampler sampler(n);
    const bool parity = f.kind() == ObjectiveKind::ParitySwap;
    const bool lexicographic = f.kind() == ObjectiveKind::BinVal;
    const bool exact_fitness = f.is_exact();
    const auto w = f.weights();
    while (t + 1 < cfg.max_evaluations) {
      ++t;
      const std::size_t k = d.sample(rng);
      if (k == 0) continue;  // offspring == parent
      const auto flips = sampler.draw(k, rng);

      bool accept = false;
      double next_fitness = fitness;
      if (parity) {
        std::size_t lost = 0;
        for (auto p : flips) lost += x.test(p);
        const std::size_t next_ones = x.count_ones() + (k - lost) - lost;
        next_fitness = f.value_at_level(next_ones);
        accept = next_fitness >= fitness;
      } else if (lexicographic) {
        // 2^i exceeds the sum of all lower weights: the highest flipped bit
        // decides, and k >= 1 rules out ties.
        const auto top = *std::max_element(flips.begin(), flips.end());
        accept = !x.test(top);
        if (accept && exact_fitness) {
          for (auto p : flips) next_fitness += x.test(p) ? -w[p] : w[p];
        }
      } else {
        double delta = 0.0;
        for (auto p : flips) delta += x.test(p) ? -w[p] : w[p];
        accept = delta >= 0.0;
        next_fitness = fitness + delta;
      }
      if (!accept) continue;

      assert(next_fitness >= fitness);
      for (auto p : flips) x.flip(p);
      fitness = exact_fitness ? next_fitness : (cfg.record_trace ? f.evaluate(x) : fitness);
      if (cfg.record_trace) {
        const std::size_t dist = std::min(best_distance, distance(x));
        const auto& last = rec.trace.back();
        if (dist != last.potential || fitness != last.fitness) rec.trace.push_back({t, fitness, dist});
        best_distance = dist;
      }
      if (f.is_optimal(x)) {
        hit = true;
        break;
      }
    }
  }

  rec.iterations = t;
  rec.evaluations = t + 1;
  rec.hit_optimum = hit;
  rec.final_fitness = f.evaluate(x);
  return rec;
}

// Independent trials; trial i runs with seed mix64(cfg.seed ^ i). The result
// at index i depends only on i, never on the worker that produced it.
inline std::vector<RunRecord> run_batch(const Objective& f, const FlipDistribution& d,
                                        const EngineConfig& cfg, std::size_t trials,
                                        std::size_t workers = 1) {
  if (trials == 0) throw Error(ErrorCode::ZeroTrials, "trials must be >= 1");
  if (d.n() != f.n()) throw Error(ErrorCode::DimensionMismatch, "distribution n differs from objective n");
  workers = std::clamp<std::size_t>(workers, 1, trials);

  std::vector<RunRecord> out(trials);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    EngineConfig local = cfg;
    for (std::size_t i = next++; i < trials; i = next++) {
      local.seed = trial_seed(cfg.seed, i);
      try {
        out[i] = run(f, d, local);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = trials;
      }
    }
  };

  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace uea
