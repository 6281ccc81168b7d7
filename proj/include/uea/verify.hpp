#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "uea/distributions.hpp"
#include "uea/drift.hpp"
#include "uea/engine.hpp"
#include "uea/experiment.hpp"
#include "uea/objectives.hpp"
#include "uea/oracle.hpp"
#include "uea/stats.hpp"

// The acceptance battery: twelve criteria, each a deterministic check or a
// pinned-seed simulation, reported as pass/fail with the measured values.
namespace uea::verify {

enum class Level { Quick, Full };

using ProgressFn = std::function<double(std::size_t n, std::size_t d, std::size_t r)>;

struct Options {
  Level level = Level::Full;
  std::size_t workers = 1;
  std::uint64_t master_seed = 0x5eed2024;
  // Replaces B in criterion 1's h~ evaluation (mutation testing of the suite).
  ProgressFn progress;
};

struct Result {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

namespace detail {

using experiment::format_double;

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline double rel_err(double got, double want) {
  if (got == want) return 0.0;
  return std::abs(got - want) / std::max(std::abs(got), std::abs(want));
}

inline Result titled(int id, std::string title) {
  Result r;
  r.id = id;
  r.title = std::move(title);
  return r;
}

inline std::uint64_t seed_for(const Options& o, std::uint64_t criterion, std::uint64_t part) {
  return trial_seed(o.master_seed, criterion * 1000 + part);
}

inline std::vector<double> iterations(const std::vector<RunRecord>& recs) {
  std::vector<double> out;
  out.reserve(recs.size());
  for (const auto& r : recs) out.push_back(static_cast<double>(r.iterations));
  return out;
}

inline BitString with_ones(std::size_t n, std::size_t ones) {
  BitString x = BitString::zeros(n);
  for (std::size_t i = 0; i < ones; ++i) x.set(i, true);
  return x;
}

// OneMax-style objectives for the headline-law runs.
inline Objective headline_objective(int which, std::size_t n, const Options& o) {
  if (which == 0) return Objective::onemax(n);
  if (which == 1) return Objective::binval(n);
  Rng rng(seed_for(o, 5, 900 + n));
  std::uniform_real_distribution<double> u(1.0, 10.0);
  std::vector<double> w(n);
  for (auto& v : w) v = u(rng);
  return Objective::linear(std::move(w));
}

inline const char* headline_name(int which) {
  return which == 0 ? "onemax" : which == 1 ? "binval" : "random_linear";
}

}  // namespace detail

inline constexpr std::size_t kHeadlineSizes[] = {250, 500, 1000, 2000};
inline constexpr std::size_t kHeadlineTrials = 500;

struct HeadlineCell {
  int objective = 0;
  std::size_t n = 0;
  double p1 = 0.0;
  double mean = 0.0;
  double std_error = 0.0;
  double ratio = 0.0;
};

// Simulations shared by criteria 5 and 6: SBM c=1 on three linear functions.
inline std::vector<HeadlineCell> headline_runs(const Options& o) {
  std::vector<HeadlineCell> cells;
  for (int which = 0; which < 3; ++which) {
    for (std::size_t n : kHeadlineSizes) {
      const Objective f = detail::headline_objective(which, n, o);
      const auto d = FlipDistribution::standard_bit_mutation(n, 1.0);
      EngineConfig cfg;
      cfg.seed = detail::seed_for(o, 5, static_cast<std::uint64_t>(which) * 10000 + n);
      const auto s = stats::summarize(detail::iterations(run_batch(f, d, cfg, kHeadlineTrials, o.workers)));
      const double nn = static_cast<double>(n);
      cells.push_back({which, n, d.p(1), s.mean, s.std_error, s.mean * d.p(1) / (nn * std::log(nn))});
    }
  }
  return cells;
}

class Suite {
 public:
  explicit Suite(Options options) : o_(std::move(options)) {}

  static std::vector<int> criteria(Level level) {
    if (level == Level::Quick) return {1, 2, 3, 4, 9, 10, 11, 12};
    return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
  }

  Result run(int id) {
    const auto t0 = std::chrono::steady_clock::now();
    Result r;
    r.id = id;
    try {
      switch (id) {
        case 1: r = c1(); break;
        case 2: r = c2(); break;
        case 3: r = c3(); break;
        case 4: r = c4(); break;
        case 5: r = c5(); break;
        case 6: r = c6(); break;
        case 7: r = c7(); break;
        case 8: r = c8(); break;
        case 9: r = c9(); break;
        case 10: r = c10(); break;
        case 11: r = c11(); break;
        case 12: r = c12(); break;
        default: throw Error(ErrorCode::OutOfRange, "no criterion " + std::to_string(id));
      }
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("exception: ") + e.what();
    }
    r.id = id;
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    // Stated time budgets count toward the verdict.
    if (const double budget = time_budget(id); budget > 0.0 && r.seconds > budget) {
      r.passed = false;
      r.detail += " | over time budget of " + detail::fmt(budget) + " s";
    }
    return r;
  }

  std::vector<Result> run_all() {
    std::vector<Result> out;
    for (int id : criteria(o_.level)) out.push_back(run(id));
    return out;
  }

  static double time_budget(int id) {
    switch (id) {
      case 1: return 10.0;
      case 2: return 120.0;
      case 5: return 1800.0;
      case 7: return 1200.0;
      default: return 0.0;
    }
  }

 private:
  // h~(d) against exhaustive enumeration of the best-so-far distance drift.
  Result c1() {
    Result r = detail::titled(1, "exact drift identity (h~ vs enumeration, n=12)");
    const std::size_t n = 12;
    const std::vector<FlipDistribution> ds = {
        FlipDistribution::point_mass(n, 1), FlipDistribution::point_mass(n, n - 1),
        FlipDistribution::standard_bit_mutation(n, 1.0), FlipDistribution::power_law(n, 1.5),
        FlipDistribution::power_law(n, 3.0)};
    const Objective f = Objective::onemax(n);
    double worst = 0.0;
    for (const auto& d : ds) {
      for (std::size_t dist = 0; dist <= 6; ++dist) {
        const double want = oracle::exact_step_drift(f, d, detail::with_ones(n, dist), oracle::Potential::EvaluatedDistance);
        const double got = o_.progress ? drift::h_tilde_with(d, dist, o_.progress) : drift::h_tilde(d, dist);
        worst = std::max(worst, detail::rel_err(got, want));
      }
    }
    r.passed = worst <= 1e-12;
    r.detail = "max relative error " + detail::fmt(worst) + " (limit 1e-12)";
    return r;
  }

  // E[g-decrease] >= ((alpha-1)/alpha)(p1/n) g(x) over all 1024 states.
  Result c2() {
    Result r = detail::titled(2, "potential drift inequality (n=10, alpha=2)");
    const std::size_t n = 10;
    const double alpha = 2.0;
    std::vector<double> custom(n + 1, 0.0);
    custom[1] = 0.3;
    custom[2] = 0.5;
    custom[5] = 0.2;
    const std::vector<FlipDistribution> ds = {FlipDistribution::point_mass(n, 1),
                                              FlipDistribution::standard_bit_mutation(n, 1.0),
                                              FlipDistribution::custom(n, custom)};
    const std::vector<Objective> fs = {Objective::onemax(n), Objective::binval(n),
                                       Objective::linear({1, 1, 2, 3, 5, 8, 13, 21, 34, 55})};
    std::size_t checked = 0, violations = 0;
    double min_ratio = std::numeric_limits<double>::infinity();
    for (const auto& f : fs) {
      for (const auto& d : ds) {
        const auto pw = drift::potential_weights(d, alpha, f);
        const double factor = (alpha - 1.0) / alpha * d.p(1) / static_cast<double>(n);
        for (std::size_t s = 0; s < (std::size_t{1} << n); ++s) {
          const BitString x = BitString::from_index(n, s);
          const double g = drift::wrong_bit_potential(pw, x);
          const double bound = factor * g;
          const double dr = oracle::exact_step_drift(f, d, x, oracle::Potential::Weight, &pw);
          ++checked;
          if (dr < bound) ++violations;
          if (g > 0.0) min_ratio = std::min(min_ratio, dr / bound);
        }
      }
    }
    r.passed = violations == 0 && checked == 9 * 1024;
    r.detail = std::to_string(checked) + " states checked, " + std::to_string(violations) +
               " violations, min drift/bound " + detail::fmt(min_ratio);
    return r;
  }

  Result c3() {
    Result r = detail::titled(3, "oracle vs closed form (RLS on OneMax)");
    const auto s4 = oracle::level_chain(Objective::onemax(4), FlipDistribution::point_mass(4, 1));
    const double e4 = s4.time_from(0);
    const auto s100 = oracle::level_chain(Objective::onemax(100), FlipDistribution::point_mass(100, 1));
    double harmonic = 0.0;
    for (int k = 1; k <= 100; ++k) harmonic += 1.0 / k;
    const double e100 = s100.time_from(0);
    const double err4 = std::abs(e4 - 25.0 / 3.0);
    const double err100 = detail::rel_err(e100, 100.0 * harmonic);
    r.passed = err4 <= 1e-12 && err100 <= 1e-9;
    r.detail = "n=4: " + detail::format_double(e4) + " (|err| " + detail::fmt(err4) + "), n=100: " + detail::format_double(e100) +
               " vs n*H_n " + detail::format_double(100.0 * harmonic) + " (rel " + detail::fmt(err100) + ")";
    return r;
  }

  Result c4() {
    Result r = detail::titled(4, "Monte Carlo vs oracle (6 scenarios, 10^4 trials)");
    constexpr std::size_t trials = 10'000;
    struct Scenario {
      std::string name;
      Objective f;
      FlipDistribution d;
      StartPoint start;
      double expected;
    };
    std::vector<Scenario> sc;
    {
      const auto f = Objective::onemax(100);
      const auto d = FlipDistribution::point_mass(100, 1);
      sc.push_back({"RLS onemax n=100", f, d, StartPoint::uniform(), oracle::level_chain(f, d).uniform_start()});
    }
    {
      const auto f = Objective::onemax(50);
      const auto d = FlipDistribution::standard_bit_mutation(50, 1.0);
      sc.push_back({"SBM c=1 onemax n=50", f, d, StartPoint::uniform(), oracle::level_chain(f, d).uniform_start()});
    }
    {
      const auto f = Objective::onemax(50);
      const auto d = FlipDistribution::power_law(50, 3.0);
      sc.push_back({"power-law 3 onemax n=50", f, d, StartPoint::uniform(), oracle::level_chain(f, d).uniform_start()});
    }
    {
      const auto f = Objective::binval(12);
      const auto d = FlipDistribution::standard_bit_mutation(12, 1.0);
      sc.push_back({"SBM c=1 binval n=12 (full chain)", f, d, StartPoint::uniform(),
                    oracle::full_chain(f, d).uniform_start()});
    }
    {
      const auto f = Objective::parity_swap(10);
      const auto d = FlipDistribution::point_mass(10, 9);
      sc.push_back({"point n-1 parity_swap n=10", f, d, StartPoint::uniform(), oracle::level_chain(f, d).uniform_start()});
    }
    {
      const std::size_t n = 20;
      const auto f = Objective::anchored(n, 1.0);
      const auto d = experiment::no_domination_distribution(n);
      sc.push_back({"anchored(1) n=20 distance 2", f, d, StartPoint::at_distance(2),
                    oracle::compressed_anchored_chain(1.0, n, d).distance_start(2)});
    }
    bool ok = true;
    std::ostringstream os;
    for (std::size_t k = 0; k < sc.size(); ++k) {
      EngineConfig cfg;
      cfg.start = sc[k].start;
      cfg.seed = detail::seed_for(o_, 4, k);
      const auto s = stats::summarize(detail::iterations(run_batch(sc[k].f, sc[k].d, cfg, trials, o_.workers)));
      const double z = (s.mean - sc[k].expected) / s.std_error;
      ok = ok && std::abs(z) <= 3.0;
      os << (k ? "; " : "") << sc[k].name << ": mean " << detail::fmt(s.mean) << " chain " << detail::fmt(sc[k].expected)
         << " z " << detail::fmt(z);
    }
    r.passed = ok;
    r.detail = os.str();
    return r;
  }

  const std::vector<HeadlineCell>& headline() {
    if (!headline_) headline_ = headline_runs(o_);
    return *headline_;
  }

  Result c5() {
    Result r = detail::titled(5, "headline law (SBM c=1, n up to 2000)");
    const auto& cells = headline();
    bool ok = true;
    std::ostringstream os;
    double at2000[3] = {0, 0, 0};
    for (int which = 0; which < 3; ++which) {
      double first = 0.0, last = 0.0;
      os << (which ? "; " : "") << detail::headline_name(which) << " ratios";
      for (const auto& c : cells) {
        if (c.objective != which) continue;
        ok = ok && c.ratio >= 0.75 && c.ratio <= 1.25;
        if (c.n == kHeadlineSizes[0]) first = c.ratio;
        if (c.n == kHeadlineSizes[3]) {
          last = c.ratio;
          at2000[which] = c.mean;
        }
        os << ' ' << detail::fmt(c.ratio);
      }
      ok = ok && std::abs(last - 1.0) <= std::abs(first - 1.0);
    }
    double spread = 0.0;
    for (int a = 0; a < 3; ++a) {
      for (int b = a + 1; b < 3; ++b) {
        spread = std::max(spread, std::abs(at2000[a] - at2000[b]) / std::min(at2000[a], at2000[b]));
      }
    }
    ok = ok && spread <= 0.10;
    os << "; max pairwise spread at n=2000 " << detail::fmt(spread);
    r.passed = ok;
    r.detail = os.str();
    return r;
  }

  Result c6() {
    Result r = detail::titled(6, "lower-bound consistency (mean >= sum 1/h - n)");
    bool ok = true;
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& c : headline()) {
      const auto prof = drift::variable_drift_lower_bound(FlipDistribution::standard_bit_mutation(c.n, 1.0));
      const double margin = c.mean - (prof.sum_inverse_h - static_cast<double>(c.n));
      ok = ok && margin >= 0.0;
      worst = std::min(worst, margin / c.mean);
    }
    r.passed = ok;
    r.detail = "12 scenarios, smallest (mean - bound)/mean " + detail::fmt(worst);
    return r;
  }

  Result c7() {
    Result r = detail::titled(7, "small-p1 speedup (p1 = n^-1/2, n=10^4)");
    const std::size_t n = 10'000;
    const double nn = static_cast<double>(n);
    std::vector<double> p(n + 1, 0.0);
    p[1] = 1.0 / std::sqrt(nn);
    p[2] = 1.0 - p[1];
    const auto d = FlipDistribution::custom(n, p);
    EngineConfig cfg;
    cfg.seed = detail::seed_for(o_, 7, 0);
    const auto recs = run_batch(Objective::onemax(n), d, cfg, 30, o_.workers);
    const auto s = stats::summarize(detail::iterations(recs));
    const double ratio = s.mean * d.p(1) / (nn * std::log(nn));
    bool all_hit = std::all_of(recs.begin(), recs.end(), [](const RunRecord& x) { return x.hit_optimum; });
    r.passed = all_hit && ratio <= 0.85;
    r.detail = "mean " + detail::fmt(s.mean) + ", ratio " + detail::fmt(ratio) + " (limit 0.85, theory 0.75)";
    return r;
  }

  Result c8() {
    Result r = detail::titled(8, "large-chi neighborhood effect (anchored weight n)");
    const std::size_t sizes[] = {256, 1024, 4096};
    double per_n[2][3];
    std::ostringstream os;
    for (int which = 0; which < 2; ++which) {
      const double beta = which == 0 ? 3.0 : 1.5;
      os << (which ? "; " : "") << "beta " << beta << " mean/n";
      for (int k = 0; k < 3; ++k) {
        const std::size_t n = sizes[k];
        BitString x = BitString::ones(n);
        x.set(0, false);  // the wrong bit carries the anchor weight
        EngineConfig cfg;
        cfg.start = StartPoint::fixed(x);
        cfg.seed = detail::seed_for(o_, 8, static_cast<std::uint64_t>(which) * 100 + static_cast<std::uint64_t>(k));
        const auto s = stats::summarize(detail::iterations(
            run_batch(Objective::anchored(n, static_cast<double>(n)), FlipDistribution::power_law(n, beta), cfg, 200,
                      o_.workers)));
        per_n[which][k] = s.mean / static_cast<double>(n);
        os << ' ' << detail::fmt(per_n[which][k]);
      }
    }
    const double hi = *std::max_element(per_n[0], per_n[0] + 3);
    const double lo = *std::min_element(per_n[0], per_n[0] + 3);
    const bool bounded = hi <= 3.0 * lo;
    const bool increasing = per_n[1][0] < per_n[1][1] && per_n[1][1] < per_n[1][2];
    r.passed = bounded && increasing;
    os << "; beta 3 max/min " << detail::fmt(hi / lo) << ", beta 1.5 increasing " << (increasing ? "yes" : "no");
    r.detail = os.str();
    return r;
  }

  Result c9() {
    Result r = detail::titled(9, "parity-swap equivalence (chain n=8, KS n=10)");
    const std::size_t n = 8;
    const auto parity = oracle::level_chain(Objective::parity_swap(n), FlipDistribution::point_mass(n, n - 1));
    const auto rls = oracle::level_chain(Objective::onemax(n), FlipDistribution::point_mass(n, 1));
    double worst = 0.0;
    for (std::size_t m = 0; m <= n; ++m) {
      const std::size_t swapped = m % 2 == 0 ? m : n - m;
      worst = std::max(worst, std::abs(parity.time_from(m) - rls.time_from(swapped)));
    }
    const std::size_t n2 = 10;
    EngineConfig a, b;
    a.seed = detail::seed_for(o_, 9, 0);
    b.seed = detail::seed_for(o_, 9, 1);
    const auto ta = detail::iterations(
        run_batch(Objective::onemax(n2), FlipDistribution::point_mass(n2, 1), a, 10'000, o_.workers));
    const auto tb = detail::iterations(
        run_batch(Objective::parity_swap(n2), FlipDistribution::point_mass(n2, n2 - 1), b, 10'000, o_.workers));
    const auto ks = stats::ks_two_sample(ta, tb);
    r.passed = worst <= 1e-9 && ks.p_value > 0.01;
    r.detail = "max level difference " + detail::fmt(worst) + ", KS D " + detail::fmt(ks.statistic) + " p " +
               detail::fmt(ks.p_value);
    return r;
  }

  Result c10() {
    Result r = detail::titled(10, "no stochastic domination");
    const std::size_t n = 20;
    const auto sol = oracle::compressed_anchored_chain(1.0, n, experiment::no_domination_distribution(n));
    const double e1 = sol.distance_start(1);
    const double e2 = sol.distance_start(2);
    const std::size_t m = 14;
    const auto d = experiment::onemax_not_easiest_distribution(m);
    const double ea = oracle::compressed_anchored_chain(3.0, m, d).time_from(oracle::anchored_state(m, false, m - 1));
    const double eo = oracle::level_chain(Objective::onemax(m), d).time_from(m - 1);
    r.passed = detail::rel_err(e1, 8000.0) <= 1e-12 && e2 >= 540.0 && e2 <= 551.0 && e2 < e1 && ea < eo;
    r.detail = "n=20: E[T1] " + detail::format_double(e1) + ", E[T2] " + detail::format_double(e2) + "; n=14: anchored(3) " +
               detail::fmt(ea) + " < onemax " + detail::fmt(eo);
    return r;
  }

  Result c11() {
    Result r = detail::titled(11, "idle-step identity (p0 = 0.3)");
    double worst = 0.0;
    for (std::size_t n : {std::size_t{10}, std::size_t{100}}) {
      std::vector<double> p(n + 1, 0.0);
      p[0] = 0.3;
      p[1] = 0.7;
      const auto lazy = oracle::level_chain(Objective::onemax(n), FlipDistribution::custom(n, p));
      const auto rls = oracle::level_chain(Objective::onemax(n), FlipDistribution::point_mass(n, 1));
      for (std::size_t m = 0; m <= n; ++m) {
        worst = std::max(worst, detail::rel_err(lazy.time_from(m), rls.time_from(m) / 0.7));
      }
    }
    r.passed = worst <= 1e-9;
    r.detail = "max relative difference " + detail::fmt(worst);
    return r;
  }

  Result c12() {
    Result r = detail::titled(12, "determinism (byte-identical CSV)");
    using experiment::json;
    const json batch = {{"cmd", "batch"},
                        {"objective", {{"kind", "onemax"}, {"n", 64}}},
                        {"distribution", {{"kind", "sbm"}, {"c", 1.0}}},
                        {"trials", 200},
                        {"master_seed", o_.master_seed},
                        {"workers", 1}};
    json batch_parallel = batch;
    batch_parallel["workers"] = 4;
    const json sweep = {{"cmd", "sweep"},
                        {"objective", {{"kind", "linear"}, {"random", {{"low", 1}, {"high", 10}, {"seed", 7}}}}},
                        {"ns", {16, 32}},
                        {"distributions", {{{"kind", "rls"}}, {{"kind", "power_law"}, {"beta", 3}}}},
                        {"trials", 50},
                        {"master_seed", o_.master_seed}};
    const json drift = {{"cmd", "drift"}, {"n", 200}, {"distribution", {{"kind", "sbm"}, {"c", 1.0}}}};
    const std::string b1 = experiment::execute(batch);
    const std::string b2 = experiment::execute(batch);
    const std::string b3 = experiment::execute(batch_parallel);
    const bool batch_ok = b1 == b2 && b1 == b3;
    const bool sweep_ok = experiment::execute(sweep) == experiment::execute(sweep);
    const bool drift_ok = experiment::execute(drift) == experiment::execute(drift);
    r.passed = batch_ok && sweep_ok && drift_ok;
    r.detail = std::string("batch (workers 1/1/4) ") + (batch_ok ? "identical" : "DIFFERENT") + ", sweep " +
               (sweep_ok ? "identical" : "DIFFERENT") + ", drift " + (drift_ok ? "identical" : "DIFFERENT");
    return r;
  }

  Options o_;
  std::optional<std::vector<HeadlineCell>> headline_;
};

inline std::string format_line(const Result& r) {
  char head[160];
  std::snprintf(head, sizeof head, "[%s] criterion %2d: %s (%.2f s)", r.passed ? "PASS" : "FAIL", r.id,
                r.title.c_str(), r.seconds);
  return std::string(head) + " | " + r.detail;
}

inline experiment::json to_json(const std::vector<Result>& results) {
  experiment::json arr = experiment::json::array();
  for (const auto& r : results) {
    arr.push_back({{"criterion", r.id},
                   {"title", r.title},
                   {"passed", r.passed},
                   {"detail", r.detail},
                   {"seconds", r.seconds}});
  }
  return arr;
}

}  // namespace uea::verify
