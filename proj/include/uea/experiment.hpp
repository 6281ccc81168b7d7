#pragma once

#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "uea/bitstring.hpp"
#include "uea/distributions.hpp"
#include "uea/drift.hpp"
#include "uea/engine.hpp"
#include "uea/error.hpp"
#include "uea/objectives.hpp"
#include "uea/oracle.hpp"
#include "uea/rng.hpp"
#include "uea/stats.hpp"

// Config-driven experiments. A config is one JSON document whose "cmd" names
// the experiment; every command renders its result as CSV or JSON text.
namespace uea::experiment {

using json = nlohmann::json;

// Shortest text that round-trips is not stable across libcs; 17 significant
// digits always round-trips and is what every CSV uses.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// FNV-1a over the canonical dump (object keys sorted).
inline std::uint64_t config_hash(const json& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : cfg.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
  return buf;
}

namespace detail {

[[noreturn]] inline void schema(const std::string& what) { throw Error(ErrorCode::SchemaViolation, what); }

inline const json& need(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) schema(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

inline double as_number(const json& v, const char* key) {
  if (!v.is_number()) schema(std::string("field \"") + key + "\" must be a number");
  return v.get<double>();
}

inline std::uint64_t as_uint(const json& v, const char* key) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (d >= 0 && d == std::floor(d) && d < 1.8e19) return static_cast<std::uint64_t>(d);
  }
  schema(std::string("field \"") + key + "\" must be a non-negative integer");
}

inline double number_or(const json& j, const char* key, double fallback) {
  return j.contains(key) ? as_number(j.at(key), key) : fallback;
}

inline std::uint64_t uint_or(const json& j, const char* key, std::uint64_t fallback) {
  return j.contains(key) ? as_uint(j.at(key), key) : fallback;
}

inline std::string string_of(const json& j, const char* key) {
  const json& v = need(j, key);
  if (!v.is_string()) schema(std::string("field \"") + key + "\" must be a string");
  return v.get<std::string>();
}

inline std::vector<double> numbers_of(const json& v, const char* key) {
  if (!v.is_array()) schema(std::string("field \"") + key + "\" must be an array of numbers");
  std::vector<double> out;
  for (const auto& e : v) out.push_back(as_number(e, key));
  return out;
}

}  // namespace detail

// {"kind":"point","k":1} | {"kind":"sbm","c":1} | {"kind":"power_law","beta":3}
// | {"kind":"custom","probs":[...]}; "rls" is point mass at 1. Point masses
// also accept "k_from_end": j for k = n - j.
inline FlipDistribution parse_distribution(const json& j, std::size_t n) {
  if (!j.is_object()) detail::schema("distribution must be an object");
  const std::string kind = detail::string_of(j, "kind");
  if (kind == "rls") return FlipDistribution::point_mass(n, 1);
  if (kind == "point") {
    if (j.contains("k_from_end")) {
      const auto back = detail::as_uint(j.at("k_from_end"), "k_from_end");
      if (back > n) throw Error(ErrorCode::OutOfRange, "k_from_end exceeds n");
      return FlipDistribution::point_mass(n, n - back);
    }
    return FlipDistribution::point_mass(n, detail::as_uint(detail::need(j, "k"), "k"));
  }
  if (kind == "sbm") return FlipDistribution::standard_bit_mutation(n, detail::number_or(j, "c", 1.0));
  if (kind == "power_law") return FlipDistribution::power_law(n, detail::as_number(detail::need(j, "beta"), "beta"));
  if (kind == "custom") {
    auto probs = detail::numbers_of(detail::need(j, "probs"), "probs");
    // A shorter list is padded with zeros up to n.
    if (probs.size() < n + 1) probs.resize(n + 1, 0.0);
    return FlipDistribution::custom(n, std::move(probs));
  }
  detail::schema("unknown distribution kind \"" + kind + "\"");
}

// {"kind": "onemax"|"linear"|"binval"|"parity_swap"|"anchored", "n": int,
//  "weights": [...], "anchor_weight": real,
//  "random": {"low": a, "high": b, "seed": s}}. "random" draws n linear
// weights uniformly from [low, high]. n_override replaces "n" (sweeps).
inline Objective parse_objective(const json& j, std::optional<std::size_t> n_override = std::nullopt) {
  if (!j.is_object()) detail::schema("objective must be an object");
  const std::string kind = detail::string_of(j, "kind");
  auto size = [&]() -> std::size_t {
    if (n_override) return *n_override;
    return detail::as_uint(detail::need(j, "n"), "n");
  };
  if (kind == "onemax") return Objective::onemax(size());
  if (kind == "binval") return Objective::binval(size());
  if (kind == "parity_swap") return Objective::parity_swap(size());
  if (kind == "anchored") {
    const std::size_t n = size();
    // "n" as anchor weight stands for the adversarial weight-n instance.
    const json& a = detail::need(j, "anchor_weight");
    if (a.is_string() && a.get<std::string>() == "n") return Objective::anchored(n, static_cast<double>(n));
    return Objective::anchored(n, detail::as_number(a, "anchor_weight"));
  }
  if (kind == "linear") {
    if (j.contains("random")) {
      const json& r = j.at("random");
      const double low = detail::number_or(r, "low", 1.0);
      const double high = detail::number_or(r, "high", 10.0);
      if (!(low > 0.0) || !(high >= low)) detail::schema("random weights need 0 < low <= high");
      Rng rng(detail::uint_or(r, "seed", 0));
      std::uniform_real_distribution<double> u(low, high);
      std::vector<double> w(size());
      for (auto& v : w) v = u(rng);
      return Objective::linear(std::move(w));
    }
    auto w = detail::numbers_of(detail::need(j, "weights"), "weights");
    if (n_override && w.size() != *n_override) detail::schema("weights length differs from n");
    if (j.contains("n") && !n_override && w.size() != detail::as_uint(j.at("n"), "n")) {
      detail::schema("weights length differs from n");
    }
    return Objective::linear(std::move(w));
  }
  detail::schema("unknown objective kind \"" + kind + "\"");
}

// "uniform" | {"kind":"uniform"} | {"kind":"fixed","bits":"0111"} |
// {"kind":"distance","d":2}.
inline StartPoint parse_start(const json& j) {
  if (j.is_string() && j.get<std::string>() == "uniform") return StartPoint::uniform();
  if (!j.is_object()) detail::schema("start must be \"uniform\" or an object");
  const std::string kind = detail::string_of(j, "kind");
  if (kind == "uniform") return StartPoint::uniform();
  if (kind == "fixed") {
    const std::string bits = detail::string_of(j, "bits");
    try {
      return StartPoint::fixed(BitString::from_string(bits));
    } catch (const Error&) {
      detail::schema("start bits must be a string of 0 and 1");
    }
  }
  if (kind == "distance") return StartPoint::at_distance(detail::as_uint(detail::need(j, "d"), "d"));
  detail::schema("unknown start kind \"" + kind + "\"");
}

struct Common {
  std::uint64_t trials = 1;
  std::uint64_t master_seed = 0;
  std::size_t workers = 1;
  std::uint64_t max_evals = EngineConfig::kDefaultMaxEvaluations;
};

inline Common parse_common(const json& cfg) {
  Common c;
  c.trials = detail::uint_or(cfg, "trials", 1);
  if (c.trials == 0) detail::schema("trials must be >= 1");
  c.master_seed = detail::uint_or(cfg, "master_seed", 0);
  c.workers = detail::uint_or(cfg, "workers", 1);
  if (c.workers == 0) detail::schema("workers must be >= 1");
  c.max_evals = detail::uint_or(cfg, "max_evals", EngineConfig::kDefaultMaxEvaluations);
  if (c.max_evals == 0) detail::schema("max_evals must be >= 1");
  return c;
}

inline std::size_t problem_size(const json& cfg) {
  if (cfg.contains("n")) return detail::as_uint(cfg.at("n"), "n");
  if (cfg.contains("objective") && cfg.at("objective").contains("n")) {
    return detail::as_uint(cfg.at("objective").at("n"), "n");
  }
  detail::schema("missing field \"n\"");
}

inline json report_header(const json& cfg) {
  json out;
  out["cmd"] = cfg.value("cmd", "");
  out["config_hash"] = hex64(config_hash(cfg));
  out["master_seed"] = detail::uint_or(cfg, "master_seed", 0);
  return out;
}

// Non-finite values become null.
inline json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "cmd",   "trials", "master_seed", "workers",       "max_evals", "out",   "objective", "distribution",
      "start", "n",      "record_trace", "d_max",        "alpha",     "r",     "scenario",  "chain",
      "level", "ns",     "distributions", "state_index", "comment"};
  return keys;
}

inline void check_keys(const json& cfg) {
  if (!cfg.is_object()) detail::schema("config must be a JSON object");
  for (const auto& [key, _] : cfg.items()) {
    if (!known_keys().contains(key)) detail::schema("unknown field \"" + key + "\"");
  }
}

inline std::string run_single(const json& cfg) {
  const Common c = parse_common(cfg);
  const Objective f = parse_objective(detail::need(cfg, "objective"));
  const FlipDistribution d = parse_distribution(detail::need(cfg, "distribution"), f.n());
  EngineConfig ec;
  ec.start = cfg.contains("start") ? parse_start(cfg.at("start")) : StartPoint::uniform();
  ec.max_evaluations = c.max_evals;
  ec.record_trace = cfg.contains("record_trace") && cfg.at("record_trace").is_boolean() && cfg.at("record_trace").get<bool>();
  ec.seed = c.master_seed;
  const RunRecord rec = run(f, d, ec);

  json out = report_header(cfg);
  out["seed"] = rec.seed;
  out["n"] = f.n();
  out["iterations"] = rec.iterations;
  out["evaluations"] = rec.evaluations;
  out["hit_optimum"] = rec.hit_optimum;
  out["final_fitness"] = number_or_null(rec.final_fitness);
  if (ec.record_trace) {
    json trace = json::array();
    for (const auto& tp : rec.trace) trace.push_back({tp.t, number_or_null(tp.fitness), tp.potential});
    out["trace"] = trace;  // rows of [t, fitness, X_t]
  }
  return out.dump(2) + "\n";
}

inline std::string batch_csv(const json& cfg) {
  const Common c = parse_common(cfg);
  const Objective f = parse_objective(detail::need(cfg, "objective"));
  const FlipDistribution d = parse_distribution(detail::need(cfg, "distribution"), f.n());
  EngineConfig ec;
  ec.start = cfg.contains("start") ? parse_start(cfg.at("start")) : StartPoint::uniform();
  ec.max_evaluations = c.max_evals;
  ec.seed = c.master_seed;
  const auto records = run_batch(f, d, ec, c.trials, c.workers);

  std::ostringstream os;
  os << "trial,seed,n,iterations,evaluations,hit_optimum,final_fitness\n";
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    os << i << ',' << r.seed << ',' << f.n() << ',' << r.iterations << ',' << r.evaluations << ','
       << (r.hit_optimum ? 1 : 0) << ',' << format_double(r.final_fitness) << '\n';
  }
  return os.str();
}

inline std::string drift_csv(const json& cfg) {
  const std::size_t n = problem_size(cfg);
  const FlipDistribution d = parse_distribution(detail::need(cfg, "distribution"), n);
  std::optional<std::size_t> d_max;
  if (cfg.contains("d_max")) d_max = detail::as_uint(cfg.at("d_max"), "d_max");
  const auto table = drift::drift_table(d, d_max);

  std::ostringstream os;
  os << "d,h_tilde,h,inv_h_cumsum\n";
  double cumsum = 0.0;
  for (const auto& row : table.rows) {
    if (row.d >= 1) cumsum += 1.0 / row.h;
    os << row.d << ',' << format_double(row.h_tilde) << ',' << format_double(row.h) << ',' << format_double(cumsum)
       << '\n';
  }
  return os.str();
}

inline std::string bound_json(const json& cfg) {
  const std::size_t n = problem_size(cfg);
  const FlipDistribution d = parse_distribution(detail::need(cfg, "distribution"), n);
  const double alpha = detail::number_or(cfg, "alpha", 2.0);
  const double r = detail::number_or(cfg, "r", 1.0);

  json out = report_header(cfg);
  out["n"] = n;
  out["p1"] = d.p(1);
  out["chi"] = d.mean();
  out["alpha"] = alpha;
  out["r"] = r;
  if (d.p(1) > 0.0) {
    const auto ub = drift::upper_bound_b(d, alpha, r);
    out["b_r"] = number_or_null(ub.bound);
    out["tail_prob"] = ub.tail_prob;
    out["onemax_upper_bound"] = drift::onemax_upper_bound(d);
    out["upper_bound_condition"] = drift::upper_bound_condition(d);
  } else {
    out["b_r"] = nullptr;
    out["tail_prob"] = nullptr;
    out["onemax_upper_bound"] = nullptr;
    out["upper_bound_condition"] = nullptr;
  }
  const auto prof = drift::variable_drift_lower_bound(d);
  out["d0"] = prof.d0;
  out["headline"] = number_or_null(prof.headline);
  out["sum_inverse_h"] = prof.sum_inverse_h;
  out["failure_p"] = prof.failure_p;
  out["corrected_lower_bound"] = prof.corrected;
  out["degenerate"] = prof.degenerate;
  return out.dump(2) + "\n";
}

inline std::string audit_json(const json& cfg) {
  const std::size_t n = problem_size(cfg);
  const FlipDistribution d = parse_distribution(detail::need(cfg, "distribution"), n);
  const auto rep = drift::audit(d);
  json out = report_header(cfg);
  out["n"] = rep.n;
  out["d0"] = rep.d0;
  out["b_tail_ratio_max"] = rep.b_tail_ratio_max;
  out["h_linear_ratio_max"] = rep.h_linear_ratio_max;
  out["h_offset_ratio_max"] = rep.h_offset_ratio_max;
  out["c_tilde_prob_min"] = rep.c_tilde_prob_min;
  out["c_tilde_target"] = rep.c_tilde_target;
  out["h_monotone"] = rep.h_monotone;
  return out.dump(2) + "\n";
}

// p_1 = n^-2, p_2 = 1 - n^-2 on the anchor-weight-1 (OneMax) chain.
inline FlipDistribution no_domination_distribution(std::size_t n) {
  std::vector<double> p(n + 1, 0.0);
  p[1] = 1.0 / (static_cast<double>(n) * static_cast<double>(n));
  p[2] = 1.0 - p[1];
  return FlipDistribution::custom(n, std::move(p));
}

// p_1 = n^-3, p_2 = n^-1, p_3 = rest.
inline FlipDistribution onemax_not_easiest_distribution(std::size_t n) {
  const double nn = static_cast<double>(n);
  std::vector<double> p(n + 1, 0.0);
  p[1] = 1.0 / (nn * nn * nn);
  p[2] = 1.0 / nn;
  p[3] = 1.0 - p[1] - p[2];
  return FlipDistribution::custom(n, std::move(p));
}

inline json times_json(const oracle::ChainSolution& sol) {
  json arr = json::array();
  for (double v : sol.expected_time()) arr.push_back(number_or_null(v));
  return arr;
}

inline std::string oracle_json(const json& cfg) {
  json out = report_header(cfg);
  const std::string scenario = cfg.contains("scenario") ? detail::string_of(cfg, "scenario") : "chain";
  out["scenario"] = scenario;

  if (scenario == "no_domination") {
    const std::size_t n = detail::uint_or(cfg, "n", 20);
    const auto sol = oracle::compressed_anchored_chain(1.0, n, no_domination_distribution(n));
    out["n"] = n;
    out["state_space"] = oracle::to_string(sol.space());
    out["E_T1"] = sol.distance_start(1);
    out["E_T2"] = sol.distance_start(2);
    out["expected_time_by_state"] = times_json(sol);
    return out.dump(2) + "\n";
  }
  if (scenario == "onemax_not_easiest") {
    const std::size_t n = detail::uint_or(cfg, "n", 14);
    const auto d = onemax_not_easiest_distribution(n);
    const auto anchored = oracle::compressed_anchored_chain(3.0, n, d);
    const auto onemax = oracle::level_chain(Objective::onemax(n), d);
    out["n"] = n;
    out["E_anchored3"] = anchored.time_from(oracle::anchored_state(n, false, n - 1));
    out["E_onemax"] = onemax.time_from(n - 1);
    return out.dump(2) + "\n";
  }
  if (scenario != "chain") detail::schema("unknown oracle scenario \"" + scenario + "\"");

  const Objective f = parse_objective(detail::need(cfg, "objective"));
  const FlipDistribution d = parse_distribution(detail::need(cfg, "distribution"), f.n());
  std::string chain = cfg.contains("chain") ? detail::string_of(cfg, "chain") : "";
  if (chain.empty()) {
    chain = f.is_level_symmetric() ? "level" : f.kind() == ObjectiveKind::Anchored ? "anchored" : "full";
  }
  oracle::ChainSolution sol;
  if (chain == "level") {
    sol = oracle::level_chain(f, d);
  } else if (chain == "full") {
    sol = oracle::full_chain(f, d);
  } else if (chain == "anchored") {
    if (f.kind() != ObjectiveKind::Anchored) detail::schema("anchored chain needs an anchored objective");
    sol = oracle::compressed_anchored_chain(f.anchor_weight(), f.n(), d);
  } else {
    detail::schema("unknown chain \"" + chain + "\"");
  }
  out["n"] = f.n();
  out["state_space"] = oracle::to_string(sol.space());
  out["expected_time_by_state"] = times_json(sol);

  const StartPoint start = cfg.contains("start") ? parse_start(cfg.at("start")) : StartPoint::uniform();
  switch (start.kind) {
    case StartKind::Uniform:
      out["expected_time"] = sol.uniform_start();
      break;
    case StartKind::Distance:
      out["expected_time"] = sol.distance_start(start.distance);
      break;
    case StartKind::Fixed: {
      if (start.point.size() != f.n()) detail::schema("start bits length differs from n");
      std::size_t state = 0;
      if (sol.space() == oracle::StateSpace::Full) {
        state = start.point.to_index();
      } else if (sol.space() == oracle::StateSpace::AnchoredCompressed) {
        const bool b = start.point.test(0);
        state = oracle::anchored_state(f.n(), b, start.point.count_ones() - (b ? 1 : 0));
      } else {
        state = start.point.count_ones();
      }
      out["expected_time"] = sol.time_from(state);
      break;
    }
  }
  return out.dump(2) + "\n";
}

// Cartesian product of "ns" and "distributions"; cell k runs a batch with
// master seed mix64(master_seed ^ k).
inline std::string sweep_csv(const json& cfg) {
  const Common c = parse_common(cfg);
  const json& obj = detail::need(cfg, "objective");
  const json& ns = detail::need(cfg, "ns");
  if (!ns.is_array() || ns.empty()) detail::schema("\"ns\" must be a non-empty array");
  const json& dists = detail::need(cfg, "distributions");
  if (!dists.is_array() || dists.empty()) detail::schema("\"distributions\" must be a non-empty array");
  const StartPoint start = cfg.contains("start") ? parse_start(cfg.at("start")) : StartPoint::uniform();

  std::ostringstream os;
  os << "n,dist_kind,dist_param,mean_iterations,std_error,ratio_to_nlogn_over_p1\n";
  std::uint64_t cell = 0;
  for (const auto& nj : ns) {
    const std::size_t n = detail::as_uint(nj, "ns");
    const Objective f = parse_objective(obj, n);
    for (const auto& dj : dists) {
      const FlipDistribution d = parse_distribution(dj, n);
      EngineConfig ec;
      ec.start = start;
      ec.max_evaluations = c.max_evals;
      ec.seed = trial_seed(c.master_seed, cell++);
      const auto records = run_batch(f, d, ec, c.trials, c.workers);
      std::vector<double> it;
      it.reserve(records.size());
      for (const auto& r : records) it.push_back(static_cast<double>(r.iterations));
      double mean = 0.0, se = 0.0;
      if (it.size() >= 2) {
        const auto s = stats::summarize(it);
        mean = s.mean;
        se = s.std_error;
      } else {
        mean = it.front();
      }
      const double nn = static_cast<double>(n);
      const double ratio = d.p(1) > 0.0 && n >= 2 ? mean * d.p(1) / (nn * std::log(nn))
                                                  : std::numeric_limits<double>::quiet_NaN();
      os << n << ',' << to_string(d.kind()) << ',' << format_double(d.parameter()) << ',' << format_double(mean)
         << ',' << format_double(se) << ',' << format_double(ratio) << '\n';
    }
  }
  return os.str();
}

// Runs every command except "verify". Throws Error on bad configs.
inline std::string execute(const json& cfg) {
  check_keys(cfg);
  const std::string cmd = detail::string_of(cfg, "cmd");
  if (cfg.contains("trials")) parse_common(cfg);
  if (cmd == "run") return run_single(cfg);
  if (cmd == "batch") return batch_csv(cfg);
  if (cmd == "drift") return drift_csv(cfg);
  if (cmd == "bound") return bound_json(cfg);
  if (cmd == "oracle") return oracle_json(cfg);
  if (cmd == "audit") return audit_json(cfg);
  if (cmd == "sweep") return sweep_csv(cfg);
  detail::schema("unknown cmd \"" + cmd + "\"");
}

}  // namespace uea::experiment
