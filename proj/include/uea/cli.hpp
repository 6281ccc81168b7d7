#pragma once

#include <fstream>
#include <optional>
#include <string>

#include "uea/error.hpp"
#include "uea/experiment.hpp"
#include "uea/verify.hpp"

namespace uea::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kConfigError = 2, kVerificationFailure = 3 };

struct Outcome {
  int exit_code = kOk;
  std::string output;   // report text (CSV or JSON)
  std::string message;  // diagnostic for stderr
  std::string out_path; // "out" from the config, empty for stdout
};

inline std::string verify_report(const experiment::json& cfg, verify::Level level, bool& all_passed,
                                 const std::function<void(const verify::Result&)>& on_result) {
  verify::Options opt;
  opt.level = level;
  opt.workers = experiment::detail::uint_or(cfg, "workers", 1);
  if (opt.workers == 0) experiment::detail::schema("workers must be >= 1");
  if (cfg.contains("master_seed")) opt.master_seed = experiment::detail::as_uint(cfg.at("master_seed"), "master_seed");
  verify::Suite suite(opt);
  std::vector<verify::Result> results;
  for (int id : verify::Suite::criteria(level)) {
    results.push_back(suite.run(id));
    if (on_result) on_result(results.back());
  }
  all_passed = std::all_of(results.begin(), results.end(), [](const verify::Result& r) { return r.passed; });
  auto out = experiment::report_header(cfg);
  out["master_seed"] = opt.master_seed;
  out["level"] = level == verify::Level::Quick ? "quick" : "full";
  out["passed"] = all_passed;
  out["criteria"] = verify::to_json(results);
  return out.dump(2) + "\n";
}

// Parses and runs one config document. `level_override` forces "verify"
// regardless of "cmd" when set.
inline Outcome run_text(const std::string& text, std::optional<verify::Level> level_override = std::nullopt,
                        const std::function<void(const verify::Result&)>& on_result = {}) {
  Outcome o;
  experiment::json cfg;
  try {
    cfg = experiment::json::parse(text);
  } catch (const experiment::json::parse_error& e) {
    o.exit_code = kConfigError;
    o.message = std::string(to_string(ErrorCode::ConfigParse)) + ": " + e.what();
    return o;
  }
  try {
    if (!cfg.is_object()) experiment::detail::schema("config must be a JSON object");
    if (cfg.contains("out")) {
      if (!cfg.at("out").is_string()) experiment::detail::schema("\"out\" must be a string");
      o.out_path = cfg.at("out").get<std::string>();
    }
    const bool is_verify = level_override || (cfg.contains("cmd") && cfg.at("cmd") == "verify");
    if (is_verify) {
      experiment::check_keys(cfg);
      verify::Level level = verify::Level::Quick;
      if (level_override) {
        level = *level_override;
      } else if (cfg.contains("level")) {
        const std::string l = experiment::detail::string_of(cfg, "level");
        if (l == "full") {
          level = verify::Level::Full;
        } else if (l != "quick") {
          experiment::detail::schema("level must be \"quick\" or \"full\"");
        }
      }
      bool passed = false;
      o.output = verify_report(cfg, level, passed, on_result);
      o.exit_code = passed ? kOk : kVerificationFailure;
      if (!passed) o.message = "verification failed";
      return o;
    }
    o.output = experiment::execute(cfg);
  } catch (const Error& e) {
    o.exit_code = kConfigError;
    o.message = e.what();
    o.output.clear();
  } catch (const std::exception& e) {
    o.exit_code = kFailure;
    o.message = e.what();
    o.output.clear();
  }
  return o;
}

}  // namespace uea::cli
