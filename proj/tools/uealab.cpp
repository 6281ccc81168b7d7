// uealab: run one experiment config. See README for the config schema.
//
//   uealab config.json            run the command named by "cmd"
//   uealab --verify quick|full    run the acceptance battery
//   uealab -                      read the config from stdin

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "uea/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Experiments with static unary unbiased (1+1) EAs on linear functions"};
  std::string config_path;
  std::string verify_level;
  std::string out_override;
  app.add_option("config", config_path, "JSON config file, or - for stdin");
  app.add_option("--verify", verify_level, "Run the acceptance battery at this level")
      ->check(CLI::IsMember({"quick", "full"}));
  app.add_option("-o,--out", out_override, "Write the report here instead of the config's \"out\"");
  CLI11_PARSE(app, argc, argv);

  std::string text = "{}";
  if (!config_path.empty()) {
    std::ostringstream buf;
    if (config_path == "-") {
      buf << std::cin.rdbuf();
    } else {
      std::ifstream in(config_path);
      if (!in) {
        std::cerr << "ConfigParse: cannot open " << config_path << '\n';
        return uea::cli::kConfigError;
      }
      buf << in.rdbuf();
    }
    text = buf.str();
  } else if (verify_level.empty()) {
    std::cerr << app.help();
    return uea::cli::kConfigError;
  }

  std::optional<uea::verify::Level> level;
  if (!verify_level.empty()) level = verify_level == "full" ? uea::verify::Level::Full : uea::verify::Level::Quick;

  const auto outcome = uea::cli::run_text(text, level, [](const uea::verify::Result& r) {
    std::cerr << uea::verify::format_line(r) << '\n';
  });
  if (!outcome.message.empty()) std::cerr << outcome.message << '\n';
  if (!outcome.output.empty()) {
    const std::string path = out_override.empty() ? outcome.out_path : out_override;
    if (path.empty() || path == "-") {
      std::cout << outcome.output;
    } else {
      std::ofstream out(path, std::ios::binary);
      if (!out) {
        std::cerr << "cannot write " << path << '\n';
        return uea::cli::kFailure;
      }
      out << outcome.output;
    }
  }
  return outcome.exit_code;
}
