#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "curvstab/io.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Stability calculator and numerical verifier for quadratic curvature "
               "functionals at products of Einstein manifolds"};

  std::string config_path;
  std::string output;
  bool strict = false;
  bool auto_rescale = false;
  app.add_option("--config", config_path, "configuration file (JSON); '-' or unset reads stdin");
  app.add_option("--output", output, "output format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_flag("--strict", strict, "exit 3 when all results are Indeterminate");
  app.add_flag("--auto-rescale", auto_rescale,
               "rescale the second factor to balance the Einstein constants");
  CLI11_PARSE(app, argc, argv);

  std::string text;
  if (config_path.empty() || config_path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    text = ss.str();
  } else {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "config: cannot open " << config_path << "\n";
      return 2;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  if (text.empty()) {
    std::cerr << "config: empty input\n";
    return 2;
  }

  try {
    const auto j = nlohmann::ordered_json::parse(text);
    const auto config = curvstab::parse_config(j);
    curvstab::RunFlags flags;
    flags.strict = strict;
    flags.auto_rescale = auto_rescale;
    if (!output.empty()) flags.output_override = output;
    return curvstab::run(config, flags, std::cout);
  } catch (const nlohmann::json::parse_error& e) {
    std::cerr << "config: invalid JSON: " << e.what() << "\n";
    return 2;
  } catch (const curvstab::ConfigError& e) {
    std::cerr << "config: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
