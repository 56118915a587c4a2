#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "xprod/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"xprod: reduced crossed products of finite groups with "
               "factorization, coaction, and cb-norm verification"};

  std::string config_path;
  std::string report_path = "report.json";
  std::string csv_path;
  double tol_override = -1.0;
  long long seed_override = -1;
  std::vector<std::string> task_override;
  bool parallel = false;

  app.add_option("--config", config_path, "JSON run configuration")->required();
  app.add_option("--report", report_path, "JSON report output path");
  app.add_option("--csv", csv_path, "CSV output for defect sweeps");
  app.add_option("--tol", tol_override, "override identity_tol");
  app.add_option("--seed", seed_override, "override the config seed");
  app.add_option("--task", task_override, "run only these tasks (repeatable)");
  app.add_flag("--parallel", parallel, "run independent tasks concurrently");

  CLI11_PARSE(app, argc, argv);

  try {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "config error at /: cannot open '" << config_path << "'\n";
      return 2;
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    xprod::RunConfig config = xprod::parse_config(buffer.str());
    if (!config.certificates_dir.empty()) {
      std::filesystem::path dir(config.certificates_dir);
      if (dir.is_relative())
        config.certificates_dir =
            (std::filesystem::path(config_path).parent_path() / dir).string();
    }
    if (tol_override >= 0.0) {
      config.tolerances.identity_tol = tol_override;
      config.tolerances.validate();
    }
    if (seed_override >= 0)
      config.seed = static_cast<std::uint64_t>(seed_override);
    if (!task_override.empty()) config.tasks = task_override;
    config.parallel = parallel;
    return xprod::run_cli(config, report_path, csv_path);
  } catch (const xprod::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
