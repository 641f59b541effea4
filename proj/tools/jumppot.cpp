// Command-line driver: jumppot run | validate | list-experiments.

#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "jumppot/experiments.hpp"

namespace {

enum ExitCode { ok = 0, assertion_failed = 1, bad_config = 2, failure = 3 };

int run_command(const std::string& path) {
  using namespace jumppot::cli;
  const auto cfg = load_config(path);
  const auto bundle = run_experiment(cfg);
  emit_report(bundle, cfg.output_path);
  const auto stem = output_stem(cfg.output_path).string();
  std::cout << bundle.experiment << ": " << bundle.status << " (" << bundle.rows.size()
            << " rows -> " << stem << ".csv, " << stem << ".json)\n";
  if (bundle.status == "unsupported")
    std::cout << "  " << bundle.summary.value("reason", std::string()) << "\n";
  for (const auto& a : bundle.assertions)
    std::cout << "  " << (a.pass ? "PASS " : "FAIL ") << a.name << ": measured "
              << short_number(a.measured) << ", expected " << short_number(a.expected)
              << ", tolerance " << short_number(a.tolerance) << "\n";
  return bundle.all_pass() ? ok : assertion_failed;
}

int validate_command(const std::string& path) {
  using namespace jumppot::cli;
  const auto cfg = load_config(path);
  if (const auto why = unsupported_reason(cfg); !why.empty()) {
    std::cerr << "unsupported configuration: " << why << "\n";
    return bad_config;
  }
  std::cout << "valid: " << cfg.experiment << "\n" << cfg.to_json().dump(2) << "\n";
  return ok;
}

int list_command() {
  for (const auto& e : jumppot::cli::experiments()) std::printf("%-28s %s\n", e.name.c_str(), e.description.c_str());
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical experiments for killed jump processes near a boundary"};
  app.require_subcommand(1);
  std::string config_path;
  auto* run = app.add_subcommand("run", "run the experiment described by a JSON config");
  run->add_option("config", config_path, "config file")->required()->check(CLI::ExistingFile);
  auto* validate = app.add_subcommand("validate", "check a JSON config without running it");
  validate->add_option("config", config_path, "config file")->required()->check(CLI::ExistingFile);
  auto* list = app.add_subcommand("list-experiments", "list the available experiments");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? ok : bad_config;
  }
  try {
    if (run->parsed()) return run_command(config_path);
    if (validate->parsed()) return validate_command(config_path);
    if (list->parsed()) return list_command();
  } catch (const jumppot::config_error& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return bad_config;
  } catch (const jumppot::invalid_parameter& e) {
    std::cerr << "invalid parameter: " << e.what() << "\n";
    return bad_config;
  } catch (const jumppot::io_error& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return failure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return failure;
  }
  return failure;
}
