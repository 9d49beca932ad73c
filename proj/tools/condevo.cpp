// Scenario runner: run, compare and sweep subcommands over flat key=value
// configs. Exit codes: 0 success, 1 config error, 2 numerical failure.

#include <exception>
#include <fstream>
#include <future>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "condevo/error.hpp"
#include "condevo/scenario.hpp"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;

bool is_config_error(condevo::ErrorCode code) {
  using condevo::ErrorCode;
  switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::ValidationError:
    case ErrorCode::ConfigMismatch:
    case ErrorCode::InvalidDimension:
    case ErrorCode::IndexOutOfRange:
    case ErrorCode::InvalidParams:
    case ErrorCode::DegenerateParams:
      return true;
    default:
      return false;
  }
}

condevo::ScenarioConfig load(const std::string& path, const std::string& out, const std::string& method) {
  condevo::ScenarioConfig cfg = condevo::load_config(path);
  if (!out.empty()) cfg.out_prefix = out;
  if (!method.empty()) {
    try {
      cfg.method = condevo::parse_method(method);
    } catch (const condevo::Error&) {
      throw condevo::Error(condevo::ErrorCode::ValidationError, "invalid --method '" + method + "'");
    }
  }
  condevo::validate(cfg);
  return cfg;
}

void print_written(const std::vector<std::filesystem::path>& paths) {
  for (const auto& p : paths) std::cout << p.string() << '\n';
}

int cmd_run(const std::string& config, const std::string& out, const std::string& method) {
  const auto cfg = load(config, out, method);
  print_written(condevo::write_outputs(condevo::run_scenario(cfg)));
  return 0;
}

int cmd_compare(const std::vector<std::string>& configs, const std::string& out) {
  const auto a = load(configs[0], "", "");
  const auto b = load(configs[1], "", "");
  const std::string table = condevo::format_deviation_csv(condevo::compare_methods(a, b));
  if (out.empty()) {
    std::cout << table;
    return 0;
  }
  const std::filesystem::path path = out + ".deviation.csv";
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw condevo::Error(condevo::ErrorCode::ValidationError, "cannot write " + path.string());
  file << table;
  std::cout << path.string() << '\n';
  return 0;
}

int cmd_sweep(const std::string& config, const std::string& out, const std::string& method) {
  const auto base = load(config, out, method);
  std::vector<std::future<std::vector<std::filesystem::path>>> jobs;
  for (const auto& cell : condevo::sweep_cells(base)) {
    jobs.push_back(std::async(std::launch::async,
                              [cell] { return condevo::write_outputs(condevo::run_scenario(cell)); }));
  }
  // Collect every cell before reporting so a failing cell does not orphan running ones.
  std::vector<std::filesystem::path> written;
  std::exception_ptr failure;
  for (auto& job : jobs) {
    try {
      const auto paths = job.get();
      written.insert(written.end(), paths.begin(), paths.end());
    } catch (...) {
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  print_written(written);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conditional field evolution under atom-probe photodetection"};
  app.require_subcommand(1);

  std::string config, out, method;
  std::vector<std::string> compare_configs;

  auto* run = app.add_subcommand("run", "Evaluate one scenario on its time grid");
  run->add_option("--config", config, "Scenario config file")->required();
  run->add_option("--out", out, "Output prefix (overrides out_prefix)");
  run->add_option("--method", method, "exact, strong or weak (overrides method)");

  auto* compare = app.add_subcommand("compare", "Per-column deviation between two scenarios");
  compare->add_option("--config", compare_configs, "Two config files differing only in method/order")
      ->required()
      ->expected(2)
      ->take_all();
  compare->add_option("--out", out, "Write <prefix>.deviation.csv instead of stdout");

  auto* sweep = app.add_subcommand("sweep", "Repeat a scenario over d in {2,4,6} or n in {1,3,5}");
  sweep->add_option("--config", config, "Scenario config file")->required();
  sweep->add_option("--out", out, "Output prefix; cells append _d<d> or _n<n>");
  sweep->add_option("--method", method, "exact, strong or weak (overrides method)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) return cmd_run(config, out, method);
    if (*compare) return cmd_compare(compare_configs, out);
    return cmd_sweep(config, out, method);
  } catch (const condevo::Error& e) {
    std::cerr << "error [" << condevo::to_string(e.code()) << "]: " << e.what() << '\n';
    return is_config_error(e.code()) ? kExitConfig : kExitNumerical;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
}
