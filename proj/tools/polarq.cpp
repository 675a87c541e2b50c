// polarq: run or validate a JSON task configuration.
//
//   polarq run <config.json> [--out FILE] [--workers N] [--seed S]
//   polarq validate <config.json>
//
// Exit status: 0 success, 2 invalid configuration, 3 solver or runtime failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "polarq/app/config.hpp"
#include "polarq/app/tasks.hpp"

namespace fs = std::filesystem;
using namespace polarq::app;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;

void report(const ConfigError& e) {
  std::cerr << "invalid configuration (" << e.violations().size() << " problem"
            << (e.violations().size() == 1 ? "" : "s") << "):\n";
  for (const auto& v : e.violations()) std::cerr << "  " << v.str() << "\n";
}

json load(const std::string& path) { return parse_json_text(read_file(path)); }

bool write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  out << content;
  return bool(out);
}

int cmd_validate(const std::string& path) {
  try {
    const json doc = load(path);
    const auto violations = validate_config(doc);
    if (!violations.empty()) throw ConfigError(violations);
    const RunConfig cfg = parse_config(doc);
    std::size_t points = 1;
    for (const auto& a : cfg.axes) points *= a.values.size();
    std::cout << "ok: task " << cfg.task << ", " << points << " grid point"
              << (points == 1 ? "" : "s") << "\n";
    return 0;
  } catch (const ConfigError& e) {
    report(e);
    return kExitConfig;
  }
}

int cmd_run(const std::string& path, const std::string& out_flag, int workers,
            std::optional<std::uint64_t> seed) {
  RunResult result;
  fs::path out_path;
  try {
    const RunConfig cfg = parse_config(load(path));
    RunOptions opt;
    opt.workers = workers >= 0 ? workers : cfg.workers;
    opt.seed = seed;
    opt.base_dir = fs::path(path).parent_path();
    if (opt.base_dir.empty()) opt.base_dir = ".";
    if (!out_flag.empty()) {
      out_path = out_flag;
    } else if (!cfg.output.empty()) {
      out_path = opt.base_dir / cfg.output;
    }
    result = run_task(cfg, opt);
  } catch (const ConfigError& e) {
    report(e);
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolver;
  }

  const std::string csv = result.csv();
  if (out_path.empty()) {
    std::cout << csv;
  } else if (!write_file(out_path, csv)) {
    std::cerr << "error: cannot write '" << out_path.string() << "'\n";
    return kExitSolver;
  }
  for (const auto& f : result.side_files) {
    if (!write_file(f.path, f.content)) {
      std::cerr << "error: cannot write '" << f.path.string() << "'\n";
      return kExitSolver;
    }
  }
  if (result.failure) {
    std::cerr << "error: " << *result.failure << " (partial results written)\n";
    return kExitSolver;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pendular-state polar-molecule qubit array simulator"};
  app.set_version_flag("--version", std::string(polarq::kVersion));
  app.require_subcommand(1);

  std::string run_config, out;
  int workers = -1;
  std::uint64_t seed = 0;
  auto* run = app.add_subcommand("run", "Run a task configuration and write CSV");
  run->add_option("config", run_config, "JSON configuration file")->required();
  run->add_option("--out,-o", out, "Output CSV path (default: config 'output' or stdout)");
  run->add_option("--workers,-j", workers, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
  auto* seed_opt = run->add_option("--seed", seed, "Random seed for generated inputs");

  std::string validate_config_path;
  auto* validate = app.add_subcommand("validate", "Check a configuration without running it");
  validate->add_option("config", validate_config_path, "JSON configuration file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  if (*validate) return cmd_validate(validate_config_path);
  std::optional<std::uint64_t> seed_override;
  if (*seed_opt) seed_override = seed;
  return cmd_run(run_config, out, workers, seed_override);
}
