#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hstumor/config.hpp"
#include "hstumor/errors.hpp"
#include "hstumor/runner.hpp"

namespace fs = std::filesystem;

namespace {

std::optional<std::string> env_output() {
  const char* v = std::getenv(hst::kOutputDirEnv);
  if (v == nullptr || *v == '\0') return std::nullopt;
  return std::string(v);
}

std::optional<std::string> pick(const std::string& flag) {
  if (!flag.empty()) return flag;
  return env_output();
}

int report(const hst::RunOutcome& r) {
  if (r.exit_code == 0) {
    std::cout << "wrote " << r.dir.string() << "\n";
  } else {
    std::cerr << "error: " << r.error << "\n";
  }
  return r.exit_code;
}

int cmd_run(const fs::path& cfg_path, const std::string& out) {
  const hst::RunConfig cfg = hst::load_config(cfg_path);
  const fs::path dir = hst::resolve_output(cfg, cfg_path.stem().string(), pick(out));
  return report(hst::run(cfg, dir));
}

int cmd_oracle(const fs::path& cfg_path, const std::string& out) {
  const hst::RunConfig cfg = hst::load_config(cfg_path);
  const fs::path dir = hst::resolve_output(cfg, cfg_path.stem().string(), pick(out));
  return report(hst::run_oracle(cfg, dir));
}

// Every *.ini file in the directory is one ladder row, ordered by resolution.
int cmd_table(const fs::path& cfg_dir, const std::string& out) {
  if (!fs::is_directory(cfg_dir)) throw hst::ConfigError(cfg_dir.string() + ": not a directory");
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(cfg_dir))
    if (e.is_regular_file() && e.path().extension() == ".ini") files.push_back(e.path());
  if (files.empty()) throw hst::ConfigError(cfg_dir.string() + ": no .ini configs");
  std::sort(files.begin(), files.end());
  std::vector<hst::RunConfig> rows;
  for (const fs::path& f : files) {
    hst::RunConfig c = hst::load_config(f);
    if (c.scenario == hst::Scenario::OracleOnly || c.scenario == hst::Scenario::ConvergenceStudy)
      throw hst::ConfigError(f.string() + ": table rows must be single, necrotic or nucleation runs");
    rows.push_back(std::move(c));
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const hst::RunConfig& a, const hst::RunConfig& b) { return a.cells_x < b.cells_x; });
  const auto o = pick(out);
  const fs::path dir = o ? fs::path(*o) : cfg_dir / "table_out";
  fs::create_directories(dir);
  const std::vector<hst::TableRow> table = hst::convergence_table(rows, dir);
  hst::write_table(table, dir / "table.csv");
  std::cout << "wrote " << (dir / "table.csv").string() << "\n";
  const bool ok = std::all_of(table.begin(), table.end(), [](const hst::TableRow& r) { return r.completed; });
  if (!ok) std::cerr << "error: one or more rows failed\n";
  return ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hele-Shaw tumor growth simulations"};
  app.require_subcommand(1);
  std::string path, out;

  CLI::App* run = app.add_subcommand("run", "run the scenario of a config file");
  run->add_option("config", path, "config file")->required();
  run->add_option("-o,--output", out, "output directory (overrides the config and the environment)");

  CLI::App* table = app.add_subcommand("table", "convergence table from a directory of configs");
  table->add_option("config-dir", path, "directory with one .ini per row")->required();
  table->add_option("-o,--output", out, "output directory");

  CLI::App* oracle = app.add_subcommand("oracle", "exact radial radii for a config");
  oracle->add_option("config", path, "config file")->required();
  oracle->add_option("-o,--output", out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (run->parsed()) return cmd_run(path, out);
    if (table->parsed()) return cmd_table(path, out);
    return cmd_oracle(path, out);
  } catch (const hst::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
