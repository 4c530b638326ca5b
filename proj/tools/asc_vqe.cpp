#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "ascvqe/ascvqe.hpp"

using namespace ascvqe;

namespace {

struct Overrides {
  std::string asc, method, init, output;
  double epsilon = 0.0, epsilon_bar = 0.0;
  std::size_t threads = 0;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--asc", asc, "on|off");
    cmd->add_option("--method", method, "adapt|mp2s|ducc_sd");
    cmd->add_option("--epsilon", epsilon, "ADAPT gradient threshold (Hartree)");
    cmd->add_option("--epsilon-bar", epsilon_bar, "MP2 amplitude threshold");
    cmd->add_option("--init", init, "hf_zero|recycled|generator_informed");
    cmd->add_option("--threads", threads, "worker threads for pool-wide maps");
  }

  void apply(RunConfig& cfg) const {
    if (!asc.empty()) cfg.set("asc", asc);
    if (!method.empty()) cfg.set("method", method);
    if (!init.empty()) cfg.set("init", init);
    if (!output.empty()) cfg.output = output;
    if (epsilon != 0.0) cfg.epsilon = epsilon;
    if (epsilon_bar != 0.0) cfg.epsilon_bar = epsilon_bar;
    if (threads != 0) cfg.threads = threads;
  }
};

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    std::cerr << "asc-vqe: " << e.what() << '\n';
    return exit_code_for(e);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"AD(X)-ASC variational eigensolver toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  Overrides run_over;
  auto* run = app.add_subcommand("run", "select, optimize, map and correct one system");
  run->add_option("--config", config_path, "key=value config file")->required();
  run->add_option("--output", run_over.output, "output directory");
  run_over.add_to(run);

  std::string scan_config, scan_out = "scan.csv";
  std::vector<std::string> scan_files;
  std::size_t jobs = 1;
  Overrides scan_over;
  auto* scan = app.add_subcommand("scan", "run every FCIDUMP and write one CSV row per geometry");
  scan->add_option("--config", scan_config, "key=value config file (fcidump key optional)")->required();
  scan->add_option("--jobs", jobs, "geometries processed in parallel");
  scan->add_option("--csv", scan_out, "output CSV path");
  scan->add_option("files", scan_files, "FCIDUMP files")->required();
  scan_over.add_to(scan);

  std::string fci_file;
  auto* fci = app.add_subcommand("fci", "print the exact ground-state energy");
  fci->add_option("file", fci_file, "FCIDUMP file")->required();

  std::string pool_file, ranks = "sd";
  auto* pool = app.add_subcommand("pool", "list the excitation pool");
  pool->add_option("file", pool_file, "FCIDUMP file")->required();
  pool->add_option("--ranks", ranks, "sd|sdtq")->check(CLI::IsMember({"s", "d", "sd", "sdt", "sdtq"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (*run) {
    return guarded([&] {
      RunConfig cfg = read_config(config_path);
      run_over.apply(cfg);
      const RunOutcome r = run_pipeline(cfg);
      write_run_outputs(r, cfg.output);
      std::cout << summary_json(r).dump(2) << '\n';
      return 0;
    });
  }
  if (*scan) {
    return guarded([&] {
      RunConfig cfg = read_config(scan_config);
      scan_over.apply(cfg);
      const auto rows = run_scan(cfg, scan_files, jobs);
      std::ofstream out(scan_out, std::ios::binary);
      if (!out) throw ConfigError("cannot write '" + scan_out + "'");
      write_scan_csv(out, rows);
      std::size_t failed = 0;
      for (const auto& r : rows)
        if (!r.outcome) {
          ++failed;
          std::cerr << "asc-vqe: " << r.label << ": " << r.error << '\n';
        }
      return failed == rows.size() && !rows.empty() ? 3 : 0;
    });
  }
  if (*fci) {
    return guarded([&] {
      if (!std::filesystem::exists(fci_file)) throw ConfigError("fcidump file '" + fci_file + "' not found");
      const System sys = load_system(fci_file);
      const auto e = fci_energy(sys);
      if (!e) throw SizeLimitError("system exceeds the oracle limit");
      std::printf("%.10f\n", *e);
      return 0;
    });
  }
  if (*pool) {
    return guarded([&] {
      if (!std::filesystem::exists(pool_file)) throw ConfigError("fcidump file '" + pool_file + "' not found");
      const MolecularIntegrals m = read_fcidump(pool_file);
      const auto p = excitation_pool(2 * m.n_spatial, m.n_electrons, parse_ranks(ranks));
      std::cout << "# n_so=" << 2 * m.n_spatial << " n_elec=" << m.n_electrons << " ranks=" << ranks
                << " size=" << p.size() << '\n';
      for (const auto& x : p) std::cout << x.label() << '\n';
      return 0;
    });
  }
  return 2;
}
