#pragma once

// End-to-end runs: select -> optimize -> map -> correct, plus the config-file
// grammar and the scan driver used by the command-line tool.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ascvqe/asc.hpp"
#include "ascvqe/fcidump.hpp"
#include "ascvqe/integrals.hpp"
#include "ascvqe/io.hpp"
#include "ascvqe/jordan_wigner.hpp"
#include "ascvqe/mp2.hpp"
#include "ascvqe/oracle.hpp"
#include "ascvqe/subspace.hpp"

namespace ascvqe {

class ConfigError : public Error {
 public:
  using Error::Error;
};

enum class RunMethod { adapt, mp2s, ducc_sd };

struct RunConfig {
  std::string fcidump;
  RunMethod method = RunMethod::adapt;
  double epsilon = 1e-3;
  double epsilon_bar = 0.05;
  InitStrategy init = InitStrategy::recycled;
  bool asc = true;
  double grad_tol = 1e-8;
  std::size_t max_iter = 10000;
  std::string output = "out";
  std::uint64_t seed = 0;  // reserved; runs are deterministic
  std::size_t max_operators = 500;
  bool allow_duplicates = true;
  bool aux_include_principal = false;
  bool aux_safeguard = false;
  std::string pool_ranks = "sd";
  std::string aux_ranks = "sdtq";
  std::size_t threads = 1;

  /// Applies one key=value assignment; unknown keys and bad values throw ConfigError.
  void set(const std::string& key, const std::string& value);

  void validate() const {
    if (fcidump.empty()) throw ConfigError("config: 'fcidump' is required");
    if (!std::filesystem::exists(fcidump)) throw ConfigError("config: fcidump file '" + fcidump + "' not found");
    if (!(epsilon > 0.0)) throw ConfigError("config: epsilon must be positive");
    if (!(epsilon_bar > 0.0)) throw ConfigError("config: epsilon_bar must be positive");
    if (!(grad_tol > 0.0)) throw ConfigError("config: grad_tol must be positive");
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

inline double config_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double d = 0.0;
  try {
    d = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || v.empty()) throw ConfigError("config: '" + key + "' expects a number, got '" + v + "'");
  return d;
}

inline std::size_t config_count(const std::string& key, const std::string& v) {
  const double d = config_double(key, v);
  if (d < 0 || d != std::floor(d)) throw ConfigError("config: '" + key + "' expects a non-negative integer");
  return static_cast<std::size_t>(d);
}

inline bool config_switch(const std::string& key, const std::string& v) {
  if (v == "on" || v == "true" || v == "1" || v == "yes") return true;
  if (v == "off" || v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("config: '" + key + "' expects on|off, got '" + v + "'");
}

}  // namespace detail

inline RunMethod parse_method(const std::string& v) {
  if (v == "adapt") return RunMethod::adapt;
  if (v == "mp2s") return RunMethod::mp2s;
  if (v == "ducc_sd") return RunMethod::ducc_sd;
  throw ConfigError("config: method must be adapt|mp2s|ducc_sd, got '" + v + "'");
}

inline std::string method_name(RunMethod m) {
  switch (m) {
    case RunMethod::adapt: return "adapt";
    case RunMethod::mp2s: return "mp2s";
    case RunMethod::ducc_sd: return "ducc_sd";
  }
  return "?";
}

inline InitStrategy parse_init(const std::string& v) {
  if (v == "hf_zero") return InitStrategy::hf_zero;
  if (v == "recycled") return InitStrategy::recycled;
  if (v == "generator_informed") return InitStrategy::generator_informed;
  throw ConfigError("config: init must be hf_zero|recycled|generator_informed, got '" + v + "'");
}

inline void RunConfig::set(const std::string& key, const std::string& value) {
  using namespace detail;
  if (key == "fcidump") fcidump = value;
  else if (key == "method") method = parse_method(value);
  else if (key == "epsilon") epsilon = config_double(key, value);
  else if (key == "epsilon_bar") epsilon_bar = config_double(key, value);
  else if (key == "init") init = parse_init(value);
  else if (key == "asc") asc = config_switch(key, value);
  else if (key == "grad_tol") grad_tol = config_double(key, value);
  else if (key == "max_iter") max_iter = config_count(key, value);
  else if (key == "output") output = value;
  else if (key == "seed") seed = config_count(key, value);
  else if (key == "max_operators") max_operators = config_count(key, value);
  else if (key == "allow_duplicates") allow_duplicates = config_switch(key, value);
  else if (key == "aux_include_principal") aux_include_principal = config_switch(key, value);
  else if (key == "aux_safeguard") aux_safeguard = config_switch(key, value);
  else if (key == "threads") threads = config_count(key, value);
  else if (key == "pool_ranks" || key == "aux_ranks") {
    try {
      parse_ranks(value);
    } catch (const Error& e) {
      throw ConfigError(std::string("config: ") + e.what());
    }
    (key == "pool_ranks" ? pool_ranks : aux_ranks) = value;
  } else {
    throw ConfigError("config: unknown key '" + key + "'");
  }
}

/// Flat `key = value` lines; '#' starts a comment. A relative fcidump path is
/// resolved against the directory holding the config file.
inline RunConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = {}) {
  RunConfig cfg;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    try {
      cfg.set(key, value);
    } catch (const ConfigError& e) {
      throw ConfigError("config line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (!cfg.fcidump.empty() && std::filesystem::path(cfg.fcidump).is_relative() && !base_dir.empty())
    cfg.fcidump = (base_dir / cfg.fcidump).string();
  return cfg;
}

inline RunConfig read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in, std::filesystem::path(path).parent_path());
}

/// Integrals, Hamiltonian and compiled problem for one FCIDUMP.
struct System {
  MolecularIntegrals integrals;
  SpinOrbitalIntegrals spin;
  PauliSum hamiltonian{0};
  std::unique_ptr<Problem> problem;

  int n_so() const { return spin.n_so; }
  int n_electrons() const { return integrals.n_electrons; }
};

inline System load_system(const std::string& fcidump) {
  System s;
  s.integrals = read_fcidump(fcidump);
  if (2 * static_cast<std::size_t>(s.integrals.n_spatial) > kMaxQubits)
    throw SizeLimitError("system needs " + std::to_string(2 * s.integrals.n_spatial) + " qubits");
  s.spin = to_spin_orbitals(s.integrals);
  s.hamiltonian = build_hamiltonian(s.spin, s.integrals.e_core);
  s.problem = std::make_unique<Problem>(s.hamiltonian, (std::uint64_t{1} << s.integrals.n_electrons) - 1);
  return s;
}

/// E_FCI when the system fits the oracle, otherwise nullopt.
inline std::optional<double> fci_energy(const System& s) {
  if (static_cast<std::size_t>(s.n_so()) > kOracleQubitLimit) return std::nullopt;
  return ground_energy(s.hamiltonian, s.integrals.n_electrons, s.integrals.ms2).energy;
}

struct RunOutcome {
  std::string label;
  RunMethod method = RunMethod::adapt;
  double e_hf = 0.0;
  double e_final = 0.0;
  std::optional<double> e_asc;
  std::optional<double> e_fci;
  AnsatzState ansatz;
  std::size_t cnot = 0;
  std::size_t total_evals = 0;
  bool converged = false;
  SelectionTrace selection;
  std::vector<TraceRecord> vqe_trace;
  std::optional<AuxiliaryReport> aux;
};

inline RunOutcome run_pipeline(const RunConfig& cfg) {
  cfg.validate();
  const System sys = load_system(cfg.fcidump);
  const Problem& problem = *sys.problem;
  const auto n_so = static_cast<std::size_t>(sys.n_so());
  const auto n_elec = static_cast<std::size_t>(sys.n_electrons());

  RunOutcome out;
  out.label = std::filesystem::path(cfg.fcidump).stem().string();
  out.method = cfg.method;
  out.e_hf = problem.energy(problem.reference_state());
  out.e_fci = fci_energy(sys);

  const auto pool = excitation_pool(sys.n_so(), sys.n_electrons(), parse_ranks(cfg.pool_ranks));
  OptimizerOptions oo{cfg.grad_tol, cfg.max_iter};
  std::map<FermionExcitation, double> cached;

  if (cfg.method == RunMethod::adapt) {
    SelectionConfig sc;
    sc.epsilon = cfg.epsilon;
    sc.init = cfg.init;
    sc.max_operators = cfg.max_operators;
    sc.allow_duplicates = cfg.allow_duplicates;
    sc.optimizer = oo;
    sc.threads = cfg.threads;
    AdaptResult r = adapt_vqe(problem, pool, sc);
    out.ansatz = std::move(r.ansatz);
    out.e_final = r.energy;
    out.total_evals = r.trace.total_evals;
    out.converged = r.trace.converged;
    out.vqe_trace = r.trace.optimizer_trace;
    for (std::size_t i = 0; i < pool.size(); ++i) cached.emplace(pool[i], r.trace.final_gradients[i]);
    out.selection = std::move(r.trace);
  } else {
    AnsatzState a = empty_ansatz(n_so, n_elec);
    if (cfg.method == RunMethod::mp2s) {
      a = mp2s_ansatz(mp2_amplitudes(sys.spin), pool, n_so, n_elec, cfg.epsilon_bar);
    } else {
      for (const auto& x : pool) a.factors.push_back({x, 0.0, Role::principal});
    }
    CostFunction cost(problem, a);
    const OptimizationResult r = minimize(cost, a.parameters(), oo);
    a.set_parameters(r.parameters);
    out.ansatz = std::move(a);
    out.e_final = r.energy;
    out.total_evals = r.expectation_evals;
    out.converged = r.converged;
    out.vqe_trace = r.trace;
  }
  out.cnot = cnot_estimate(out.ansatz);

  if (cfg.asc) {
    const auto full = excitation_pool(sys.n_so(), sys.n_electrons(), parse_ranks(cfg.aux_ranks));
    const auto aux_pool = build_auxiliary_pool(full, out.ansatz, cfg.aux_include_principal);
    const StateVector phi = prepare_state(out.ansatz, problem);
    auto rows = map_auxiliary_parameters(phi, aux_pool, problem, cached.empty() ? nullptr : &cached, cfg.threads);
    AuxiliaryReport rep = asc_energy(problem.energy(phi), std::move(rows), cfg.aux_safeguard);
    out.e_asc = rep.e_asc;
    out.aux = std::move(rep);
  }
  return out;
}

inline ordered_json summary_json(const RunOutcome& r) {
  ordered_json j;
  j["schema_version"] = 1;
  j["label"] = r.label;
  j["method"] = method_name(r.method);
  j["e_hf"] = energy_json(r.e_hf);
  j["e_final"] = energy_json(r.e_final);
  j["e_asc"] = r.e_asc ? energy_json(*r.e_asc) : ordered_json(nullptr);
  j["e_fci"] = r.e_fci ? energy_json(*r.e_fci) : ordered_json(nullptr);
  j["n_params"] = r.ansatz.size();
  j["cnot_estimate"] = r.cnot;
  j["total_evals"] = r.total_evals;
  j["fresh_asc_evals"] = r.aux ? ordered_json(r.aux->fresh_evals) : ordered_json(nullptr);
  j["n_aux"] = r.aux ? ordered_json(r.aux->n_aux()) : ordered_json(nullptr);
  j["converged"] = r.converged;
  ordered_json ex = ordered_json::array();
  for (const auto& f : r.ansatz.factors) ex.push_back({{"excitation", f.excitation.label()}, {"theta", round_sig(f.theta)}});
  j["ansatz"] = ex;
  return j;
}

/// summary.json, trace.jsonl, vqe_trace.jsonl and, with ASC, aux_report.csv + aux_summary.json.
inline void write_run_outputs(const RunOutcome& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) throw Error("cannot write '" + (dir / name).string() + "'");
    return f;
  };
  open("summary.json") << summary_json(r).dump(2) << '\n';
  {
    auto f = open("trace.jsonl");
    write_selection_trace(f, r.selection);
  }
  {
    auto f = open("vqe_trace.jsonl");
    write_vqe_trace(f, r.vqe_trace);
  }
  if (r.aux) {
    auto f = open("aux_report.csv");
    write_aux_report_csv(f, *r.aux);
    open("aux_summary.json") << aux_summary_json(*r.aux).dump(2) << '\n';
  }
}

/// 2 for configuration / input problems, 3 for numerical failures.
inline int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const ParseError*>(&e) ||
      dynamic_cast<const SizeLimitError*>(&e) || dynamic_cast<const UnsupportedReferenceError*>(&e) ||
      dynamic_cast<const DimensionError*>(&e))
    return 2;
  return 3;
}

struct ScanRow {
  std::string label;
  std::optional<RunOutcome> outcome;
  int error_code = 0;
  std::string error;
};

inline void write_scan_csv(std::ostream& out, const std::vector<ScanRow>& rows) {
  out << "label,e_method,e_asc,e_fci,err_method,err_asc,cnot_estimate,total_evals,status\n";
  for (const auto& row : rows) {
    out << row.label << ',';
    if (!row.outcome) {
      out << ",,,,,,," << "error" << row.error_code << '\n';
      continue;
    }
    const RunOutcome& r = *row.outcome;
    auto opt = [](const std::optional<double>& v) { return v ? format_sig(*v) : std::string(); };
    std::string err_m, err_a;
    if (r.e_fci) {
      err_m = format_sig(std::abs(r.e_final - *r.e_fci));
      if (r.e_asc) err_a = format_sig(std::abs(*r.e_asc - *r.e_fci));
    }
    out << format_sig(r.e_final) << ',' << opt(r.e_asc) << ',' << opt(r.e_fci) << ',' << err_m << ',' << err_a << ','
        << r.cnot << ',' << r.total_evals << ",ok\n";
  }
}

/// One pipeline run per file, `jobs` at a time; rows come back in input order.
inline std::vector<ScanRow> run_scan(const RunConfig& base, const std::vector<std::string>& files, std::size_t jobs) {
  std::vector<ScanRow> rows(files.size());
  parallel_for(files.size(), jobs == 0 ? 1 : jobs, [&](std::size_t i) {
    RunConfig cfg = base;
    cfg.fcidump = files[i];
    rows[i].label = std::filesystem::path(files[i]).stem().string();
    try {
      rows[i].outcome = run_pipeline(cfg);
    } catch (const std::exception& e) {
      rows[i].error_code = exit_code_for(e);
      rows[i].error = e.what();
    }
  });
  return rows;
}

}  // namespace ascvqe
