#pragma once

// JSON-lines, CSV and JSON serializers. Energies are written with 12
// significant digits.

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

#include "ascvqe/asc.hpp"
#include "ascvqe/subspace.hpp"

namespace ascvqe {

using ordered_json = nlohmann::ordered_json;

inline constexpr int kEnergyDigits = 12;

/// Nearest double to v printed with 12 significant digits.
inline double round_sig(double v, int digits = kEnergyDigits) {
  if (!std::isfinite(v) || v == 0.0) return v;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return std::stod(buf);
}

inline std::string format_sig(double v, int digits = kEnergyDigits) {
  if (std::isnan(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

inline ordered_json energy_json(double v) { return std::isfinite(v) ? ordered_json(round_sig(v)) : ordered_json(nullptr); }

/// {iter, energy_hartree, grad_inf_norm, fevals_cum} per optimizer iteration.
inline void write_vqe_trace(std::ostream& out, const std::vector<TraceRecord>& trace) {
  for (const auto& r : trace) {
    ordered_json j;
    j["iter"] = r.iter;
    j["energy_hartree"] = energy_json(r.energy);
    j["grad_inf_norm"] = round_sig(r.grad_inf_norm);
    j["fevals_cum"] = r.fevals_cum;
    out << j.dump() << '\n';
  }
}

/// One record per ADAPT macro-iteration.
inline void write_selection_trace(std::ostream& out, const SelectionTrace& trace) {
  for (const auto& s : trace.steps) {
    ordered_json j;
    j["iter"] = s.iteration;
    j["excitation"] = s.chosen.label();
    j["gradient_hartree"] = round_sig(s.gradient);
    j["theta_init"] = round_sig(s.theta_init);
    j["energy_hartree"] = energy_json(s.energy);
    j["n_params"] = s.n_params;
    j["optimizer_iterations"] = s.optimizer_iterations;
    j["evals_cum"] = s.evals_cum;
    j["selection_evals_cum"] = s.selection_evals_cum;
    out << j.dump() << '\n';
  }
}

inline void write_aux_report_csv(std::ostream& out, const AuxiliaryReport& rep) {
  out << "excitation,num,den,theta,contribution,degenerate,reused,dropped\n";
  for (const auto& r : rep.rows)
    out << r.excitation.label() << ',' << format_sig(r.numerator) << ',' << format_sig(r.denominator) << ','
        << format_sig(r.theta) << ',' << format_sig(r.contribution) << ',' << int(r.degenerate) << ','
        << int(r.reused) << ',' << int(r.dropped) << '\n';
}

inline ordered_json aux_summary_json(const AuxiliaryReport& rep) {
  ordered_json j;
  j["e_p"] = energy_json(rep.e_p);
  j["e_asc"] = energy_json(rep.e_asc);
  j["n_aux"] = rep.n_aux();
  j["fresh_evals"] = rep.fresh_evals;
  j["reused_evals"] = rep.reused;
  return j;
}

}  // namespace ascvqe
