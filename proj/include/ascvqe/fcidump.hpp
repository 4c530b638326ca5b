#pragma once

// FCIDUMP reader.
//
// Header: a namelist starting with `&FCI` carrying NORB, NELEC and MS2 (ORBSYM,
// ISYM and anything else are accepted and ignored), closed by `&END` or `/`.
// Body: `value i j k l` with 1-based indices.
//   i j k l all nonzero   -> (ij|kl), chemist notation
//   k = l = 0             -> h_ij
//   j = k = l = 0         -> orbital energy of orbital i (optional trailer)
//   all zero              -> core energy

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ascvqe/core.hpp"

namespace ascvqe {

using EriKey = std::array<int, 4>;

/// Canonical representative of the 8-fold symmetry orbit of (pq|rs).
inline EriKey canonical_eri_key(int p, int q, int r, int s) noexcept {
  if (p < q) std::swap(p, q);
  if (r < s) std::swap(r, s);
  if (p < r || (p == r && q < s)) {
    std::swap(p, r);
    std::swap(q, s);
  }
  return {p, q, r, s};
}

struct MolecularIntegrals {
  int n_spatial = 0;
  int n_electrons = 0;
  int ms2 = 0;
  double e_core = 0.0;
  std::map<std::array<int, 2>, double> h1;  // key (p, q) with p >= q
  std::map<EriKey, double> eri;             // canonical keys only
  std::vector<double> trailer_orbital_energies;  // empty unless the file carries them

  double h(int p, int q) const {
    auto it = h1.find(p >= q ? std::array<int, 2>{p, q} : std::array<int, 2>{q, p});
    return it == h1.end() ? 0.0 : it->second;
  }

  double g(int p, int q, int r, int s) const {
    auto it = eri.find(canonical_eri_key(p, q, r, s));
    return it == eri.end() ? 0.0 : it->second;
  }

  void set_h(int p, int q, double v) { h1[p >= q ? std::array<int, 2>{p, q} : std::array<int, 2>{q, p}] = v; }
  void set_g(int p, int q, int r, int s, double v) { eri[canonical_eri_key(p, q, r, s)] = v; }
};

namespace detail {

inline std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::toupper(c); });
  return s;
}

inline bool parse_double(std::string tok, double& out) {
  // Fortran writers sometimes emit D exponents.
  std::replace(tok.begin(), tok.end(), 'D', 'E');
  std::replace(tok.begin(), tok.end(), 'd', 'e');
  char* end = nullptr;
  out = std::strtod(tok.c_str(), &end);
  return !tok.empty() && end == tok.c_str() + tok.size();
}

inline bool parse_int(const std::string& tok, long& out) {
  char* end = nullptr;
  out = std::strtol(tok.c_str(), &end, 10);
  return !tok.empty() && end == tok.c_str() + tok.size();
}

}  // namespace detail

inline MolecularIntegrals parse_fcidump(std::istream& in) {
  MolecularIntegrals m;
  std::string line;
  std::size_t line_no = 0;

  // Header namelist: gather KEY=VALUE tokens until &END or '/'.
  std::string header;
  bool started = false, closed = false;
  std::size_t header_start_line = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string u = detail::upper(line);
    if (!started) {
      const auto first = u.find_first_not_of(" \t\r");
      if (first == std::string::npos) continue;
      if (u.compare(first, 4, "&FCI") != 0) throw ParseError(line_no, "expected '&FCI' namelist header");
      started = true;
      header_start_line = line_no;
      u = u.substr(first + 4);
    }
    const auto end_pos = std::min(u.find("&END"), u.find('/'));
    if (end_pos != std::string::npos) {
      header += u.substr(0, end_pos);
      closed = true;
      break;
    }
    header += u + ",";
  }
  if (!started) throw ParseError(line_no + 1, "empty input: missing '&FCI' header");
  if (!closed) throw ParseError(line_no, "unterminated header: missing '&END' or '/'");

  std::map<std::string, std::vector<std::string>> keys;
  {
    std::string cur;
    std::string tok;
    auto flush = [&](std::string t) {
      t.erase(std::remove_if(t.begin(), t.end(), [](unsigned char c) { return std::isspace(c); }), t.end());
      if (t.empty()) return;
      const auto eq = t.find('=');
      if (eq != std::string::npos) {
        cur = t.substr(0, eq);
        keys[cur];
        t = t.substr(eq + 1);
        if (t.empty()) return;
      }
      if (cur.empty()) throw ParseError(header_start_line, "value '" + t + "' without a key");
      keys[cur].push_back(t);
    };
    // Split on commas; "KEY=" may be followed by whitespace before its value.
    std::string normalized;
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == '=') {
        normalized += '=';
        while (i + 1 < header.size() && std::isspace(static_cast<unsigned char>(header[i + 1]))) ++i;
      } else {
        normalized += header[i];
      }
    }
    std::stringstream ss(normalized);
    while (std::getline(ss, tok, ',')) {
      std::stringstream ws(tok);
      std::string w;
      while (ws >> w) flush(w);
    }
  }
  auto int_key = [&](const std::string& k, bool required, long fallback) -> long {
    auto it = keys.find(k);
    if (it == keys.end() || it->second.empty()) {
      if (required) throw ParseError(header_start_line, "header is missing " + k);
      return fallback;
    }
    long v = 0;
    if (!detail::parse_int(it->second.front(), v))
      throw ParseError(header_start_line, "non-integer value for " + k + ": '" + it->second.front() + "'");
    return v;
  };
  const long norb = int_key("NORB", true, 0);
  const long nelec = int_key("NELEC", true, 0);
  const long ms2 = int_key("MS2", false, 0);
  if (norb <= 0) throw ParseError(header_start_line, "NORB must be positive");
  if (nelec < 0 || nelec > 2 * norb) throw ParseError(header_start_line, "NELEC out of range");
  m.n_spatial = static_cast<int>(norb);
  m.n_electrons = static_cast<int>(nelec);
  m.ms2 = static_cast<int>(ms2);

  std::vector<double> trailer(static_cast<std::size_t>(norb), 0.0);
  std::vector<bool> trailer_seen(static_cast<std::size_t>(norb), false);
  bool any_trailer = false;

  while (std::getline(in, line)) {
    ++line_no;
    std::stringstream ss(line);
    std::vector<std::string> tok;
    std::string t;
    while (ss >> t) tok.push_back(t);
    if (tok.empty()) continue;
    if (tok.size() != 5) throw ParseError(line_no, "expected 'value i j k l', got " + std::to_string(tok.size()) + " fields");
    double v = 0.0;
    if (!detail::parse_double(tok[0], v)) throw ParseError(line_no, "non-numeric value '" + tok[0] + "'");
    std::array<long, 4> idx{};
    for (int k = 0; k < 4; ++k) {
      if (!detail::parse_int(tok[static_cast<std::size_t>(k + 1)], idx[static_cast<std::size_t>(k)]))
        throw ParseError(line_no, "non-integer index '" + tok[static_cast<std::size_t>(k + 1)] + "'");
      if (idx[static_cast<std::size_t>(k)] < 0 || idx[static_cast<std::size_t>(k)] > norb)
        throw ParseError(line_no, "index " + std::to_string(idx[static_cast<std::size_t>(k)]) +
                                      " out of range [1, " + std::to_string(norb) + "]");
    }
    const auto [i, j, k, l] = idx;
    if (i == 0 && j == 0 && k == 0 && l == 0) {
      m.e_core = v;
    } else if (i > 0 && j > 0 && k > 0 && l > 0) {
      m.set_g(static_cast<int>(i - 1), static_cast<int>(j - 1), static_cast<int>(k - 1), static_cast<int>(l - 1), v);
    } else if (i > 0 && j > 0 && k == 0 && l == 0) {
      m.set_h(static_cast<int>(i - 1), static_cast<int>(j - 1), v);
    } else if (i > 0 && j == 0 && k == 0 && l == 0) {
      trailer[static_cast<std::size_t>(i - 1)] = v;
      trailer_seen[static_cast<std::size_t>(i - 1)] = true;
      any_trailer = true;
    } else {
      throw ParseError(line_no, "index pattern not recognised");
    }
  }
  if (any_trailer) {
    if (std::find(trailer_seen.begin(), trailer_seen.end(), false) != trailer_seen.end())
      throw ParseError(line_no, "orbital-energy trailer does not cover every orbital");
    m.trailer_orbital_energies = std::move(trailer);
  }
  return m;
}

inline MolecularIntegrals parse_fcidump_text(const std::string& text) {
  std::istringstream in(text);
  return parse_fcidump(in);
}

inline MolecularIntegrals read_fcidump(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open FCIDUMP file '" + path + "'");
  return parse_fcidump(in);
}

}  // namespace ascvqe
