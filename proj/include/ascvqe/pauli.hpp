#pragma once

// Sparse Pauli-string algebra.
//
// A PauliString is stored as a pair of bitmasks (x, z) and denotes the operator
//   P(x, z) = prod_k  i^{x_k z_k} X_k^{x_k} Z_k^{z_k}
// so that x=1,z=1 on a qubit is exactly Y. Qubit 0 is the least significant bit
// everywhere (dense matrices, statevector indices, text form).

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <compare>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ascvqe/core.hpp"

namespace ascvqe {

struct PauliString {
  std::uint64_t x = 0;
  std::uint64_t z = 0;

  auto operator<=>(const PauliString&) const = default;

  bool is_identity() const noexcept { return (x | z) == 0; }
  int weight() const noexcept { return std::popcount(x | z); }

  char letter(std::size_t qubit) const noexcept {
    const bool xb = (x >> qubit) & 1U;
    const bool zb = (z >> qubit) & 1U;
    if (xb && zb) return 'Y';
    if (xb) return 'X';
    if (zb) return 'Z';
    return 'I';
  }

  /// Letters from the highest qubit down to qubit 0 (reads like a bitstring).
  std::string letters(std::size_t n_qubits) const {
    std::string s(n_qubits, 'I');
    for (std::size_t q = 0; q < n_qubits; ++q) s[n_qubits - 1 - q] = letter(q);
    return s;
  }

  static PauliString single(std::size_t qubit, char p) {
    const std::uint64_t bit = std::uint64_t{1} << qubit;
    switch (p) {
      case 'X': return {bit, 0};
      case 'Y': return {bit, bit};
      case 'Z': return {0, bit};
      case 'I': return {};
      default: throw Error(std::string("unknown Pauli letter '") + p + "'");
    }
  }

  /// Inverse of letters(): leftmost character is the highest qubit.
  static PauliString from_letters(std::string_view s) {
    PauliString p;
    const std::size_t n = s.size();
    for (std::size_t i = 0; i < n; ++i) {
      const auto q = PauliString::single(n - 1 - i, s[i]);
      p.x |= q.x;
      p.z |= q.z;
    }
    return p;
  }
};

inline bool commutes(const PauliString& a, const PauliString& b) noexcept {
  return ((std::popcount(a.x & b.z) + std::popcount(a.z & b.x)) & 1) == 0;
}

/// i^k for k taken mod 4.
inline cplx i_power(int k) noexcept {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

/// Product of two strings: a*b = phase * P(result).
inline std::pair<cplx, PauliString> multiply(const PauliString& a, const PauliString& b) noexcept {
  const PauliString r{a.x ^ b.x, a.z ^ b.z};
  const int k = std::popcount(a.x & a.z) + std::popcount(b.x & b.z) + 2 * std::popcount(a.z & b.x) -
                std::popcount(r.x & r.z);
  return {i_power(k), r};
}

/// Weighted sum of Pauli strings on a fixed number of qubits.
///
/// Terms live in an ordered map, so iteration order (and hence every
/// floating-point reduction over terms) is canonical regardless of how the sum
/// was assembled.
class PauliSum {
 public:
  using Terms = std::map<PauliString, cplx>;

  PauliSum() = default;
  explicit PauliSum(std::size_t n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits > 64) throw DimensionError("PauliSum supports at most 64 qubits");
  }

  static PauliSum identity(std::size_t n_qubits, cplx c = 1.0) {
    PauliSum s(n_qubits);
    s.add(PauliString{}, c);
    s.simplify();
    return s;
  }

  static PauliSum term(std::size_t n_qubits, PauliString p, cplx c = 1.0) {
    PauliSum s(n_qubits);
    s.add(p, c);
    s.simplify();
    return s;
  }

  std::size_t n_qubits() const noexcept { return n_qubits_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool empty() const noexcept { return terms_.empty(); }
  const Terms& terms() const noexcept { return terms_; }
  auto begin() const { return terms_.begin(); }
  auto end() const { return terms_.end(); }

  cplx coefficient(const PauliString& p) const {
    auto it = terms_.find(p);
    return it == terms_.end() ? cplx{} : it->second;
  }

  /// Accumulate without simplifying; call simplify() once assembly is done.
  void add(const PauliString& p, cplx c) {
    if (n_qubits_ < 64 && ((p.x | p.z) >> n_qubits_) != 0)
      throw DimensionError("Pauli string acts outside the register");
    terms_[p] += c;
  }

  PauliSum& simplify(double tol = kSimplifyTolerance) {
    std::erase_if(terms_, [tol](const auto& kv) { return std::abs(kv.second) < tol; });
    return *this;
  }

  PauliSum adjoint() const {
    PauliSum out(n_qubits_);
    for (const auto& [p, c] : terms_) out.terms_.emplace(p, std::conj(c));
    return out;
  }

  PauliSum& operator+=(const PauliSum& o) {
    check_same(o);
    for (const auto& [p, c] : o.terms_) terms_[p] += c;
    return simplify();
  }
  PauliSum& operator-=(const PauliSum& o) {
    check_same(o);
    for (const auto& [p, c] : o.terms_) terms_[p] -= c;
    return simplify();
  }
  PauliSum& operator*=(cplx s) {
    for (auto& kv : terms_) kv.second *= s;
    return simplify();
  }

  friend PauliSum operator+(PauliSum a, const PauliSum& b) { return a += b; }
  friend PauliSum operator-(PauliSum a, const PauliSum& b) { return a -= b; }
  friend PauliSum operator*(PauliSum a, cplx s) { return a *= s; }
  friend PauliSum operator*(cplx s, PauliSum a) { return a *= s; }

  friend bool operator==(const PauliSum& a, const PauliSum& b) {
    return a.n_qubits_ == b.n_qubits_ && a.terms_ == b.terms_;
  }

  /// Largest coefficient-wise deviation between two sums.
  double max_abs_difference(const PauliSum& o) const {
    check_same(o);
    double d = 0.0;
    for (const auto& [p, c] : terms_) d = std::max(d, std::abs(c - o.coefficient(p)));
    for (const auto& [p, c] : o.terms_)
      if (!terms_.contains(p)) d = std::max(d, std::abs(c));
    return d;
  }

  bool is_hermitian(double tol = kSimplifyTolerance) const {
    return std::all_of(terms_.begin(), terms_.end(),
                       [tol](const auto& kv) { return std::abs(kv.second.imag()) <= tol; });
  }
  bool is_anti_hermitian(double tol = kSimplifyTolerance) const {
    return std::all_of(terms_.begin(), terms_.end(),
                       [tol](const auto& kv) { return std::abs(kv.second.real()) <= tol; });
  }

  void check_same(const PauliSum& o) const {
    if (o.n_qubits_ != n_qubits_)
      throw DimensionError("qubit-count mismatch: " + std::to_string(n_qubits_) + " vs " +
                           std::to_string(o.n_qubits_));
  }

 private:
  std::size_t n_qubits_ = 0;
  Terms terms_;
};

inline PauliSum multiply(const PauliSum& a, const PauliSum& b) {
  a.check_same(b);
  PauliSum out(a.n_qubits());
  for (const auto& [pa, ca] : a)
    for (const auto& [pb, cb] : b) {
      const auto [phase, p] = multiply(pa, pb);
      out.add(p, phase * ca * cb);
    }
  return out.simplify();
}

inline PauliSum operator*(const PauliSum& a, const PauliSum& b) { return multiply(a, b); }

/// [a, b] = ab - ba. Commuting string pairs are skipped outright, so they leave
/// no residue; anticommuting pairs contribute 2ab.
inline PauliSum commutator(const PauliSum& a, const PauliSum& b) {
  a.check_same(b);
  PauliSum out(a.n_qubits());
  for (const auto& [pa, ca] : a)
    for (const auto& [pb, cb] : b) {
      if (commutes(pa, pb)) continue;
      const auto [phase, p] = multiply(pa, pb);
      out.add(p, 2.0 * phase * ca * cb);
    }
  return out.simplify();
}

/// [[b, g], g].
inline PauliSum double_commutator(const PauliSum& b, const PauliSum& g) {
  return commutator(commutator(b, g), g);
}

/// Dense 2^n x 2^n matrix of the sum. Exact Kronecker expansion, qubit 0 = LSB.
inline Eigen::MatrixXcd dense_matrix(const PauliSum& a, std::size_t limit = kDenseQubitLimit) {
  const std::size_t n = a.n_qubits();
  if (n > limit)
    throw SizeLimitError("dense_matrix: " + std::to_string(n) + " qubits exceeds limit " +
                         std::to_string(limit));
  const std::uint64_t dim = std::uint64_t{1} << n;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (const auto& [p, c] : a) {
    const cplx base = c * i_power(std::popcount(p.x & p.z));
    for (std::uint64_t b = 0; b < dim; ++b) {
      const double sign = (std::popcount(b & p.z) & 1) ? -1.0 : 1.0;
      m(static_cast<Eigen::Index>(b ^ p.x), static_cast<Eigen::Index>(b)) += sign * base;
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// Text form. One term per line:
//
//   term    := '(' real sign real 'i' ')' sep letters
//   sign    := '+' | '-'
//   sep     := '·' | '*'
//   letters := [IXYZ]{n_qubits}      (leftmost letter = highest qubit)
//
// e.g. "(0+0.5i)·XIYZ". Reals use round-trip precision. The zero sum formats
// as the empty string, which is why parse_pauli_sum takes the register width.
// ---------------------------------------------------------------------------

inline std::string format_real(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

inline std::string to_string(const PauliSum& s) {
  std::string out;
  for (const auto& [p, c] : s) {
    out += '(';
    out += format_real(c.real());
    out += (std::signbit(c.imag()) ? '-' : '+');
    out += format_real(std::abs(c.imag()));
    out += "i)·";
    out += p.letters(s.n_qubits());
    out += '\n';
  }
  return out;
}

inline PauliSum parse_pauli_sum(std::string_view text, std::size_t n_qubits) {
  PauliSum out(n_qubits);
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    std::string line(text.substr(pos, eol - pos));
    pos = eol + 1;
    ++line_no;
    line.erase(std::remove_if(line.begin(), line.end(), [](unsigned char ch) { return std::isspace(ch); }),
               line.end());
    if (line.empty()) {
      if (eol == text.size()) break;
      continue;
    }
    if (line.front() != '(') throw ParseError(line_no, "expected '('");
    const auto close = line.find(')');
    if (close == std::string::npos || close < 2 || line[close - 1] != 'i')
      throw ParseError(line_no, "expected complex coefficient '(re+imi)'");
    const std::string num = line.substr(1, close - 2);
    // Split at the sign that separates real and imaginary parts (not an exponent sign).
    std::size_t split = std::string::npos;
    for (std::size_t k = 1; k < num.size(); ++k)
      if ((num[k] == '+' || num[k] == '-') && num[k - 1] != 'e' && num[k - 1] != 'E') split = k;
    if (split == std::string::npos) throw ParseError(line_no, "missing imaginary part");
    double re = 0.0, im = 0.0;
    try {
      std::size_t used = 0;
      re = std::stod(num.substr(0, split), &used);
      if (used != split) throw std::invalid_argument("re");
      const std::string ims = num.substr(split);
      im = std::stod(ims, &used);
      if (used != ims.size()) throw std::invalid_argument("im");
    } catch (const std::exception&) {
      throw ParseError(line_no, "non-numeric coefficient '" + num + "'");
    }
    std::string rest = line.substr(close + 1);
    if (rest.rfind("·", 0) == 0)
      rest.erase(0, std::string("·").size());
    else if (!rest.empty() && rest.front() == '*')
      rest.erase(0, 1);
    else
      throw ParseError(line_no, "expected separator after coefficient");
    if (rest.size() != n_qubits) throw ParseError(line_no, "string length does not match register width");
    try {
      out.add(PauliString::from_letters(rest), cplx{re, im});
    } catch (const Error& e) {
      throw ParseError(line_no, e.what());
    }
  }
  return out.simplify();
}

}  // namespace ascvqe
