#pragma once

#include <algorithm>
#include <compare>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "ascvqe/core.hpp"

namespace ascvqe {

/// Composite hole-particle index: tau = a+_{v0} a+_{v1} ... a_{o1} a_{o0}.
/// Indices are spin orbitals; occupied ones lie below the reference Fermi level.
struct FermionExcitation {
  std::vector<int> occupied;
  std::vector<int> virtuals;

  int rank() const noexcept { return static_cast<int>(occupied.size()); }

  friend bool operator==(const FermionExcitation&, const FermionExcitation&) = default;
  friend std::strong_ordering operator<=>(const FermionExcitation& a, const FermionExcitation& b) {
    if (auto c = a.rank() <=> b.rank(); c != 0) return c;
    if (auto c = a.occupied <=> b.occupied; c != 0) return c;
    return a.virtuals <=> b.virtuals;
  }

  /// "0 1 -> 4 5"
  std::string label() const {
    std::string s;
    for (int i : occupied) s += std::to_string(i) + ' ';
    s += "->";
    for (int a : virtuals) s += ' ' + std::to_string(a);
    return s;
  }

  int spin_balance() const noexcept {
    int d = 0;
    for (int i : occupied) d += (i & 1) ? -1 : 1;
    for (int a : virtuals) d -= (a & 1) ? -1 : 1;
    return d;
  }

  bool is_valid(int n_so, int n_elec) const {
    if (occupied.empty() || occupied.size() != virtuals.size() || occupied.size() > 4) return false;
    auto increasing = [](const std::vector<int>& v) {
      return std::adjacent_find(v.begin(), v.end(), std::greater_equal<>{}) == v.end();
    };
    if (!increasing(occupied) || !increasing(virtuals)) return false;
    if (occupied.front() < 0 || occupied.back() >= n_elec) return false;
    if (virtuals.front() < n_elec || virtuals.back() >= n_so) return false;
    return spin_balance() == 0;
  }
};

namespace detail {

inline void combinations(const std::vector<int>& pool, int k, std::vector<std::vector<int>>& out) {
  std::vector<int> cur;
  auto rec = [&](auto&& self, std::size_t start) -> void {
    if (static_cast<int>(cur.size()) == k) {
      out.push_back(cur);
      return;
    }
    for (std::size_t i = start; i < pool.size(); ++i) {
      cur.push_back(pool[i]);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
}

}  // namespace detail

/// Parse "s", "sd", "sdt", "sdtq" (any subset of the letters) into excitation ranks.
inline std::set<int> parse_ranks(const std::string& spec) {
  std::set<int> ranks;
  for (char c : spec) {
    switch (c) {
      case 's': case 'S': ranks.insert(1); break;
      case 'd': case 'D': ranks.insert(2); break;
      case 't': case 'T': ranks.insert(3); break;
      case 'q': case 'Q': ranks.insert(4); break;
      default: throw Error(std::string("unknown excitation rank letter '") + c + "'");
    }
  }
  return ranks;
}

/// Every spin- and particle-number-conserving excitation out of the reference
/// with spin orbitals [0, n_elec) occupied. Ordered by rank, then occupied
/// indices, then virtual indices (lexicographic).
inline std::vector<FermionExcitation> excitation_pool(int n_so, int n_elec, const std::set<int>& ranks) {
  if (n_elec < 0 || n_elec > n_so) throw DimensionError("excitation_pool: n_elec outside [0, n_so]");
  std::vector<int> occ, vir;
  for (int p = 0; p < n_elec; ++p) occ.push_back(p);
  for (int p = n_elec; p < n_so; ++p) vir.push_back(p);
  std::vector<FermionExcitation> pool;
  for (int r : ranks) {
    if (r < 1 || r > 4) throw Error("excitation rank must be 1..4");
    std::vector<std::vector<int>> oc, vc;
    detail::combinations(occ, r, oc);
    detail::combinations(vir, r, vc);
    for (const auto& o : oc)
      for (const auto& v : vc) {
        FermionExcitation x{o, v};
        if (x.spin_balance() == 0) pool.push_back(std::move(x));
      }
  }
  return pool;
}

}  // namespace ascvqe
