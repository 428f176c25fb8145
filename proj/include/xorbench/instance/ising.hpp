#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "xorbench/instance/xorsat.hpp"

namespace xorbench {

using Spin = std::int8_t;
using Bit = std::uint8_t;

/// Two-body terms of the 4-spin clause gadget. Spins 0..2 are the clause
/// variables in ascending index order; the auxiliary spin is separate.
struct GadgetTerms {
  std::array<int, 3> h{};      // field on each clause spin
  int h_aux = 0;               // field on the auxiliary spin
  std::array<int, 3> j{};      // couplings (0,1), (0,2), (1,2)
  std::array<int, 3> j_aux{};  // couplings (aux, k) for k = 0..2

  static constexpr std::array<std::pair<int, int>, 3> kPairs{{{0, 1}, {0, 2}, {1, 2}}};

  int energy(std::span<const Spin, 3> s, Spin aux) const noexcept {
    int e = h_aux * aux;
    for (int k = 0; k < 3; ++k) e += h[k] * s[k] + j_aux[k] * aux * s[k];
    for (int p = 0; p < 3; ++p) e += j[p] * s[kPairs[p].first] * s[kPairs[p].second];
    return e;
  }

  Spin best_aux(std::span<const Spin, 3> s) const noexcept {
    return energy(s, -1) < energy(s, +1) ? Spin{-1} : Spin{+1};
  }
};

inline constexpr int kGadgetMinimum = -4;

/// Sign 0 (spin product +1 required) uses (h, h_aux, J, J_aux) = (-1, -2, 1, 2).
/// Sign 1 is the same gadget with all three clause spins negated: clause
/// fields and auxiliary couplings change sign, clause-clause couplings keep
/// theirs, and the minima move onto the product -1 triples.
inline GadgetTerms clause_gadget(int sign) {
  if (sign != 0 && sign != 1) throw std::invalid_argument("clause_gadget: sign must be 0 or 1");
  const int t = sign == 0 ? 1 : -1;
  GadgetTerms g;
  g.h = {-1 * t, -1 * t, -1 * t};
  g.h_aux = -2;
  g.j = {1, 1, 1};
  g.j_aux = {2 * t, 2 * t, 2 * t};
  return g;
}

struct Coupling {
  std::uint32_t i = 0;
  std::uint32_t j = 0;  // i < j
  std::int64_t value = 0;

  friend bool operator==(const Coupling&, const Coupling&) = default;
};

/// E(s) = sum_i h_i s_i + sum_{i<j} J_ij s_i s_j over n = 2m spins. Spins
/// 0..m-1 are the native variables (s = 1 - 2x); spin m + c is the auxiliary
/// of clause c.
struct IsingInstance {
  std::size_t n = 0;
  std::vector<std::int64_t> h;
  std::vector<Coupling> couplings;  // sorted by (i, j), nonzero values only
  std::int64_t ground_energy = 0;
  std::vector<std::uint32_t> aux_map;
};

struct QuboTerm {
  std::uint32_t i = 0;
  std::uint32_t j = 0;  // i <= j; i == j is a linear term
  std::int64_t value = 0;

  friend bool operator==(const QuboTerm&, const QuboTerm&) = default;
};

/// f_Q(x) = sum_{i<=j} Q_ij x_i x_j; f_Q(x) + offset is the Ising energy of
/// s = 1 - 2x. ground_value is the minimum of f_Q.
struct QuboInstance {
  std::size_t n = 0;
  std::vector<QuboTerm> terms;  // sorted by (i, j), nonzero values only
  std::int64_t offset = 0;
  std::int64_t ground_value = 0;
};

namespace detail {

inline std::vector<Coupling> collect(const std::map<std::pair<std::uint32_t, std::uint32_t>, std::int64_t>& acc) {
  std::vector<Coupling> out;
  for (const auto& [key, v] : acc) {
    if (v != 0) out.push_back({key.first, key.second, v});
  }
  return out;
}

}  // namespace detail

inline IsingInstance to_ising(const XorsatInstance& inst) {
  IsingInstance out;
  const std::size_t m = inst.m;
  out.n = 2 * m;
  out.h.assign(out.n, 0);
  out.aux_map.resize(inst.clauses.size());
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::int64_t> acc;
  auto add_j = [&](std::uint32_t a, std::uint32_t b, std::int64_t v) {
    if (a > b) std::swap(a, b);
    acc[{a, b}] += v;
  };
  for (std::size_t c = 0; c < inst.clauses.size(); ++c) {
    const auto& cl = inst.clauses[c];
    const auto g = clause_gadget(cl.sign);
    const auto aux = static_cast<std::uint32_t>(m + c);
    out.aux_map[c] = aux;
    out.h[aux] += g.h_aux;
    for (int k = 0; k < 3; ++k) {
      out.h[cl.vars[k]] += g.h[k];
      add_j(aux, cl.vars[k], g.j_aux[k]);
    }
    for (int p = 0; p < 3; ++p) {
      add_j(cl.vars[GadgetTerms::kPairs[p].first], cl.vars[GadgetTerms::kPairs[p].second], g.j[p]);
    }
  }
  out.couplings = detail::collect(acc);
  out.ground_energy = static_cast<std::int64_t>(kGadgetMinimum) * static_cast<std::int64_t>(m);
  return out;
}

/// Substitutes s = 1 - 2x:  h s -> h - 2h x,  J s_i s_j -> J (1 - 2x_i - 2x_j + 4 x_i x_j).
inline QuboInstance ising_to_qubo(const IsingInstance& ising) {
  QuboInstance q;
  q.n = ising.n;
  std::vector<std::int64_t> diag(ising.n, 0);
  std::int64_t offset = 0;
  for (std::size_t i = 0; i < ising.n; ++i) {
    diag[i] -= 2 * ising.h[i];
    offset += ising.h[i];
  }
  std::vector<QuboTerm> off;
  for (const auto& c : ising.couplings) {
    diag[c.i] -= 2 * c.value;
    diag[c.j] -= 2 * c.value;
    offset += c.value;
    off.push_back({c.i, c.j, 4 * c.value});
  }
  for (std::size_t i = 0; i < ising.n; ++i) {
    if (diag[i] != 0) off.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i), diag[i]});
  }
  std::sort(off.begin(), off.end(), [](const QuboTerm& a, const QuboTerm& b) {
    return std::pair(a.i, a.j) < std::pair(b.i, b.j);
  });
  q.terms = std::move(off);
  q.offset = offset;
  q.ground_value = ising.ground_energy - offset;
  return q;
}

inline std::int64_t ising_energy(const IsingInstance& inst, std::span<const Spin> s) {
  if (s.size() != inst.n) throw std::invalid_argument("ising_energy: configuration length mismatch");
  std::int64_t e = 0;
  for (std::size_t i = 0; i < inst.n; ++i) {
    if (s[i] != 1 && s[i] != -1) throw std::invalid_argument("ising_energy: spins must be +1 or -1");
    e += inst.h[i] * s[i];
  }
  for (const auto& c : inst.couplings) e += c.value * s[c.i] * s[c.j];
  return e;
}

/// f_Q(x) without the offset.
inline std::int64_t qubo_value(const QuboInstance& inst, std::span<const Bit> x) {
  if (x.size() != inst.n) throw std::invalid_argument("qubo_value: configuration length mismatch");
  for (auto b : x) {
    if (b > 1) throw std::invalid_argument("qubo_value: bits must be 0 or 1");
  }
  std::int64_t v = 0;
  for (const auto& t : inst.terms) v += t.value * x[t.i] * x[t.j];
  return v;
}

inline std::int64_t qubo_energy(const QuboInstance& inst, std::span<const Bit> x) {
  return qubo_value(inst, x) + inst.offset;
}

inline std::vector<Spin> spins_from_bits(std::span<const Bit> x) {
  std::vector<Spin> s(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) s[i] = static_cast<Spin>(1 - 2 * static_cast<int>(x[i]));
  return s;
}

inline std::vector<Bit> bits_from_spins(std::span<const Spin> s) {
  std::vector<Bit> x(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) x[i] = s[i] < 0 ? 1 : 0;
  return x;
}

/// Native assignment mapped to spins, with each clause auxiliary set to its
/// gadget-minimizing value.
inline std::vector<Spin> extend_assignment(const XorsatInstance& inst, std::span<const Bit> x) {
  if (x.size() != inst.m) throw std::invalid_argument("extend_assignment: assignment length mismatch");
  std::vector<Spin> s(2 * inst.m);
  for (std::size_t i = 0; i < inst.m; ++i) s[i] = static_cast<Spin>(1 - 2 * static_cast<int>(x[i]));
  for (std::size_t c = 0; c < inst.clauses.size(); ++c) {
    const auto& cl = inst.clauses[c];
    const std::array<Spin, 3> triple{s[cl.vars[0]], s[cl.vars[1]], s[cl.vars[2]]};
    s[inst.m + c] = clause_gadget(cl.sign).best_aux(triple);
  }
  return s;
}

struct QuboRange {
  std::int64_t min = 0;
  std::int64_t max = 0;
};

/// Range over the stored nonzero entries of Q.
inline QuboRange qubo_range(const QuboInstance& q) {
  QuboRange r{0, 0};
  bool first = true;
  for (const auto& t : q.terms) {
    if (first) {
      r = {t.value, t.value};
      first = false;
    }
    r.min = std::min(r.min, t.value);
    r.max = std::max(r.max, t.value);
  }
  return r;
}

}  // namespace xorbench
