#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "xorbench/core/rng.hpp"
#include "xorbench/instance/gf2.hpp"
#include "xorbench/instance/io.hpp"
#include "xorbench/instance/ising.hpp"
#include "xorbench/instance/xorsat.hpp"

namespace xorbench {

inline constexpr std::int64_t kQuboEntryMin = -30;
inline constexpr std::int64_t kQuboEntryMax = 16;

struct GadgetCheck {
  int sign = 0;
  int min_energy = 0;
  int minima = 0;
  bool minima_are_satisfying_triples = false;
  int best_violating_energy = 0;  // min over aux among non-satisfying triples

  bool ok() const noexcept {
    return min_energy == kGadgetMinimum && minima == 4 && minima_are_satisfying_triples &&
           best_violating_energy >= kGadgetMinimum + 2;
  }
};

/// Enumerates all 16 (s1, s2, s3, aux) configurations of one clause gadget.
inline GadgetCheck check_gadget(int sign) {
  const auto g = clause_gadget(sign);
  GadgetCheck out;
  out.sign = sign;
  out.min_energy = std::numeric_limits<int>::max();
  out.best_violating_energy = std::numeric_limits<int>::max();
  const int required_product = sign == 0 ? 1 : -1;
  std::vector<std::array<Spin, 3>> minima;
  for (int bits = 0; bits < 16; ++bits) {
    const std::array<Spin, 3> s{static_cast<Spin>(bits & 1 ? -1 : 1), static_cast<Spin>(bits & 2 ? -1 : 1),
                                static_cast<Spin>(bits & 4 ? -1 : 1)};
    const Spin aux = bits & 8 ? -1 : 1;
    const int e = g.energy(s, aux);
    if (e < out.min_energy) {
      out.min_energy = e;
      minima.clear();
    }
    if (e == out.min_energy) minima.push_back(s);
    if (s[0] * s[1] * s[2] != required_product) out.best_violating_energy = std::min(out.best_violating_energy, e);
  }
  out.minima = static_cast<int>(minima.size());
  std::sort(minima.begin(), minima.end());
  const bool distinct = std::adjacent_find(minima.begin(), minima.end()) == minima.end();
  out.minima_are_satisfying_triples =
      distinct && std::all_of(minima.begin(), minima.end(), [&](const auto& s) {
        return s[0] * s[1] * s[2] == required_product;
      });
  return out;
}

/// Number of native assignments satisfying every clause, by enumeration.
inline std::size_t count_solutions_exhaustive(const XorsatInstance& inst, std::vector<Bit>* last = nullptr) {
  if (inst.m > 24) throw std::invalid_argument("count_solutions_exhaustive: m too large");
  std::size_t count = 0;
  std::vector<Bit> x(inst.m);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << inst.m); ++mask) {
    for (std::size_t i = 0; i < inst.m; ++i) x[i] = (mask >> i) & 1U;
    if (count_violated(inst, x) == 0) {
      ++count;
      if (last) *last = x;
    }
  }
  return count;
}

struct IsingMinimum {
  std::int64_t energy = 0;
  std::size_t degeneracy = 0;
};

/// Exhaustive minimum of an Ising instance (n <= 24).
inline IsingMinimum ising_minimum_exhaustive(const IsingInstance& inst) {
  if (inst.n > 24) throw std::invalid_argument("ising_minimum_exhaustive: n too large");
  IsingMinimum best{std::numeric_limits<std::int64_t>::max(), 0};
  std::vector<Spin> s(inst.n);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << inst.n); ++mask) {
    for (std::size_t i = 0; i < inst.n; ++i) s[i] = (mask >> i) & 1U ? -1 : 1;
    const auto e = ising_energy(inst, s);
    if (e < best.energy) best = {e, 0};
    if (e == best.energy) ++best.degeneracy;
  }
  return best;
}

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ValidationOptions {
  std::size_t random_configs = 1000;
  std::size_t exhaustive_max_m = 8;
  std::uint64_t seed = 0x5eed;
};

/// Runs every structural and energetic invariant against the stored content
/// of one bundle. Stored reduced forms are checked as stored, not regenerated.
inline std::vector<CheckResult> validate_bundle(const InstanceBundle& b, const ValidationOptions& opt = {}) {
  std::vector<CheckResult> out;
  const auto& x = b.xorsat;
  auto add = [&](std::string name, bool ok, std::string detail = {}) {
    out.push_back({std::move(name), ok, std::move(detail)});
  };

  {
    bool ok = x.clauses.size() == x.m && x.planted.size() == x.m;
    std::vector<int> degree(x.m, 0);
    for (const auto& c : x.clauses) {
      for (auto v : c.vars) {
        if (v >= x.m) ok = false;
        else ++degree[v];
      }
      if (c.vars[0] == c.vars[1] || c.vars[1] == c.vars[2] || c.vars[0] == c.vars[2]) ok = false;
    }
    ok = ok && std::all_of(degree.begin(), degree.end(), [](int d) { return d == 3; });
    add("regularity", ok);
    if (!ok) return out;  // later checks index by clause structure
  }

  {
    const auto sol = gf2_eliminate(x.matrix(), x.rhs());
    add("rank", sol.rank == x.m, "rank " + std::to_string(sol.rank) + " of " + std::to_string(x.m));
    add("planted_unique_solution", sol.solution.has_value() && *sol.solution == x.planted);
  }

  add("instance_id", compute_instance_id(x) == x.instance_id);

  add("gadget_minima", check_gadget(0).ok() && check_gadget(1).ok());

  {
    const auto expected = static_cast<std::int64_t>(kGadgetMinimum) * static_cast<std::int64_t>(x.m);
    bool ok = b.ising.ground_energy == expected && b.ising.n == 2 * x.m;
    std::string detail;
    if (ok) {
      const auto e = ising_energy(b.ising, extend_assignment(x, x.planted));
      ok = e == expected;
      detail = "planted energy " + std::to_string(e) + ", expected " + std::to_string(expected);
    }
    add("planted_energy", ok, detail);
  }

  {
    const auto ref = to_ising(x);
    add("ising_matches_clauses", ref.h == b.ising.h && ref.couplings == b.ising.couplings);
  }

  {
    const auto ref = ising_to_qubo(b.ising);
    bool ok = ref.terms == b.qubo.terms && ref.offset == b.qubo.offset && ref.ground_value == b.qubo.ground_value;
    CounterRng rng(opt.seed, 7);
    std::vector<Bit> bits(b.n());
    for (std::size_t k = 0; k < opt.random_configs && ok; ++k) {
      for (auto& v : bits) v = rng.bit() ? 1 : 0;
      ok = qubo_energy(b.qubo, bits) == ising_energy(b.ising, spins_from_bits(bits));
    }
    add("qubo_ising_equivalence", ok);
  }

  {
    const auto r = qubo_range(b.qubo);
    add("qubo_range", r.min >= kQuboEntryMin && r.max <= kQuboEntryMax,
        "[" + std::to_string(r.min) + ", " + std::to_string(r.max) + "]");
  }

  if (x.m <= opt.exhaustive_max_m) {
    std::vector<Bit> found;
    const auto count = count_solutions_exhaustive(x, &found);
    add("exhaustive_uniqueness", count == 1 && found == x.planted, std::to_string(count) + " solutions");
    const auto gs = ising_minimum_exhaustive(b.ising);
    add("exhaustive_ground_energy", gs.energy == b.ising.ground_energy,
        "minimum " + std::to_string(gs.energy));
  }
  return out;
}

}  // namespace xorbench
