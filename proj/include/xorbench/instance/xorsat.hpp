#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "xorbench/core/error.hpp"
#include "xorbench/core/hash.hpp"
#include "xorbench/core/rng.hpp"
#include "xorbench/instance/gf2.hpp"

namespace xorbench {

using VarTriple = std::array<std::uint32_t, 3>;

/// Bipartite clause-variable incidence with every degree equal to 3.
struct ClauseGraph {
  std::size_t m = 0;
  std::vector<VarTriple> clauses;  // variables sorted ascending within a clause
  std::size_t attempts = 0;        // stub matchings drawn, including the accepted one
  std::size_t rejected = 0;        // matchings discarded for a repeated variable

  BitMatrix incidence() const {
    BitMatrix a(m, m);
    for (std::size_t c = 0; c < clauses.size(); ++c) {
      for (auto v : clauses[c]) a.set(c, v, true);
    }
    return a;
  }
};

/// Number of unordered clause pairs that share two or more variables. These
/// are allowed by the sampler and reported for auditability.
inline std::size_t count_shared_pairs(std::span<const VarTriple> clauses) {
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::size_t> seen;
  for (const auto& c : clauses) {
    ++seen[{c[0], c[1]}];
    ++seen[{c[0], c[2]}];
    ++seen[{c[1], c[2]}];
  }
  std::size_t shared = 0;
  for (const auto& [pair, count] : seen) shared += count * (count - 1) / 2;
  return shared;
}

inline constexpr std::size_t kDefaultAttemptCap = 10'000;

/// Configuration model: 3 stubs per variable matched uniformly against 3
/// slots per clause. A matching that puts one variable twice in a clause is
/// rejected and redrawn.
inline ClauseGraph sample_3regular(std::size_t m, CounterRng& rng,
                                   std::size_t attempt_cap = kDefaultAttemptCap) {
  if (m < 4) throw std::invalid_argument("sample_3regular: m must be at least 4");
  ClauseGraph g;
  g.m = m;
  std::vector<std::uint32_t> stubs(3 * m);
  for (std::size_t attempt = 0; attempt < attempt_cap; ++attempt) {
    for (std::size_t i = 0; i < 3 * m; ++i) stubs[i] = static_cast<std::uint32_t>(i / 3);
    shuffle(stubs.begin(), stubs.end(), rng);
    ++g.attempts;
    bool ok = true;
    for (std::size_t c = 0; c < m && ok; ++c) {
      const auto* s = &stubs[3 * c];
      ok = s[0] != s[1] && s[1] != s[2] && s[0] != s[2];
    }
    if (!ok) {
      ++g.rejected;
      continue;
    }
    g.clauses.resize(m);
    for (std::size_t c = 0; c < m; ++c) {
      VarTriple t{stubs[3 * c], stubs[3 * c + 1], stubs[3 * c + 2]};
      std::sort(t.begin(), t.end());
      g.clauses[c] = t;
    }
    return g;
  }
  throw GenerationError("sample_3regular: no simple matching within attempt cap");
}

inline ClauseGraph sample_3regular(std::size_t m, std::uint64_t seed,
                                   std::size_t attempt_cap = kDefaultAttemptCap) {
  CounterRng rng(seed);
  return sample_3regular(m, rng, attempt_cap);
}

struct Clause {
  VarTriple vars;
  std::uint8_t sign = 0;  // required parity x_a ^ x_b ^ x_c

  friend bool operator==(const Clause&, const Clause&) = default;
};

/// 3-regular 3-XORSAT instance with a planted unique solution. m variables,
/// m clauses; the reduced two-body problem has n = 2m spins.
struct XorsatInstance {
  std::size_t m = 0;
  std::vector<Clause> clauses;
  std::vector<std::uint8_t> planted;
  std::uint64_t seed = 0;
  std::string instance_id;
  std::size_t shared_pair_count = 0;

  std::size_t n() const noexcept { return 2 * m; }

  BitMatrix matrix() const {
    BitMatrix a(m, m);
    for (std::size_t c = 0; c < clauses.size(); ++c) {
      for (auto v : clauses[c].vars) a.set(c, v, true);
    }
    return a;
  }

  std::vector<std::uint8_t> rhs() const {
    std::vector<std::uint8_t> b(clauses.size());
    for (std::size_t c = 0; c < clauses.size(); ++c) b[c] = clauses[c].sign;
    return b;
  }
};

inline bool clause_satisfied(const Clause& c, std::span<const std::uint8_t> x) noexcept {
  return ((x[c.vars[0]] ^ x[c.vars[1]] ^ x[c.vars[2]]) & 1U) == c.sign;
}

inline std::size_t count_violated(const XorsatInstance& inst, std::span<const std::uint8_t> x) {
  if (x.size() != inst.m) throw std::invalid_argument("count_violated: assignment length mismatch");
  std::size_t v = 0;
  for (const auto& c : inst.clauses) v += clause_satisfied(c, x) ? 0 : 1;
  return v;
}

/// Stable content hash over (m, clauses, planted).
inline std::string compute_instance_id(const XorsatInstance& inst) {
  Fnv1a h;
  h.integer(static_cast<std::uint64_t>(inst.m));
  for (const auto& c : inst.clauses) {
    for (auto v : c.vars) h.integer(v);
    h.integer(c.sign);
  }
  for (auto bit : inst.planted) h.integer(bit);
  return to_hex(h.digest());
}

/// Samples graphs until the incidence matrix is full rank over GF(2), then
/// plants a uniform assignment and sets each clause parity from it.
inline XorsatInstance generate_instance(std::size_t m, std::uint64_t seed,
                                        std::size_t attempt_cap = kDefaultAttemptCap) {
  if (m < 4) throw std::invalid_argument("generate_instance: m must be at least 4");
  CounterRng rng(seed);
  const std::vector<std::uint8_t> zeros(m, 0);
  for (std::size_t attempt = 0; attempt < attempt_cap; ++attempt) {
    ClauseGraph g = sample_3regular(m, rng, attempt_cap);
    if (gf2_eliminate(g.incidence(), zeros).rank != m) continue;

    XorsatInstance inst;
    inst.m = m;
    inst.seed = seed;
    inst.planted.resize(m);
    for (auto& bit : inst.planted) bit = rng.bit() ? 1 : 0;
    inst.clauses.reserve(m);
    for (const auto& t : g.clauses) {
      const auto parity = static_cast<std::uint8_t>(
          (inst.planted[t[0]] ^ inst.planted[t[1]] ^ inst.planted[t[2]]) & 1U);
      inst.clauses.push_back({t, parity});
    }
    inst.shared_pair_count = count_shared_pairs(g.clauses);
    inst.instance_id = compute_instance_id(inst);
    return inst;
  }
  throw GenerationError("generate_instance: no full-rank system within attempt cap");
}

}  // namespace xorbench
