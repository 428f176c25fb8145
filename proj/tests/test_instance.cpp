#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>

#include "xorbench/instance/gf2.hpp"
#include "xorbench/instance/io.hpp"
#include "xorbench/instance/ising.hpp"
#include "xorbench/instance/validate.hpp"
#include "xorbench/instance/xorsat.hpp"

using namespace xorbench;

namespace {

// Dense reference evaluator, independent of the sparse coupling list order.
std::int64_t naive_ising_energy(const IsingInstance& inst, const std::vector<Spin>& s) {
  std::vector<std::vector<std::int64_t>> dense(inst.n, std::vector<std::int64_t>(inst.n, 0));
  for (const auto& c : inst.couplings) dense[c.i][c.j] += c.value;
  std::int64_t e = 0;
  for (std::size_t i = 0; i < inst.n; ++i) {
    e += inst.h[i] * s[i];
    for (std::size_t j = i + 1; j < inst.n; ++j) e += dense[i][j] * s[i] * s[j];
  }
  return e;
}

}  // namespace

TEST(Sample3Regular, DegreesAndDistinctMembers) {
  for (std::size_t m : {4u, 5u, 17u, 64u}) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto g = sample_3regular(m, seed);
      ASSERT_EQ(g.clauses.size(), m);
      std::vector<int> degree(m, 0);
      for (const auto& c : g.clauses) {
        EXPECT_LT(c[0], c[1]);
        EXPECT_LT(c[1], c[2]);
        for (auto v : c) ++degree[v];
      }
      for (int d : degree) EXPECT_EQ(d, 3);
    }
  }
}

TEST(Sample3Regular, DeterministicUnderSeed) {
  const auto a = sample_3regular(64, 1);
  const auto b = sample_3regular(64, 1);
  EXPECT_EQ(a.clauses, b.clauses);
  EXPECT_NE(a.clauses, sample_3regular(64, 2).clauses);
}

TEST(Sample3Regular, RejectionsAreCounted) {
  std::size_t attempts = 0, rejected = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto g = sample_3regular(64, seed);
    attempts += g.attempts;
    rejected += g.rejected;
    EXPECT_EQ(g.attempts, g.rejected + 1);
  }
  EXPECT_GT(rejected, 0u);
  // Expected number of repeated pairs in the bipartite configuration model is
  // (d1-1)(d2-1)/2 = 2, so roughly e^-2 of matchings survive.
  const double acceptance = 100.0 / static_cast<double>(attempts);
  EXPECT_GT(acceptance, 0.06);
  EXPECT_LT(acceptance, 0.30);
}

TEST(Sample3Regular, RejectsTinySizesAndHonorsCap) {
  EXPECT_THROW(sample_3regular(3, 1), std::invalid_argument);
  EXPECT_THROW(sample_3regular(64, 1, 0), GenerationError);
}

TEST(Gf2Eliminate, IdentitySystem) {
  const std::vector<std::uint8_t> b{1, 0, 1, 1};
  const auto r = gf2_eliminate(BitMatrix::identity(4), b);
  EXPECT_EQ(r.rank, 4u);
  ASSERT_TRUE(r.solution);
  EXPECT_EQ(*r.solution, b);
}

TEST(Gf2Eliminate, DuplicateRowsAreSingular) {
  BitMatrix a(4, 4);
  for (std::size_t c : {0u, 1u, 3u}) {
    a.set(0, c, true);
    a.set(1, c, true);
  }
  a.set(2, 2, true);
  a.set(3, 0, true);
  const auto r = gf2_eliminate(a, std::vector<std::uint8_t>{0, 0, 0, 0});
  EXPECT_TRUE(r.singular());
  EXPECT_LE(r.rank, 3u);
}

TEST(Gf2Eliminate, DimensionMismatch) {
  EXPECT_THROW(gf2_eliminate(BitMatrix(3, 4), std::vector<std::uint8_t>(3)), std::invalid_argument);
  EXPECT_THROW(gf2_eliminate(BitMatrix::identity(3), std::vector<std::uint8_t>(2)), std::invalid_argument);
}

TEST(Gf2Eliminate, PlantThenSolveRoundTrip) {
  CounterRng rng(99);
  for (std::size_t m : {8u, 70u, 130u}) {
    for (int trial = 0; trial < 40; ++trial) {
      const auto g = sample_3regular(m, 7 + trial);
      const auto a = g.incidence();
      std::vector<std::uint8_t> x(m);
      for (auto& v : x) v = rng.bit();
      const auto r = gf2_eliminate(a, a.multiply(x));
      if (r.rank == m) {
        ASSERT_TRUE(r.solution);
        EXPECT_EQ(*r.solution, x);
      } else {
        EXPECT_TRUE(r.singular());
      }
    }
  }
}

TEST(Gf2Eliminate, RankMatchesBruteForceNullspace) {
  // rank = m - log2 |{x : A x = 0}| for small m.
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto g = sample_3regular(10, seed);
    const auto a = g.incidence();
    std::size_t kernel = 0;
    std::vector<std::uint8_t> x(10);
    for (std::uint32_t mask = 0; mask < 1024; ++mask) {
      for (int i = 0; i < 10; ++i) x[i] = (mask >> i) & 1U;
      const auto y = a.multiply(x);
      kernel += std::all_of(y.begin(), y.end(), [](auto v) { return v == 0; }) ? 1 : 0;
    }
    std::size_t log2k = 0;
    while ((std::size_t{1} << log2k) < kernel) ++log2k;
    EXPECT_EQ(gf2_eliminate(a, std::vector<std::uint8_t>(10, 0)).rank, 10 - log2k);
  }
}

TEST(GenerateInstance, RoundTripSmall) {
  const auto inst = generate_instance(4, 3);
  const auto r = gf2_eliminate(inst.matrix(), inst.rhs());
  ASSERT_TRUE(r.solution);
  EXPECT_EQ(*r.solution, inst.planted);
}

TEST(GenerateInstance, AlwaysFullRank) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto inst = generate_instance(32, seed);
    EXPECT_EQ(gf2_eliminate(inst.matrix(), inst.rhs()).rank, 32u);
    EXPECT_EQ(count_violated(inst, inst.planted), 0u);
  }
}

TEST(GenerateInstance, ExhaustiveUniqueness) {
  for (std::size_t m : {4u, 6u, 8u, 10u}) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto inst = generate_instance(m, seed);
      std::vector<Bit> found;
      EXPECT_EQ(count_solutions_exhaustive(inst, &found), 1u);
      EXPECT_EQ(found, inst.planted);
    }
  }
}

TEST(GenerateInstance, PlantIsNotTrivial) {
  std::size_t ones = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto inst = generate_instance(64, seed);
    ones += std::count(inst.planted.begin(), inst.planted.end(), 1);
  }
  EXPECT_GT(ones, 20 * 64 / 4);
  EXPECT_LT(ones, 20 * 64 * 3 / 4);
}

TEST(GenerateInstance, IdIsStableContentHash) {
  const auto a = generate_instance(16, 11);
  const auto b = generate_instance(16, 11);
  EXPECT_EQ(a.instance_id, b.instance_id);
  EXPECT_EQ(a.instance_id.size(), 16u);
  EXPECT_EQ(a.instance_id, compute_instance_id(a));
  auto c = a;
  c.clauses[0].sign ^= 1;
  EXPECT_NE(compute_instance_id(c), a.instance_id);
}

TEST(ClauseGadget, ListedConfigurations) {
  const auto g = clause_gadget(0);
  EXPECT_EQ(g.energy(std::array<Spin, 3>{1, 1, 1}, -1), -4);
  EXPECT_EQ(g.energy(std::array<Spin, 3>{1, -1, -1}, 1), -4);
  const std::array<Spin, 3> violating{1, 1, -1};
  EXPECT_EQ(std::min(g.energy(violating, 1), g.energy(violating, -1)), -2);
}

TEST(ClauseGadget, ExhaustiveBothSigns) {
  for (int sign : {0, 1}) {
    const auto c = check_gadget(sign);
    EXPECT_EQ(c.min_energy, -4);
    EXPECT_EQ(c.minima, 4);
    EXPECT_TRUE(c.minima_are_satisfying_triples);
    EXPECT_GE(c.best_violating_energy, -2);
  }
  EXPECT_THROW(clause_gadget(2), std::invalid_argument);
}

TEST(ToIsing, SmallInstanceGroundState) {
  const auto inst = generate_instance(8, 5);
  const auto ising = to_ising(inst);
  EXPECT_EQ(ising.n, 16u);
  EXPECT_EQ(ising.ground_energy, -32);
  const auto gs = ising_minimum_exhaustive(ising);
  EXPECT_EQ(gs.energy, -32);
  EXPECT_EQ(gs.degeneracy, 1u);
  EXPECT_EQ(ising_energy(ising, extend_assignment(inst, inst.planted)), -32);
}

TEST(ToIsing, FieldsAndCouplingsBounded) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto inst = generate_instance(40, seed);
    const auto ising = to_ising(inst);
    for (std::size_t i = 0; i < inst.m; ++i) EXPECT_LE(std::abs(ising.h[i]), 3);
    for (std::size_t c = 0; c < inst.m; ++c) EXPECT_EQ(ising.h[ising.aux_map[c]], -2);
    for (const auto& c : ising.couplings) {
      EXPECT_LT(c.i, c.j);
      EXPECT_NE(c.value, 0);
    }
    EXPECT_EQ(ising_energy(ising, extend_assignment(inst, inst.planted)), ising.ground_energy);
  }
}

TEST(IsingToQubo, SingleCouplingIdentity) {
  IsingInstance ising;
  ising.n = 2;
  ising.h = {0, 0};
  ising.couplings = {{0, 1, 1}};
  const auto q = ising_to_qubo(ising);
  const std::vector<QuboTerm> expected{{0, 0, -2}, {0, 1, 4}, {1, 1, -2}};
  EXPECT_EQ(q.terms, expected);
  EXPECT_EQ(q.offset, 1);
}

TEST(IsingToQubo, EnergiesAgreeOnRandomConfigs) {
  const auto inst = generate_instance(16, 2);
  const auto ising = to_ising(inst);
  const auto qubo = ising_to_qubo(ising);
  CounterRng rng(4);
  std::vector<Bit> x(ising.n);
  for (int k = 0; k < 1000; ++k) {
    for (auto& b : x) b = rng.bit();
    ASSERT_EQ(qubo_energy(qubo, x), ising_energy(ising, spins_from_bits(x)));
  }
  EXPECT_EQ(qubo_value(qubo, bits_from_spins(extend_assignment(inst, inst.planted))), qubo.ground_value);
}

TEST(IsingToQubo, ExhaustiveEquivalenceSmall) {
  const auto inst = generate_instance(6, 9);
  const auto ising = to_ising(inst);
  const auto qubo = ising_to_qubo(ising);
  std::vector<Bit> x(ising.n);
  for (std::uint32_t mask = 0; mask < (1u << ising.n); ++mask) {
    for (std::size_t i = 0; i < ising.n; ++i) x[i] = (mask >> i) & 1U;
    ASSERT_EQ(qubo_energy(qubo, x), ising_energy(ising, spins_from_bits(x)));
  }
}

TEST(IsingToQubo, EnsembleRange) {
  std::int64_t lo = 0, hi = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto r = qubo_range(ising_to_qubo(to_ising(generate_instance(32, seed))));
    lo = std::min(lo, r.min);
    hi = std::max(hi, r.max);
  }
  EXPECT_GE(lo, kQuboEntryMin);
  EXPECT_LE(hi, kQuboEntryMax);
}

TEST(Energy, EmptyAndDomainChecks) {
  const auto inst = generate_instance(6, 1);
  const auto ising = to_ising(inst);
  const auto qubo = ising_to_qubo(ising);
  const std::vector<Bit> zeros(ising.n, 0);
  EXPECT_EQ(qubo_value(qubo, zeros), 0);
  EXPECT_EQ(qubo_energy(qubo, zeros), qubo.offset);

  std::vector<Spin> bad(ising.n, 1);
  bad[3] = 0;
  EXPECT_THROW(ising_energy(ising, bad), std::invalid_argument);
  EXPECT_THROW(ising_energy(ising, std::vector<Spin>(ising.n - 1, 1)), std::invalid_argument);
  std::vector<Bit> badbits(ising.n, 0);
  badbits[0] = 2;
  EXPECT_THROW(qubo_value(qubo, badbits), std::invalid_argument);
}

TEST(Energy, MatchesNaiveEvaluator) {
  const auto ising = to_ising(generate_instance(6, 8));
  CounterRng rng(1);
  std::vector<Spin> s(ising.n);
  for (int k = 0; k < 200; ++k) {
    for (auto& v : s) v = rng.bit() ? 1 : -1;
    EXPECT_EQ(ising_energy(ising, s), naive_ising_energy(ising, s));
  }
}

TEST(Energy, SingleFlipDeltaMatchesLocalField) {
  const auto ising = to_ising(generate_instance(20, 3));
  std::vector<std::vector<std::pair<std::uint32_t, std::int64_t>>> adj(ising.n);
  for (const auto& c : ising.couplings) {
    adj[c.i].push_back({c.j, c.value});
    adj[c.j].push_back({c.i, c.value});
  }
  CounterRng rng(2);
  std::vector<Spin> s(ising.n);
  for (auto& v : s) v = rng.bit() ? 1 : -1;
  for (int k = 0; k < 500; ++k) {
    const auto i = rng.below(ising.n);
    std::int64_t field = ising.h[i];
    for (auto [j, v] : adj[i]) field += v * s[j];
    const auto before = ising_energy(ising, s);
    s[i] = static_cast<Spin>(-s[i]);
    EXPECT_EQ(ising_energy(ising, s) - before, -2 * (-s[i]) * field);
  }
}

TEST(InstanceIo, SerializationIsByteStableAndRoundTrips) {
  const auto bundle = make_bundle(generate_instance(12, 21));
  const auto text = serialize_instance(bundle);
  EXPECT_EQ(text, serialize_instance(make_bundle(generate_instance(12, 21))));
  const auto back = parse_instance(text);
  EXPECT_EQ(serialize_instance(back), text);
  EXPECT_EQ(back.xorsat.clauses, bundle.xorsat.clauses);
  EXPECT_EQ(back.ising.couplings, bundle.ising.couplings);
}

TEST(InstanceIo, MalformedInputIsDataError) {
  EXPECT_THROW(parse_instance("{"), DataError);
  EXPECT_THROW(parse_instance("{\"format_version\": 1}"), DataError);
  auto j = to_json(make_bundle(generate_instance(6, 1)));
  j["clauses"][0][3] = 5;
  EXPECT_THROW(bundle_from_json(j), DataError);
}

TEST(Validate, FreshInstancePassesAndCorruptionIsDetected) {
  auto bundle = make_bundle(generate_instance(8, 4));
  for (const auto& c : validate_bundle(bundle)) EXPECT_TRUE(c.passed) << c.name << " " << c.detail;

  bundle.ising.couplings[0].value += 1;
  std::map<std::string, bool> result;
  for (const auto& c : validate_bundle(bundle)) result[c.name] = c.passed;
  EXPECT_FALSE(result["planted_energy"]);
  EXPECT_FALSE(result["ising_matches_clauses"]);
  EXPECT_TRUE(result["regularity"]);
  EXPECT_TRUE(result["rank"]);
}
