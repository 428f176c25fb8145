// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria (capped at 1). Pass --long to add the n = 32..96
// parallel-tempering scaling run, --only K to run a single criterion.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <set>
#include <string>

#include <unistd.h>

#include "xorbench/bench/analyze.hpp"
#include "xorbench/bench/gen.hpp"
#include "xorbench/bench/solve.hpp"
#include "xorbench/instance/validate.hpp"
#include "xorbench/tts/exponential.hpp"
#include "xorbench/tts/scaling.hpp"
#include "xorbench/tts/tts.hpp"

using namespace xorbench;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Outcome gadget() {
  std::string detail;
  bool pass = true;
  for (int sign : {0, 1}) {
    const auto g = clause_gadget(sign);
    int best = 1 << 20;
    std::set<std::array<int, 3>> at_min;
    for (int bits = 0; bits < 16; ++bits) {
      const std::array<Spin, 3> s{Spin(bits & 1 ? -1 : 1), Spin(bits & 2 ? -1 : 1), Spin(bits & 4 ? -1 : 1)};
      const int e = g.energy(s, Spin(bits & 8 ? -1 : 1));
      if (e < best) {
        best = e;
        at_min.clear();
      }
      if (e == best) at_min.insert({s[0], s[1], s[2]});
    }
    // Satisfying triples from the bit form x1 + x2 + x3 = sign (mod 2).
    std::set<std::array<int, 3>> satisfying;
    for (int x = 0; x < 8; ++x) {
      if (((x & 1) ^ ((x >> 1) & 1) ^ ((x >> 2) & 1)) == sign) {
        satisfying.insert({1 - 2 * (x & 1), 1 - 2 * ((x >> 1) & 1), 1 - 2 * ((x >> 2) & 1)});
      }
    }
    int minima = 0;
    for (int bits = 0; bits < 16; ++bits) {
      const std::array<Spin, 3> s{Spin(bits & 1 ? -1 : 1), Spin(bits & 2 ? -1 : 1), Spin(bits & 4 ? -1 : 1)};
      minima += g.energy(s, Spin(bits & 8 ? -1 : 1)) == best;
    }
    const bool ok = best == -4 && minima == 4 && at_min == satisfying;
    pass = pass && ok;
    detail += fmt("sign %d: min %d, %d minima%s; ", sign, best, minima, at_min == satisfying ? " = satisfying triples" : "");
  }
  return {pass, detail};
}

Outcome planted_validity() {
  std::size_t bad = 0, total = 0;
  std::string first_failure;
  for (std::size_t n : {16, 32, 64, 128}) {
    for (std::size_t k = 0; k < 100; ++k) {
      const auto b = make_bundle(generate_instance(n / 2, instance_seed(2024, n, k)));
      ValidationOptions opt;
      opt.random_configs = 1000;
      opt.exhaustive_max_m = 8;
      opt.seed = k;
      const auto checks = validate_bundle(b, opt);
      bool ok = std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
      // Independent restatement of the headline numbers.
      std::vector<int> var_degree(b.xorsat.m, 0);
      for (const auto& c : b.xorsat.clauses) {
        for (auto v : c.vars) ++var_degree[v];
      }
      ok = ok && std::all_of(var_degree.begin(), var_degree.end(), [](int d) { return d == 3; });
      ok = ok && gf2_eliminate(b.xorsat.matrix(), b.xorsat.rhs()).rank == n / 2;
      ok = ok && ising_energy(b.ising, extend_assignment(b.xorsat, b.xorsat.planted)) == -2 * std::int64_t(n);
      const bool exhaustive = std::any_of(checks.begin(), checks.end(), [](const auto& c) { return c.name == "exhaustive_uniqueness"; });
      ok = ok && (exhaustive == (n <= 16));
      ++total;
      if (!ok) {
        ++bad;
        if (first_failure.empty()) first_failure = " first failure at n=" + std::to_string(n);
      }
    }
  }
  return {bad == 0, fmt("%zu/%zu instances valid (n = 16, 32, 64, 128; exhaustive uniqueness for n = 16)", total - bad, total) + first_failure};
}

Outcome qubo_range_check() {
  std::int64_t lo = 0, hi = 0;
  for (std::size_t k = 0; k < 100; ++k) {
    const auto b = make_bundle(generate_instance(32, instance_seed(77, 64, k)));
    const auto r = qubo_range(b.qubo);
    lo = std::min(lo, r.min);
    hi = std::max(hi, r.max);
  }
  return {lo >= -30 && hi <= 16, fmt("100 instances at n=64, Q entries in [%lld, %lld]", (long long)lo, (long long)hi)};
}

Outcome tts_numerics() {
  const double v = tts_point(1, 0.5, 1);
  const double expect = std::log(0.01) / std::log(0.5);
  bool ok = std::abs(v - expect) <= 1e-9 * expect && std::abs(v - 6.643856) < 1e-6;
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> up(0.02, 0.98), ut(1, 1e6);
  std::uniform_int_distribution<int> uf(1, 16);
  double worst = 0;
  int checked = 0;
  while (checked < 10'000) {
    const double p = up(gen), t = ut(gen);
    const int f = uf(gen);
    const double miss = std::pow(1 - p, f);
    if (miss < 1e-3) continue;
    const double a = tts_point(t, p, f, false), b = tts_point(t, 1 - miss, 1, false);
    worst = std::max(worst, std::abs(a - b) / a);
    ++checked;
  }
  bool clamp = true;
  for (double p : {0.99, 0.995, 0.999999, 1.0}) clamp = clamp && tts_point(3, p, 1) == 3.0 && tts_point(3, p, 2) == 1.5;
  ok = ok && worst <= 1e-12 && clamp;
  return {ok, fmt("tts(1, 0.5, 1) = %.9f; replica identity worst rel err %.2e over 1e4 triples; clamp %s", v, worst,
                  clamp ? "holds" : "broken")};
}

double beta25_median() {
  auto pdf = [](double p) { return 30 * p * std::pow(1 - p, 4); };
  auto cdf = [&](double x) {
    const int n = 4000;
    const double h = x / n;
    double s = pdf(0) + pdf(x);
    for (int k = 1; k < n; ++k) s += (k % 2 ? 4 : 2) * pdf(k * h);
    return s * h / 3;
  };
  double lo = 0, hi = 1;
  for (int it = 0; it < 60; ++it) ((cdf((lo + hi) / 2) < 0.5) ? lo : hi) = (lo + hi) / 2;
  return (lo + hi) / 2;
}

Outcome bootstrap_correctness() {
  const double truth = tts_point(1, beta25_median(), 1);
  std::mt19937_64 gen(99);
  std::gamma_distribution<double> g2(2), g5(5);
  int inside = 0;
  double worst = 0;
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<SuccessCounts> counts;
    for (int i = 0; i < 100; ++i) {
      const double x = g2(gen), y = g5(gen);
      std::binomial_distribution<std::uint64_t> bin(1000, x / (x + y));
      counts.push_back({1000, bin(gen)});
    }
    const auto r = bootstrap_tts(counts, 1, 0.5, 1, 1000, 1000 + rep);
    const double z = std::abs(r.mean - truth) / r.sigma;
    worst = std::max(worst, z);
    inside += z <= 3;
  }
  bool posterior = SuccessPosterior({0, 0}).mean() == 0.5;
  for (std::uint64_t n = 1; n <= 50; ++n) {
    for (std::uint64_t s = 0; s <= n; ++s) posterior = posterior && SuccessPosterior({n, s}).mean() == (s + 0.5) / (n + 1.0);
  }
  return {inside == 100 && posterior,
          fmt("true median TTS %.4f; %d/100 repetitions within 3 sigma (max |z| %.2f); posterior mean %s", truth, inside,
              worst, posterior ? "exact" : "wrong")};
}

Outcome fit_recovery() {
  std::vector<ScalingPoint> pts;
  for (double n = 32; n <= 96; n += 8) pts.push_back({n, 0.02 * n - 3, 0.05});
  const auto f = scaling_fit(pts);
  const bool exact = std::abs(f.alpha - 0.02) <= 1e-10 && std::abs(f.beta + 3) <= 1e-10;
  std::mt19937_64 gen(7);
  std::normal_distribution<double> noise(0, 0.05);
  int covered = 0;
  for (int t = 0; t < 1000; ++t) {
    std::vector<ScalingPoint> noisy;
    for (double n = 32; n <= 96; n += 8) noisy.push_back({n, 0.0248 * n + 0.5 + noise(gen), 0.05});
    const auto g = scaling_fit(noisy, WindowPolicy::manual(32, 96));
    covered += std::abs(g.alpha - 0.0248) <= g.alpha_2sigma;
  }
  return {exact && covered >= 900, fmt("noiseless alpha err %.1e, beta err %.1e; 2-sigma coverage %d/1000", std::abs(f.alpha - 0.02),
                                       std::abs(f.beta + 3), covered)};
}

struct SolverTally {
  std::size_t runs = 0, successes = 0, verified = 0;
};

Outcome solver_correctness(bool& monotone_out, std::string& monotone_detail) {
  std::map<std::string, SolverTally> tally;
  const std::vector<std::pair<std::string, nlohmann::json>> solvers{
      {"pt", {{"max_steps", 10000}}},
      {"dau", {{"max_steps", 1000000}}},
      {"sb", {{"dt", 0.5}, {"num_steps", 2000}, {"loops", 500}}},
      {"qg", {{"max_steps", 100000}}},
  };
  for (std::size_t n : {16, 32}) {
    for (std::size_t k = 0; k < 2; ++k) {
      const auto b = make_bundle(generate_instance(n / 2, instance_seed(31, n, k)));
      for (const auto& [id, params] : solvers) {
        const auto spec = make_solver_spec(id, params);
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
          const auto out = run_solver(spec, b, cell_seed(31, b.id(), spec, seed));
          auto& t = tally[id];
          ++t.runs;
          if (!out.record.success) continue;
          ++t.successes;
          // Independent full evaluation of the reported configuration.
          const auto spins = id == "qg" ? extend_assignment(b.xorsat, out.bits) : out.spins;
          t.verified += ising_energy(b.ising, spins) == b.ising.ground_energy;
        }
      }
    }
  }
  bool pass = true;
  std::string detail;
  for (const auto& [id, _] : solvers) {
    const auto& t = tally[id];
    const double rate = double(t.successes) / double(t.runs);
    pass = pass && rate >= 0.99 && t.verified == t.successes;
    detail += fmt("%s %zu/%zu (verified %zu); ", id.c_str(), t.successes, t.runs, t.verified);
  }

  // Median optTTS of PT in PT steps, f_p = 1.
  std::vector<double> medians;
  monotone_detail.clear();
  PtParams p;
  p.max_steps = 20000;
  const auto spec = make_solver_spec("pt", to_json(p));
  for (std::size_t n : {24, 32, 40, 48, 56}) {
    std::vector<LogEntry> entries;
    for (std::size_t k = 0; k < 16; ++k) {
      const auto b = make_bundle(generate_instance(n / 2, instance_seed(5, n, k)));
      const SpinModel model(b.ising);
      for (std::uint64_t r = 0; r < 25; ++r) {
        auto rec = pt_run(model, p, cell_seed(5, b.id(), spec, r)).record;
        rec.instance_id = b.id();
        rec.params_hash = spec.params_hash();
        entries.push_back({rec, n, r});
      }
    }
    AnalyzeOptions opt;
    opt.grid = "log:1:20000:40";
    opt.resamples = 1000;
    opt.seed = n;
    const auto a = analyze_entries(entries, opt);
    const auto& o = a["curves"][0]["opt"];
    const double v = o.is_null() ? kInf : o["tts"].get<double>();
    medians.push_back(v);
    monotone_detail += fmt("n=%zu %.1f; ", n, v);
  }
  monotone_out = std::is_sorted(medians.begin(), medians.end(), std::less_equal<>{}) &&
                 std::adjacent_find(medians.begin(), medians.end(), std::greater_equal<>{}) == medians.end() &&
                 std::isfinite(medians.back());
  return {pass, detail};
}

Outcome exponential_estimator() {
  std::mt19937_64 gen(8);
  std::exponential_distribution<double> ex(1 / 5.0);
  std::vector<Passage> full(10'000), censored(10'000);
  for (auto& s : full) s = {ex(gen), false};
  const double cut = 5 * std::log(2.0);
  for (auto& s : censored) {
    const double t = ex(gen);
    s = t <= cut ? Passage{t, false} : Passage{cut, true};
  }
  const auto a = exponential_tau(full), b = exponential_tau(censored);
  const bool ok = std::abs(a.tau - 5) <= 0.25 && std::abs(b.tau - 5) <= 0.5;
  return {ok, fmt("tau_true 5: uncensored %.4f [%.3f, %.3f], %zu%% censored %.4f [%.3f, %.3f]", a.tau, a.ci_low, a.ci_high,
                  b.censored / 100, b.tau, b.ci_low, b.ci_high)};
}

std::multiset<std::string> all_log_lines(const fs::path& run) {
  std::multiset<std::string> lines;
  for (const auto& f : log_files(run / "logs")) {
    std::ifstream in(f);
    for (std::string l; std::getline(in, l);) lines.insert(l);
  }
  return lines;
}

Outcome determinism_and_resume() {
  const auto root = fs::temp_directory_path() / ("xorbench_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(root);
  std::string detail;
  bool ok = true;

  generate_ensemble(root / "a", {16, 24}, 5, 3);
  generate_ensemble(root / "b", {16, 24}, 5, 3);
  bool same = true;
  for (const auto& e : read_manifest(root / "a")) same = same && read_file(root / "a" / e.file) == read_file(root / "b" / e.file);
  same = same && read_file(root / "a" / kManifestName) == read_file(root / "b" / kManifestName);
  ok = ok && same;
  detail += same ? "instances byte-identical; " : "instances differ; ";

  Plan plan;
  plan.instances = root / "a";
  plan.sizes = {16, 24};
  plan.instances_per_size = 5;
  plan.master_seed = 11;
  plan.solvers = {{make_solver_spec("pt", {{"max_steps", 1000}}), 4},
                  {make_solver_spec("qg"), 4},
                  {make_solver_spec("dau", {{"max_steps", 100000}, {"repex_interval", 200}}), 2},
                  {make_solver_spec("sb", {{"dt", 0.5}, {"loops", 20}}), 2}};
  std::map<std::string, std::multiset<std::string>> logs;
  for (std::size_t workers : {1, 4}) {
    plan.out = root / ("w" + std::to_string(workers));
    SolveOptions o;
    o.workers = workers;
    run_plan(plan, o);
    logs["w" + std::to_string(workers)] = all_log_lines(plan.out);
  }
  plan.out = root / "again";
  run_plan(plan, SolveOptions{1, false, std::nullopt});
  logs["again"] = all_log_lines(plan.out);
  const bool logs_same = logs["w1"] == logs["w4"] && logs["w1"] == logs["again"];
  ok = ok && logs_same;
  detail += fmt("%zu log lines %s across reruns and 1 vs 4 workers; ", logs["w1"].size(), logs_same ? "identical" : "DIFFER");

  plan.out = root / "resume";
  run_plan(plan, SolveOptions{2, false, 37});
  const auto partial = all_log_lines(plan.out).size();
  run_plan(plan, SolveOptions{3, true, std::nullopt});
  const auto resumed = all_log_lines(plan.out);
  const bool resume_ok = partial == 37 && resumed == logs["w1"] && read_ledger(plan.out).size() == resumed.size();
  ok = ok && resume_ok;
  detail += fmt("interrupted at %zu of %zu cells, resumed to %zu lines %s", partial, logs["w1"].size(), resumed.size(),
                resume_ok ? "with no duplicates" : "INCORRECTLY");
  fs::remove_all(root);
  return {ok, detail};
}

void long_scaling() {
  std::printf("[INFO] long run: PT median optTTS over n = 32..96 (reference alpha 0.0248)\n");
  PtParams p;
  p.max_steps = 200000;
  const auto spec = make_solver_spec("pt", to_json(p));
  std::vector<LogEntry> entries;
  for (std::size_t n = 32; n <= 96; n += 8) {
    const auto t0 = std::chrono::steady_clock::now();
    for (std::size_t k = 0; k < 20; ++k) {
      const auto b = make_bundle(generate_instance(n / 2, instance_seed(6, n, k)));
      const SpinModel model(b.ising);
      for (std::uint64_t r = 0; r < 20; ++r) {
        auto rec = pt_run(model, p, cell_seed(6, b.id(), spec, r)).record;
        rec.instance_id = b.id();
        rec.params_hash = spec.params_hash();
        entries.push_back({rec, n, r});
      }
    }
    std::printf("[INFO]   n=%zu done in %.0f s\n", n, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    std::fflush(stdout);
  }
  AnalyzeOptions opt;
  opt.grid = "log:1:200000:50";
  opt.window = WindowPolicy::manual(32, 96);
  opt.include_boundary = true;
  const auto a = analyze_entries(entries, opt);
  const auto& f = a["fits"][0];
  if (f["error"].is_null()) {
    std::printf("[INFO] alpha = %.4f +- %.4f (2 sigma), beta = %.3f, in log10 PT steps per spin\n", f["alpha"].get<double>(),
                f["alpha_2sigma"].get<double>(), f["beta"].get<double>());
  } else {
    std::printf("[INFO] fit failed: %s\n", f["error"].get<std::string>().c_str());
  }
}

}  // namespace

int main(int argc, char** argv) {
  bool long_run = false;
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (!std::strcmp(argv[i], "--long")) long_run = true;
    else if (!std::strcmp(argv[i], "--only") && i + 1 < argc) only = std::atoi(argv[++i]);
  }
  int failures = 0;
  auto report = [&](int id, const char* name, const std::function<Outcome()>& fn) {
    if (only && only != id) return;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] %d %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), sec);
    std::fflush(stdout);
    failures += !o.pass;
  };
  report(1, "gadget correctness", gadget);
  report(2, "planted-instance validity", planted_validity);
  report(3, "QUBO coefficient range", qubo_range_check);
  report(4, "TTS numerics", tts_numerics);
  report(5, "bootstrap correctness", bootstrap_correctness);
  report(6, "scaling-fit recovery", fit_recovery);
  report(7, "solver correctness at desk scale", [] {
    bool monotone = false;
    std::string mono;
    auto o = solver_correctness(monotone, mono);
    o.detail += "PT median optTTS (steps) " + mono + (monotone ? "strictly increasing" : "NOT strictly increasing");
    o.pass = o.pass && monotone;
    return o;
  });
  report(8, "exponential TTS estimator", exponential_estimator);
  report(9, "determinism and resume", determinism_and_resume);
  if (long_run) long_scaling();
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
