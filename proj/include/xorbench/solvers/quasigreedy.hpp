#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "xorbench/core/rng.hpp"
#include "xorbench/instance/xorsat.hpp"
#include "xorbench/solvers/common.hpp"

namespace xorbench {

struct QgParams {
  // Flip probability given k = 0..3 violated clauses among the variable's 3.
  std::array<double, 4> flip_prob{0.0, 0.25, 1.0, 1.0};
  std::size_t num_replicas = 1;
  std::uint64_t max_steps = 100'000;  // per replica

  void validate() const {
    if (flip_prob[0] != 0.0) throw std::invalid_argument("QgParams: flip_prob[0] must be 0");
    for (double p : flip_prob) {
      if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("QgParams: flip probabilities must lie in [0, 1]");
    }
    if (num_replicas < 1) throw std::invalid_argument("QgParams: need at least 1 replica");
  }
};

/// Local search on the native XOR form. Each step picks a variable uniformly
/// and flips it with probability flip_prob[k], k its violated clause count.
/// A replica halts as soon as no clause is violated.
class QuasiGreedyWalker {
 public:
  QuasiGreedyWalker(const XorsatInstance& inst, std::vector<Bit> assignment)
      : inst_(&inst), x_(std::move(assignment)), var_clauses_(inst.m), violated_(inst.clauses.size(), 0) {
    if (x_.size() != inst.m) throw std::invalid_argument("QuasiGreedyWalker: assignment length mismatch");
    std::vector<std::size_t> fill(inst.m, 0);
    for (std::size_t c = 0; c < inst.clauses.size(); ++c) {
      for (auto v : inst.clauses[c].vars) {
        if (fill[v] >= 3) throw std::invalid_argument("QuasiGreedyWalker: variable degree exceeds 3");
        var_clauses_[v][fill[v]++] = static_cast<std::uint32_t>(c);
      }
    }
    for (std::size_t c = 0; c < inst.clauses.size(); ++c) {
      violated_[c] = clause_satisfied(inst.clauses[c], x_) ? 0 : 1;
      total_ += violated_[c];
    }
  }

  std::size_t violated() const noexcept { return total_; }
  const std::vector<Bit>& assignment() const noexcept { return x_; }

  int violated_incident(std::size_t v) const noexcept {
    const auto& cs = var_clauses_[v];
    return violated_[cs[0]] + violated_[cs[1]] + violated_[cs[2]];
  }

  /// Flipping toggles the state of all 3 incident clauses.
  void flip(std::size_t v) noexcept {
    x_[v] ^= 1U;
    for (auto c : var_clauses_[v]) {
      total_ -= violated_[c];
      violated_[c] ^= 1U;
      total_ += violated_[c];
    }
  }

  bool step(const QgParams& params, CounterRng& rng) {
    const auto v = rng.below(inst_->m);
    const int k = violated_incident(v);
    const double p = params.flip_prob[static_cast<std::size_t>(k)];
    if (p <= 0.0) return false;
    if (p >= 1.0 || rng.uniform() < p) {
      flip(v);
      return true;
    }
    return false;
  }

  bool consistent() const { return total_ == count_violated(*inst_, x_); }

 private:
  const XorsatInstance* inst_;
  std::vector<Bit> x_;
  std::vector<std::array<std::uint32_t, 3>> var_clauses_;
  std::vector<std::uint8_t> violated_;
  std::size_t total_ = 0;
};

/// Replica r starts from its own uniform assignment (stream r + 1). The run's
/// first passage is the earliest halting step over replicas; replicas are
/// simulated one after another, each only as long as it could still improve
/// on the best halting step found so far.
inline SolveOutcome quasigreedy_run(const XorsatInstance& inst, const QgParams& params, std::uint64_t seed,
                                    std::span<const Bit> initial = {}) {
  params.validate();
  const auto start = std::chrono::steady_clock::now();
  SolveOutcome out;
  out.record.solver_id = "qg";
  out.record.seed = seed;
  out.record.cutoff = params.max_steps;
  std::uint64_t executed = 0;
  for (std::size_t r = 0; r < params.num_replicas; ++r) {
    CounterRng rng(seed, r + 1);
    std::vector<Bit> x(inst.m);
    if (initial.empty()) {
      for (auto& b : x) b = rng.bit() ? 1 : 0;
    } else {
      x.assign(initial.begin(), initial.end());
    }
    QuasiGreedyWalker walker(inst, std::move(x));
    if (out.record.success && *out.record.steps == 0) break;
    const std::uint64_t limit = out.record.success ? *out.record.steps - 1 : params.max_steps;
    std::uint64_t step = 0;
    while (walker.violated() != 0 && step < limit) {
      walker.step(params, rng);
      ++step;
    }
    executed += step;
    if (walker.violated() == 0) {
      out.record.success = true;
      out.record.steps = step;
      out.bits = walker.assignment();
    }
  }
  out.steps_executed = executed;
  out.wall_ns = std::chrono::duration<double, std::nano>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace xorbench
