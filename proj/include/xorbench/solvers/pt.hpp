#pragma once

#include <chrono>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "xorbench/solvers/common.hpp"

namespace xorbench {

struct PtParams {
  std::size_t num_replicas = 32;
  // In units of 1 / max|h_i, J_ij| of the instance.
  double beta_min = 0.1;
  double beta_max = 20.0;
  std::size_t sweeps_per_swap = 10;
  std::uint64_t max_steps = 10'000;

  void validate() const {
    if (num_replicas < 2) throw std::invalid_argument("PtParams: need at least 2 replicas");
    if (!(beta_min > 0 && beta_min < beta_max)) throw std::invalid_argument("PtParams: need 0 < beta_min < beta_max");
    if (sweeps_per_swap < 1) throw std::invalid_argument("PtParams: sweeps_per_swap must be >= 1");
  }
};

/// Replica-exchange Monte Carlo on a fixed inverse-temperature ladder.
/// Replica r draws from stream r + 1; exchanges draw from stream 0.
class ParallelTempering {
 public:
  ParallelTempering(const SpinModel& model, std::vector<double> betas, std::uint64_t seed,
                    std::span<const Spin> initial = {})
      : model_(&model), betas_(std::move(betas)), swap_rng_(seed, 0) {
    if (betas_.empty()) throw std::invalid_argument("ParallelTempering: empty ladder");
    const auto max_delta = static_cast<std::size_t>(2 * model.max_field());
    for (std::size_t r = 0; r < betas_.size(); ++r) {
      rngs_.emplace_back(seed, r + 1);
      if (initial.empty()) {
        replicas_.push_back(SpinState::random(model, rngs_.back()));
      } else {
        replicas_.emplace_back(model, std::vector<Spin>(initial.begin(), initial.end()));
      }
      at_temp_.push_back(r);
      // Flip acceptance is a function of the (integer) positive energy
      // increase only, so tabulate it per temperature.
      std::vector<double> table(max_delta + 1);
      for (std::size_t d = 0; d <= max_delta; ++d) table[d] = metropolis_flip_prob(static_cast<double>(d), betas_[r]);
      accept_.push_back(std::move(table));
    }
  }

  std::size_t num_replicas() const noexcept { return replicas_.size(); }
  const std::vector<double>& betas() const noexcept { return betas_; }
  /// Replica currently at temperature slot t.
  const SpinState& at_temperature(std::size_t t) const noexcept { return replicas_[at_temp_[t]]; }
  const SpinState& replica(std::size_t r) const noexcept { return replicas_[r]; }

  /// One Metropolis sweep over all spins, in index order, of the replica at
  /// temperature slot t.
  void sweep(std::size_t t) {
    const auto r = at_temp_[t];
    auto& state = replicas_[r];
    auto& rng = rngs_[r];
    const auto& table = accept_[t];
    for (std::size_t i = 0; i < state.size(); ++i) {
      const auto d = state.delta(i);
      if (d <= 0 || rng.uniform() < table[static_cast<std::size_t>(d)]) state.flip(i);
    }
  }

  /// Neighbor-pair exchange proposals from the coldest-adjacent pair upward
  /// in ladder order. Returns the number of accepted exchanges.
  std::size_t swap_pass() {
    std::size_t accepted = 0;
    for (std::size_t t = 0; t + 1 < betas_.size(); ++t) {
      auto& a = at_temp_[t];
      auto& b = at_temp_[t + 1];
      const double p = swap_accept_prob(betas_[t] - betas_[t + 1],
                                        static_cast<double>(replicas_[a].energy() - replicas_[b].energy()));
      if (p >= 1.0 || swap_rng_.uniform() < p) {
        std::swap(a, b);
        ++accepted;
      }
    }
    return accepted;
  }

  void step(std::size_t sweeps) {
    for (std::size_t t = 0; t < betas_.size(); ++t) {
      for (std::size_t k = 0; k < sweeps; ++k) sweep(t);
    }
    swap_pass();
  }

  /// Index of a replica at the lowest energy.
  std::size_t best_replica() const noexcept {
    std::size_t best = 0;
    for (std::size_t r = 1; r < replicas_.size(); ++r) {
      if (replicas_[r].energy() < replicas_[best].energy()) best = r;
    }
    return best;
  }

 private:
  const SpinModel* model_;
  std::vector<double> betas_;
  std::vector<SpinState> replicas_;
  std::vector<CounterRng> rngs_;
  std::vector<std::size_t> at_temp_;
  std::vector<std::vector<double>> accept_;
  CounterRng swap_rng_;
};

inline std::vector<double> pt_ladder(const SpinModel& model, const PtParams& params) {
  const double scale = model.max_abs_param() > 0 ? static_cast<double>(model.max_abs_param()) : 1.0;
  return log_uniform_betas(params.beta_min / scale, params.beta_max / scale, params.num_replicas);
}

/// First-passage PT run. The ground check happens at initialization (step 0)
/// and after every PT step of sweeps_per_swap sweeps plus one exchange pass.
inline SolveOutcome pt_run(const SpinModel& model, const PtParams& params, std::uint64_t seed,
                           std::span<const Spin> initial = {}) {
  params.validate();
  const auto start = std::chrono::steady_clock::now();
  ParallelTempering pt(model, pt_ladder(model, params), seed, initial);
  SolveOutcome out;
  out.record.solver_id = "pt";
  out.record.seed = seed;
  out.record.cutoff = params.max_steps;
  for (std::uint64_t step = 0;; ++step) {
    if (step > 0) pt.step(params.sweeps_per_swap);
    const auto best = pt.best_replica();
    if (pt.replica(best).energy() == model.ground_energy()) {
      out.record.success = true;
      out.record.steps = step;
      out.spins.assign(pt.replica(best).spins().begin(), pt.replica(best).spins().end());
      out.steps_executed = step;
      break;
    }
    if (step == params.max_steps) {
      out.steps_executed = step;
      break;
    }
  }
  out.wall_ns = std::chrono::duration<double, std::nano>(std::chrono::steady_clock::now() - start).count();
  return out;
}

inline SolveOutcome pt_run(const IsingInstance& inst, const PtParams& params, std::uint64_t seed,
                           std::span<const Spin> initial = {}) {
  return pt_run(SpinModel(inst), params, seed, initial);
}

}  // namespace xorbench
