#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "xorbench/solvers/common.hpp"

namespace xorbench {

struct DauParams {
  std::size_t num_replicas = 26;
  std::uint64_t repex_interval = 2500;
  // Energy added to the acceptance threshold per consecutive all-rejected
  // step. nullopt selects the automatic rule: 1/100 of the largest |dE_j|
  // seen by that replica during its first repex_interval steps.
  std::optional<double> offset_increment;
  // Initial ladder, in units of 1 / max|h_i, J_ij|.
  double beta_min = 0.1;
  double beta_max = 20.0;
  bool adapt_temperatures = true;
  std::uint64_t max_steps = 1'000'000;

  void validate() const {
    if (num_replicas < 1) throw std::invalid_argument("DauParams: need at least 1 replica");
    if (repex_interval < 1) throw std::invalid_argument("DauParams: repex_interval must be >= 1");
    if (offset_increment && *offset_increment < 0) throw std::invalid_argument("DauParams: offset_increment must be >= 0");
    if (!(beta_min > 0 && beta_min <= beta_max) || (num_replicas > 1 && beta_min == beta_max)) {
      throw std::invalid_argument("DauParams: need 0 < beta_min < beta_max");
    }
  }
};

struct DauReplica {
  SpinState state;
  double offset = 0;
  double increment = 0;
  bool auto_increment = false;
  std::uint64_t auto_window = 0;  // steps over which the automatic increment is learned
  std::uint64_t steps = 0;
  std::int64_t max_abs_delta = 0;
};

/// One rejection-free iteration: every spin is independently marked with
/// probability min(1, exp(-beta (dE_j - offset))); one marked spin chosen
/// uniformly is flipped and the offset reset, otherwise the offset grows by
/// the increment. Returns whether a flip happened.
inline bool dau_step(DauReplica& rep, double beta, CounterRng& rng, std::vector<std::uint32_t>& marked) {
  auto& state = rep.state;
  const auto n = state.size();
  const bool learning = rep.auto_increment && rep.steps < rep.auto_window;
  marked.clear();
  for (std::size_t j = 0; j < n; ++j) {
    const auto d = state.delta(j);
    if (learning) rep.max_abs_delta = std::max(rep.max_abs_delta, d < 0 ? -d : d);
    const double x = static_cast<double>(d) - rep.offset;
    if (x <= 0 || rng.uniform() < std::exp(-beta * x)) marked.push_back(static_cast<std::uint32_t>(j));
  }
  if (learning) rep.increment = static_cast<double>(rep.max_abs_delta) / 100.0;
  ++rep.steps;
  if (marked.empty()) {
    rep.offset += rep.increment;
    return false;
  }
  state.flip(marked[rng.below(marked.size())]);
  rep.offset = 0;
  return true;
}

/// Ladder update toward equal exchange acceptance between neighbors. Each
/// spacing is scaled by 1 + damping (a_k - mean) / mean, then all spacings
/// are rescaled so both endpoints stay fixed. Equal acceptances are a fixed
/// point; the factor is at least 1 - damping, so the ladder stays strictly
/// increasing.
inline std::vector<double> adapt_temperatures(std::span<const double> betas, std::span<const double> acceptances,
                                              double damping = 0.5) {
  if (acceptances.size() + 1 != betas.size()) {
    throw std::invalid_argument("adapt_temperatures: need one acceptance per adjacent pair");
  }
  for (std::size_t k = 0; k + 1 < betas.size(); ++k) {
    if (!(betas[k] < betas[k + 1])) throw std::invalid_argument("adapt_temperatures: ladder must be strictly increasing");
  }
  std::vector<double> out(betas.begin(), betas.end());
  if (betas.size() < 3) return out;
  double mean = 0;
  for (double a : acceptances) mean += a;
  mean /= static_cast<double>(acceptances.size());
  if (!(mean > 0)) return out;

  std::vector<double> spacing(acceptances.size());
  double total = 0;
  for (std::size_t k = 0; k < spacing.size(); ++k) {
    spacing[k] = (betas[k + 1] - betas[k]) * (1.0 + damping * (acceptances[k] - mean) / mean);
    total += spacing[k];
  }
  const double span = betas.back() - betas.front();
  for (std::size_t k = 0; k + 1 < spacing.size(); ++k) out[k + 1] = out[k] + spacing[k] * span / total;
  out.back() = betas.back();
  return out;
}

/// Rejection-free replica-exchange annealer with energy offsets. Replica r
/// draws from stream r + 1; exchanges from stream 0.
class DigitalAnnealer {
 public:
  DigitalAnnealer(const SpinModel& model, const DauParams& params, std::uint64_t seed,
                  std::span<const Spin> initial = {})
      : params_(params), swap_rng_(seed, 0) {
    params.validate();
    const double scale = model.max_abs_param() > 0 ? static_cast<double>(model.max_abs_param()) : 1.0;
    betas_ = log_uniform_betas(params.beta_min / scale, params.beta_max / scale, params.num_replicas);
    for (std::size_t r = 0; r < params.num_replicas; ++r) {
      rngs_.emplace_back(seed, r + 1);
      auto state = initial.empty() ? SpinState::random(model, rngs_.back())
                                   : SpinState(model, std::vector<Spin>(initial.begin(), initial.end()));
      DauReplica rep{std::move(state)};
      rep.auto_increment = !params.offset_increment.has_value();
      rep.increment = params.offset_increment.value_or(0.0);
      rep.auto_window = params.repex_interval;
      replicas_.push_back(std::move(rep));
      at_temp_.push_back(r);
    }
    acceptance_.assign(betas_.size() > 1 ? betas_.size() - 1 : 0, 0.0);
  }

  const std::vector<double>& betas() const noexcept { return betas_; }
  const DauReplica& replica(std::size_t r) const noexcept { return replicas_[r]; }
  std::size_t num_replicas() const noexcept { return replicas_.size(); }

  /// One MC iteration for every replica.
  void step() {
    for (std::size_t t = 0; t < betas_.size(); ++t) {
      const auto r = at_temp_[t];
      dau_step(replicas_[r], betas_[t], rngs_[r], marked_);
    }
  }

  /// Ladder adaptation from the running exchange statistics, then one pass
  /// of neighbor exchanges.
  void exchange() {
    if (betas_.size() < 2) return;
    if (params_.adapt_temperatures && exchanges_ > 0) betas_ = adapt_temperatures(betas_, acceptance_);
    constexpr double kSmoothing = 0.2;
    for (std::size_t t = 0; t + 1 < betas_.size(); ++t) {
      auto& a = at_temp_[t];
      auto& b = at_temp_[t + 1];
      const double p = swap_accept_prob(betas_[t] - betas_[t + 1],
                                        static_cast<double>(replicas_[a].state.energy() - replicas_[b].state.energy()));
      acceptance_[t] = exchanges_ == 0 ? p : (1 - kSmoothing) * acceptance_[t] + kSmoothing * p;
      if (p >= 1.0 || swap_rng_.uniform() < p) std::swap(a, b);
    }
    ++exchanges_;
  }

  std::size_t best_replica() const noexcept {
    std::size_t best = 0;
    for (std::size_t r = 1; r < replicas_.size(); ++r) {
      if (replicas_[r].state.energy() < replicas_[best].state.energy()) best = r;
    }
    return best;
  }

 private:
  DauParams params_;
  std::vector<double> betas_;
  std::vector<DauReplica> replicas_;
  std::vector<CounterRng> rngs_;
  std::vector<std::size_t> at_temp_;
  std::vector<double> acceptance_;
  std::vector<std::uint32_t> marked_;
  std::uint64_t exchanges_ = 0;
  CounterRng swap_rng_;
};

/// First-passage run; ground check at initialization and after every MC
/// iteration, exchanges after every repex_interval iterations.
inline SolveOutcome dau_run(const SpinModel& model, const DauParams& params, std::uint64_t seed,
                            std::span<const Spin> initial = {}) {
  const auto start = std::chrono::steady_clock::now();
  DigitalAnnealer dau(model, params, seed, initial);
  SolveOutcome out;
  out.record.solver_id = "dau";
  out.record.seed = seed;
  out.record.cutoff = params.max_steps;
  for (std::uint64_t step = 0;; ++step) {
    if (step > 0) {
      dau.step();
      if (step % params.repex_interval == 0) dau.exchange();
    }
    const auto best = dau.best_replica();
    if (dau.replica(best).state.energy() == model.ground_energy()) {
      out.record.success = true;
      out.record.steps = step;
      const auto s = dau.replica(best).state.spins();
      out.spins.assign(s.begin(), s.end());
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

inline SolveOutcome dau_run(const IsingInstance& inst, const DauParams& params, std::uint64_t seed,
                            std::span<const Spin> initial = {}) {
  return dau_run(SpinModel(inst), params, seed, initial);
}

}  // namespace xorbench
