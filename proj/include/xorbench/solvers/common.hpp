#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "xorbench/core/rng.hpp"
#include "xorbench/instance/ising.hpp"

namespace xorbench {

/// One solver execution. steps is the first-passage step count in the
/// solver's native unit (PT steps, MC iterations, Euler steps, replica
/// steps); wall time is modelled as steps times a per-step cost measured
/// separately.
struct FirstPassageRecord {
  std::string solver_id;
  std::string instance_id;
  std::uint64_t seed = 0;
  std::string params_hash;
  std::optional<std::uint64_t> steps;
  std::uint64_t cutoff = 0;
  bool success = false;
  std::optional<double> per_step_cost_ns;
  std::vector<std::string> flags;

  friend bool operator==(const FirstPassageRecord&, const FirstPassageRecord&) = default;
};

/// Record plus what is needed to re-verify it.
struct SolveOutcome {
  FirstPassageRecord record;
  std::vector<Spin> spins;  // configuration at first passage (Ising solvers)
  std::vector<Bit> bits;    // assignment at first passage (native solver)
  std::uint64_t steps_executed = 0;
  double wall_ns = 0;  // measured; kept out of the record so records stay reproducible
};

inline double metropolis_flip_prob(double delta_e, double beta) {
  if (beta < 0) throw std::invalid_argument("metropolis_flip_prob: beta must be non-negative");
  if (delta_e <= 0) return 1.0;
  return std::exp(-beta * delta_e);
}

/// Replica-exchange acceptance with delta_beta = beta_a - beta_b and
/// delta_e = E_a - E_b.
inline double swap_accept_prob(double delta_beta, double delta_e) {
  const double x = delta_beta * delta_e;
  return x >= 0 ? 1.0 : std::exp(x);
}

/// Ising instance in compressed adjacency form.
class SpinModel {
 public:
  explicit SpinModel(const IsingInstance& inst)
      : n_(inst.n), h_(inst.h), ground_energy_(inst.ground_energy) {
    if (inst.h.size() != inst.n) throw std::invalid_argument("SpinModel: field length mismatch");
    std::vector<std::uint32_t> degree(n_, 0);
    for (const auto& c : inst.couplings) {
      if (c.i >= n_ || c.j >= n_ || c.i == c.j) throw std::invalid_argument("SpinModel: bad coupling index");
      ++degree[c.i];
      ++degree[c.j];
    }
    offsets_.assign(n_ + 1, 0);
    for (std::size_t i = 0; i < n_; ++i) offsets_[i + 1] = offsets_[i] + degree[i];
    neighbors_.resize(offsets_[n_]);
    values_.resize(offsets_[n_]);
    std::vector<std::uint32_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (const auto& c : inst.couplings) {
      neighbors_[fill[c.i]] = c.j;
      values_[fill[c.i]++] = c.value;
      neighbors_[fill[c.j]] = c.i;
      values_[fill[c.j]++] = c.value;
      max_abs_param_ = std::max(max_abs_param_, std::abs(c.value));
      coupling_values_.push_back(c.value);
    }
    for (std::size_t i = 0; i < n_; ++i) {
      max_abs_param_ = std::max(max_abs_param_, std::abs(h_[i]));
      std::int64_t f = std::abs(h_[i]);
      for (auto k = offsets_[i]; k < offsets_[i + 1]; ++k) f += std::abs(values_[k]);
      max_field_ = std::max(max_field_, f);
    }
  }

  std::size_t size() const noexcept { return n_; }
  std::int64_t ground_energy() const noexcept { return ground_energy_; }
  std::int64_t field(std::size_t i) const noexcept { return h_[i]; }
  std::span<const std::uint32_t> neighbors(std::size_t i) const noexcept {
    return {neighbors_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }
  std::span<const std::int64_t> couplings(std::size_t i) const noexcept {
    return {values_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }
  std::span<const std::int64_t> coupling_values() const noexcept { return coupling_values_; }
  /// Largest |h_i| or |J_ij|; inverse temperatures are given in units of 1/this.
  std::int64_t max_abs_param() const noexcept { return max_abs_param_; }
  /// Bound on |h_i + sum_j J_ij s_j| over all i and s.
  std::int64_t max_field() const noexcept { return max_field_; }

  std::int64_t energy(std::span<const Spin> s) const {
    if (s.size() != n_) throw std::invalid_argument("SpinModel::energy: length mismatch");
    std::int64_t e = 0;
    for (std::size_t i = 0; i < n_; ++i) {
      std::int64_t pair = 0;
      auto nb = neighbors(i);
      auto jv = couplings(i);
      for (std::size_t k = 0; k < nb.size(); ++k) {
        if (nb[k] > i) pair += jv[k] * s[nb[k]];
      }
      e += s[i] * (h_[i] + pair);
    }
    return e;
  }

 private:
  std::size_t n_;
  std::vector<std::int64_t> h_;
  std::int64_t ground_energy_;
  std::vector<std::uint32_t> offsets_;
  std::vector<std::uint32_t> neighbors_;
  std::vector<std::int64_t> values_;
  std::vector<std::int64_t> coupling_values_;
  std::int64_t max_abs_param_ = 0;
  std::int64_t max_field_ = 0;
};

/// Spin configuration with cached local fields phi_i = h_i + sum_j J_ij s_j
/// and energy. Flipping spin i changes the energy by -2 s_i phi_i.
class SpinState {
 public:
  SpinState(const SpinModel& model, std::vector<Spin> spins) : model_(&model), spins_(std::move(spins)) {
    if (spins_.size() != model.size()) throw std::invalid_argument("SpinState: length mismatch");
    recompute();
  }

  static SpinState random(const SpinModel& model, CounterRng& rng) {
    std::vector<Spin> s(model.size());
    for (auto& v : s) v = rng.bit() ? Spin{1} : Spin{-1};
    return SpinState(model, std::move(s));
  }

  std::size_t size() const noexcept { return spins_.size(); }
  std::span<const Spin> spins() const noexcept { return spins_; }
  std::span<const std::int64_t> fields() const noexcept { return fields_; }
  std::int64_t energy() const noexcept { return energy_; }
  std::int64_t delta(std::size_t i) const noexcept { return -2 * spins_[i] * fields_[i]; }

  void flip(std::size_t i) noexcept {
    energy_ += delta(i);
    spins_[i] = static_cast<Spin>(-spins_[i]);
    const auto twice = 2 * spins_[i];
    auto nb = model_->neighbors(i);
    auto jv = model_->couplings(i);
    for (std::size_t k = 0; k < nb.size(); ++k) fields_[nb[k]] += twice * jv[k];
  }

  void recompute() {
    const auto n = spins_.size();
    fields_.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      std::int64_t f = model_->field(i);
      auto nb = model_->neighbors(i);
      auto jv = model_->couplings(i);
      for (std::size_t k = 0; k < nb.size(); ++k) f += jv[k] * spins_[nb[k]];
      fields_[i] = f;
    }
    energy_ = model_->energy(spins_);
  }

  /// True if cached fields and energy equal a from-scratch recomputation.
  bool consistent() const {
    SpinState fresh(*model_, spins_);
    return fresh.fields_ == fields_ && fresh.energy_ == energy_;
  }

 private:
  const SpinModel* model_;
  std::vector<Spin> spins_;
  std::vector<std::int64_t> fields_;
  std::int64_t energy_ = 0;
};

/// n inverse temperatures spaced log-uniformly on [lo, hi].
inline std::vector<double> log_uniform_betas(double lo, double hi, std::size_t count) {
  if (count == 0) throw std::invalid_argument("log_uniform_betas: empty ladder");
  if (count == 1) return {hi};
  std::vector<double> b(count);
  const double ratio = std::log(hi / lo);
  for (std::size_t k = 0; k < count; ++k) {
    b[k] = lo * std::exp(ratio * static_cast<double>(k) / static_cast<double>(count - 1));
  }
  b.front() = lo;
  b.back() = hi;
  return b;
}

/// Best record of f_p independent runs on one instance: the minimum first
/// passage, successful if any run succeeded.
inline FirstPassageRecord best_of_replicas(std::span<const FirstPassageRecord> records) {
  if (records.empty()) throw std::invalid_argument("best_of_replicas: empty record set");
  const FirstPassageRecord* best = &records.front();
  for (const auto& r : records) {
    if (r.success && (!best->success || *r.steps < *best->steps)) best = &r;
  }
  return *best;
}

}  // namespace xorbench
