#pragma once

#include <chrono>
#include <cmath>
#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "xorbench/solvers/common.hpp"

namespace xorbench {

struct SbParams {
  double dt = 0.9;
  std::uint64_t num_steps = 1000;
  std::optional<double> coupling_scale;  // nullopt = automatic
  // Independent trajectories run back to back; first passage is counted in
  // cumulative Euler steps and the cutoff is loops * num_steps.
  std::uint64_t loops = 1;

  void validate() const {
    if (!(dt > 0)) throw std::invalid_argument("SbParams: dt must be positive");
    if (num_steps < 1) throw std::invalid_argument("SbParams: num_steps must be >= 1");
    if (loops < 1) throw std::invalid_argument("SbParams: loops must be >= 1");
    if (coupling_scale && !(*coupling_scale > 0)) throw std::invalid_argument("SbParams: coupling_scale must be positive");
  }
};

inline constexpr double kSbOverflow = 1e6;

/// Most negative eigenvalue of the coupling matrix, by power iteration on
/// R I - J where R bounds the spectral radius (largest row sum of |J|).
inline double min_coupling_eigenvalue(const SpinModel& model, int max_iterations = 5000) {
  const auto n = model.size();
  double bound = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0;
    for (auto v : model.couplings(i)) row += std::abs(static_cast<double>(v));
    bound = std::max(bound, row);
  }
  if (bound == 0) return 0;
  std::vector<double> v(n), w(n);
  CounterRng rng(0x51ab, 0);
  for (auto& x : v) x = 0.5 + rng.uniform();
  double previous = 0;
  for (int it = 0; it < max_iterations; ++it) {
    double norm = 0;
    for (auto x : v) norm += x * x;
    norm = std::sqrt(norm);
    for (auto& x : v) x /= norm;
    double rayleigh = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double jv = 0;
      auto nb = model.neighbors(i);
      auto vals = model.couplings(i);
      for (std::size_t k = 0; k < nb.size(); ++k) jv += static_cast<double>(vals[k]) * v[nb[k]];
      w[i] = bound * v[i] - jv;
      rayleigh += v[i] * w[i];
    }
    std::swap(v, w);
    if (it > 10 && std::abs(rayleigh - previous) <= 1e-12 * bound) {
      previous = rayleigh;
      break;
    }
    previous = rayleigh;
  }
  return bound - previous;
}

/// C = 1 / |lambda_min(J)|. For dense Gaussian couplings |lambda_min| is
/// about 2 sigma_J sqrt(n), which gives the familiar 0.5 / (sigma_J sqrt(n));
/// for sparse bounded-degree couplings the spectral form keeps the coupling
/// drive at the bifurcation threshold. Falls back to 1 / max|h| without
/// couplings.
inline double auto_coupling_scale(const SpinModel& model) {
  const double lmin = min_coupling_eigenvalue(model);
  if (lmin < 0) return 1.0 / -lmin;
  return model.max_abs_param() > 0 ? 1.0 / static_cast<double>(model.max_abs_param()) : 1.0;
}

/// Classical bifurcation dynamics with K = Delta = 1:
///   y_i += dt * ( -(x_i^2 - p + 1) x_i - C (h_i + sum_j J_ij x_j) )
///   x_i += dt * y_i
/// The coupling force is the negative gradient of the Ising energy, so the
/// readout sign(x) descends E = sum h s + sum J s s.
class SimulatedBifurcation {
 public:
  SimulatedBifurcation(const SpinModel& model, double dt, double coupling_scale)
      : model_(&model), dt_(dt), c_(coupling_scale), x_(model.size(), 0.0), y_(model.size(), 0.0),
        force_(model.size(), 0.0) {}

  void set_state(std::vector<double> x, std::vector<double> y) {
    if (x.size() != model_->size() || y.size() != model_->size()) {
      throw std::invalid_argument("SimulatedBifurcation: state length mismatch");
    }
    x_ = std::move(x);
    y_ = std::move(y);
  }

  void randomize(CounterRng& rng, double amplitude = 0.1) {
    for (auto& v : x_) v = amplitude * (2 * rng.uniform() - 1);
    for (auto& v : y_) v = amplitude * (2 * rng.uniform() - 1);
  }

  /// One symplectic Euler step at pump amplitude p: momenta from current
  /// positions, then positions from the new momenta.
  void step(double p) {
    const auto n = x_.size();
    for (std::size_t i = 0; i < n; ++i) {
      double f = static_cast<double>(model_->field(i));
      auto nb = model_->neighbors(i);
      auto jv = model_->couplings(i);
      for (std::size_t k = 0; k < nb.size(); ++k) f += static_cast<double>(jv[k]) * x_[nb[k]];
      force_[i] = -(x_[i] * x_[i] - p + 1.0) * x_[i] - c_ * f;
    }
    for (std::size_t i = 0; i < n; ++i) {
      y_[i] += dt_ * force_[i];
      x_[i] += dt_ * y_[i];
    }
  }

  const std::vector<double>& positions() const noexcept { return x_; }
  const std::vector<double>& momenta() const noexcept { return y_; }

  bool overflowed() const noexcept {
    for (double v : x_) {
      if (!(std::abs(v) <= kSbOverflow)) return true;
    }
    return false;
  }

  /// sign(x_i) with sign(0) = +1.
  void read_spins(std::vector<Spin>& out) const {
    out.resize(x_.size());
    for (std::size_t i = 0; i < x_.size(); ++i) out[i] = x_[i] < 0 ? Spin{-1} : Spin{1};
  }

 private:
  const SpinModel* model_;
  double dt_;
  double c_;
  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> force_;
};

/// Pump amplitude after Euler step k (0-based) of a num_steps schedule.
inline double sb_pump(std::uint64_t k, std::uint64_t num_steps) {
  return static_cast<double>(k + 1) / static_cast<double>(num_steps);
}

inline SolveOutcome sb_run(const SpinModel& model, const SbParams& params, std::uint64_t seed) {
  params.validate();
  const auto start = std::chrono::steady_clock::now();
  const double c = params.coupling_scale.value_or(auto_coupling_scale(model));
  SimulatedBifurcation sb(model, params.dt, c);
  CounterRng rng(seed, 1);
  SolveOutcome out;
  out.record.solver_id = "sb";
  out.record.seed = seed;
  out.record.cutoff = params.loops * params.num_steps;
  std::vector<Spin> spins;
  std::uint64_t executed = 0;
  for (std::uint64_t loop = 0; loop < params.loops && !out.record.success; ++loop) {
    sb.randomize(rng);
    for (std::uint64_t k = 0; k < params.num_steps; ++k) {
      sb.step(sb_pump(k, params.num_steps));
      ++executed;
      if (sb.overflowed()) {
        out.record.flags.push_back("overflow");
        loop = params.loops;
        break;
      }
      sb.read_spins(spins);
      if (model.energy(spins) == model.ground_energy()) {
        out.record.success = true;
        out.record.steps = executed;
        out.spins = spins;
        break;
      }
    }
  }
  out.steps_executed = executed;
  out.wall_ns = std::chrono::duration<double, std::nano>(std::chrono::steady_clock::now() - start).count();
  return out;
}

inline SolveOutcome sb_run(const IsingInstance& inst, const SbParams& params, std::uint64_t seed) {
  return sb_run(SpinModel(inst), params, seed);
}

}  // namespace xorbench
