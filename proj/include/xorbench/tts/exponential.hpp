#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "xorbench/solvers/common.hpp"

namespace xorbench {

/// Two-sided coverage of a +-2 sigma Gaussian interval.
inline const double kTwoSigmaCoverage = std::erf(2.0 / std::sqrt(2.0));

struct Passage {
  double time = 0;
  bool censored = false;  // time is the cutoff of an unsuccessful run
};

inline std::vector<Passage> passages_from(std::span<const FirstPassageRecord> records) {
  std::vector<Passage> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    if (r.success && r.steps) {
      out.push_back({static_cast<double>(*r.steps), false});
    } else {
      out.push_back({static_cast<double>(r.cutoff), true});
    }
  }
  return out;
}

struct ExponentialFit {
  double tau = 0;
  double ci_low = 0;
  double ci_high = 0;
  double ks = 0;  // sup distance between Kaplan-Meier survival and exp(-t/tau)
  std::size_t successes = 0;
  std::size_t censored = 0;
};

/// Censored maximum-likelihood fit of P[T > t] = exp(-t/tau).
inline ExponentialFit exponential_tau(std::span<const Passage> samples) {
  ExponentialFit fit;
  double total = 0;
  for (const auto& s : samples) {
    if (!(s.time >= 0)) throw std::invalid_argument("exponential_tau: negative time");
    total += s.time;
    (s.censored ? fit.censored : fit.successes) += 1;
  }
  if (fit.successes == 0) throw std::domain_error("exponential_tau: no successful runs");
  if (fit.successes < 10) throw std::invalid_argument("exponential_tau: fewer than ten successes");
  const double d = static_cast<double>(fit.successes);
  fit.tau = total / d;

  // 2 d tau_hat / tau ~ chi^2 with 2d degrees of freedom.
  const boost::math::chi_squared chi(2 * d);
  const double tail = (1 - kTwoSigmaCoverage) / 2;
  fit.ci_low = 2 * total / boost::math::quantile(chi, 1 - tail);
  fit.ci_high = 2 * total / boost::math::quantile(chi, tail);

  std::vector<Passage> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end(), [](const Passage& a, const Passage& b) {
    return a.time != b.time ? a.time < b.time : (!a.censored && b.censored);
  });
  double survival = 1;
  double at_risk = static_cast<double>(sorted.size());
  for (std::size_t k = 0; k < sorted.size();) {
    const double t = sorted[k].time;
    std::size_t events = 0, leaving = 0;
    for (; k < sorted.size() && sorted[k].time == t; ++k, ++leaving) events += !sorted[k].censored;
    if (events > 0) {
      const double model = std::exp(-t / fit.tau);
      fit.ks = std::max(fit.ks, std::abs(survival - model));
      survival *= 1 - static_cast<double>(events) / at_risk;
      fit.ks = std::max(fit.ks, std::abs(survival - model));
    }
    at_risk -= static_cast<double>(leaving);
  }
  return fit;
}

}  // namespace xorbench
