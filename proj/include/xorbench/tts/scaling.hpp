#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "xorbench/tts/exponential.hpp"

namespace xorbench {

struct ScalingPoint {
  double n = 0;
  double log10_tts = 0;
  double sigma = 0;  // standard error of log10_tts
};

enum class WindowMode { Auto, Manual };

struct WindowPolicy {
  WindowMode mode = WindowMode::Auto;
  double n_min = 0;  // manual bounds, inclusive
  double n_max = 0;

  static WindowPolicy automatic() { return {}; }
  static WindowPolicy manual(double lo, double hi) { return {WindowMode::Manual, lo, hi}; }
};

/// log10 TTS = alpha n + beta with 2 sigma half-widths.
struct ScalingFit {
  double alpha = 0;
  double beta = 0;
  double alpha_se = 0;
  double beta_se = 0;
  double alpha_2sigma = 0;
  double beta_2sigma = 0;
  double chi2 = 0;
  std::size_t dof = 0;
  std::vector<double> window;
};

struct LineFit {
  double alpha = 0;
  double beta = 0;
  double var_alpha = 0;  // from the supplied sigmas alone
  double var_beta = 0;
  double chi2 = 0;
};

/// Weighted least squares with weights 1/sigma^2, centred on the weighted
/// mean of n.
inline LineFit weighted_line(std::span<const ScalingPoint> pts) {
  if (pts.size() < 2) throw std::invalid_argument("weighted_line: need two points");
  double sw = 0, sx = 0, sy = 0;
  for (const auto& p : pts) {
    if (!(p.sigma > 0)) throw std::invalid_argument("weighted_line: sigma must be positive");
    if (!std::isfinite(p.log10_tts)) throw std::invalid_argument("weighted_line: non-finite value");
    const double w = 1 / (p.sigma * p.sigma);
    sw += w;
    sx += w * p.n;
    sy += w * p.log10_tts;
  }
  const double xbar = sx / sw, ybar = sy / sw;
  double sxx = 0, sxy = 0;
  for (const auto& p : pts) {
    const double w = 1 / (p.sigma * p.sigma);
    sxx += w * (p.n - xbar) * (p.n - xbar);
    sxy += w * (p.n - xbar) * (p.log10_tts - ybar);
  }
  if (!(sxx > 0)) throw std::invalid_argument("weighted_line: all sizes equal");
  LineFit f;
  f.alpha = sxy / sxx;
  f.beta = ybar - f.alpha * xbar;
  f.var_alpha = 1 / sxx;
  f.var_beta = 1 / sw + xbar * xbar / sxx;
  for (const auto& p : pts) {
    const double r = (p.log10_tts - f.alpha * p.n - f.beta) / p.sigma;
    f.chi2 += r * r;
  }
  return f;
}

/// Fit over a window of sizes. Parameter errors use the covariance rescaled
/// by chi2/dof; half-widths use the Student t quantile matching a Gaussian
/// 2 sigma coverage.
inline ScalingFit scaling_fit(std::vector<ScalingPoint> pts, WindowPolicy policy = {}) {
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.n < b.n; });
  for (std::size_t k = 1; k < pts.size(); ++k) {
    if (pts[k].n == pts[k - 1].n) throw std::invalid_argument("scaling_fit: duplicate size");
  }
  if (pts.size() < 3) throw std::invalid_argument("scaling_fit: fewer than three points");

  std::size_t lo = 0, hi = pts.size();  // half-open window
  if (policy.mode == WindowMode::Manual) {
    while (lo < pts.size() && pts[lo].n < policy.n_min) ++lo;
    while (hi > lo && pts[hi - 1].n > policy.n_max) --hi;
  } else {
    lo = (pts.size() - 1) / 2;
    hi = lo + 2;
    auto fit_of = [&](std::size_t a, std::size_t b) {
      return weighted_line(std::span<const ScalingPoint>(pts).subspan(a, b - a));
    };
    auto current = fit_of(lo, hi);
    bool down = lo > 0, up = hi < pts.size();
    while (down || up) {
      if (down) {
        const auto trial = fit_of(lo - 1, hi);
        if (std::abs(trial.alpha - current.alpha) > std::sqrt(current.var_alpha)) {
          down = false;
        } else {
          --lo;
          current = trial;
          down = lo > 0;
        }
      }
      if (up) {
        const auto trial = fit_of(lo, hi + 1);
        if (std::abs(trial.alpha - current.alpha) > std::sqrt(current.var_alpha)) {
          up = false;
        } else {
          ++hi;
          current = trial;
          up = hi < pts.size();
        }
      }
    }
  }
  if (hi < lo + 3) throw std::domain_error("scaling_fit: fewer than three points in window");

  const auto span = std::span<const ScalingPoint>(pts).subspan(lo, hi - lo);
  const auto line = weighted_line(span);
  ScalingFit out;
  out.alpha = line.alpha;
  out.beta = line.beta;
  out.chi2 = line.chi2;
  out.dof = span.size() - 2;
  const double scale = line.chi2 / static_cast<double>(out.dof);
  out.alpha_se = std::sqrt(line.var_alpha * scale);
  out.beta_se = std::sqrt(line.var_beta * scale);
  const boost::math::students_t t(static_cast<double>(out.dof));
  const double k = boost::math::quantile(t, 0.5 + kTwoSigmaCoverage / 2);
  out.alpha_2sigma = k * out.alpha_se;
  out.beta_2sigma = k * out.beta_se;
  for (const auto& p : span) out.window.push_back(p.n);
  return out;
}

}  // namespace xorbench
