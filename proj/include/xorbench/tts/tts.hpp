#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "xorbench/core/rng.hpp"
#include "xorbench/solvers/common.hpp"
#include "xorbench/tts/quantile.hpp"

namespace xorbench {

inline constexpr double kTargetProbability = 0.99;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct SuccessCounts {
  std::uint64_t runs = 0;
  std::uint64_t successes = 0;

  friend bool operator==(const SuccessCounts&, const SuccessCounts&) = default;
};

/// Jeffreys-prior posterior over the success probability.
struct SuccessPosterior {
  SuccessCounts counts;

  explicit SuccessPosterior(SuccessCounts c) : counts(c) {
    if (c.successes > c.runs) throw std::invalid_argument("successes exceed runs");
  }

  double alpha() const { return 0.5 + static_cast<double>(counts.successes); }
  double beta() const { return 0.5 + static_cast<double>(counts.runs - counts.successes); }
  double mean() const { return alpha() / (alpha() + beta()); }

  template <class Rng>
  double sample(Rng& rng) const {
    std::gamma_distribution<double> ga(alpha()), gb(beta());
    const double x = ga(rng), y = gb(rng);
    return x / (x + y);
  }
};

/// Runs with a first passage at or before t_f are successes; unsuccessful
/// runs whose cutoff is below t_f say nothing about t_f and are dropped.
inline SuccessCounts success_counts_at(std::span<const FirstPassageRecord> records, double t_f) {
  if (records.empty()) throw std::invalid_argument("success_counts_at: no records");
  if (!(t_f > 0)) throw std::invalid_argument("success_counts_at: t_f must be positive");
  SuccessCounts out;
  for (const auto& r : records) {
    if (r.success && r.steps && static_cast<double>(*r.steps) <= t_f) {
      ++out.runs;
      ++out.successes;
    } else if (static_cast<double>(r.cutoff) >= t_f) {
      ++out.runs;
    }
  }
  return out;
}

/// Expected repetitions to reach 99% success, ln(0.01)/ln(1-p).
inline double repetitions(double p) {
  if (!(p >= 0 && p <= 1)) throw std::invalid_argument("repetitions: p outside [0, 1]");
  if (p == 0) return kInf;
  if (p == 1) return 0;
  if (p == kTargetProbability) return 1;
  return std::log1p(-kTargetProbability) / std::log1p(-p);
}

/// Time to reach the target probability with runs of length t_f on f_p
/// parallel replicas. With clamp set at least one full run is charged.
inline double tts_point(double t_f, double p, double f_p, bool clamp = true) {
  if (!(t_f > 0)) throw std::invalid_argument("tts_point: t_f must be positive");
  if (!(f_p >= 1)) throw std::invalid_argument("tts_point: f_p must be at least 1");
  double r = repetitions(p);
  if (std::isinf(r)) return kInf;
  if (clamp && (r < 1 || p >= kTargetProbability)) r = 1;
  return t_f * r / f_p;
}

struct BootstrapResult {
  double mean = 0;
  double sigma = 0;
  bool infinite = false;  // some resampled quantile was +inf
};

/// Bayesian bootstrap of the q-quantile of TTS over instances. Resample r
/// draws instances and posterior probabilities from its own counter stream.
/// An instance never solved within t_f contributes +inf.
inline BootstrapResult bootstrap_tts(std::span<const SuccessCounts> counts, double t_f, double q, double f_p,
                                     std::size_t resamples, std::uint64_t seed) {
  if (counts.empty()) throw std::invalid_argument("bootstrap_tts: no instances");
  if (!(q > 0 && q < 1)) throw std::invalid_argument("bootstrap_tts: q must lie in (0, 1)");
  if (resamples == 0) throw std::invalid_argument("bootstrap_tts: resamples must be positive");
  std::vector<SuccessPosterior> post;
  post.reserve(counts.size());
  for (const auto& c : counts) post.emplace_back(c);

  std::vector<double> qs(resamples), tts(counts.size());
  BootstrapResult out;
  for (std::size_t r = 0; r < resamples; ++r) {
    CounterRng rng(seed, r);
    for (auto& v : tts) {
      const auto& pick = post[rng.below(post.size())];
      v = pick.counts.successes == 0 ? kInf : tts_point(t_f, pick.sample(rng), f_p);
    }
    std::sort(tts.begin(), tts.end());
    qs[r] = quantile_sorted(tts, q);
    if (std::isinf(qs[r])) out.infinite = true;
  }
  if (out.infinite) {
    out.mean = out.sigma = kInf;
    return out;
  }
  const auto ms = mean_sd(qs);
  out.mean = ms.mean;
  out.sigma = ms.sd;
  return out;
}

struct TtsGridPoint {
  double t_f = 0;
  double mean = 0;
  double sigma = 0;
};

struct OptTts {
  std::size_t index = 0;
  double t_f = 0;
  double tts = 0;
  double sigma = 0;
  bool boundary = false;
};

/// Minimum of the mean curve; ties go to the smaller t_f. The grid must be
/// strictly increasing with at least three finite points.
inline OptTts opt_tts(std::span<const TtsGridPoint> curve) {
  std::size_t finite = 0;
  for (std::size_t k = 0; k < curve.size(); ++k) {
    if (k > 0 && !(curve[k].t_f > curve[k - 1].t_f)) throw std::invalid_argument("opt_tts: grid not increasing");
    finite += std::isfinite(curve[k].mean);
  }
  if (finite == 0) throw std::domain_error("opt_tts: every grid point has infinite TTS");
  if (finite < 3) throw std::invalid_argument("opt_tts: fewer than three finite grid points");
  OptTts best;
  best.tts = kInf;
  for (std::size_t k = 0; k < curve.size(); ++k) {
    if (curve[k].mean < best.tts) best = {k, curve[k].t_f, curve[k].mean, curve[k].sigma, false};
  }
  best.boundary = best.index == 0 || best.index + 1 == curve.size();
  return best;
}

/// Per-group minimum of first-passage times, the "shortest time over f_p
/// replicas" estimator. Runs are grouped in consecutive blocks of f_p; a
/// group with no success yields +inf. A trailing partial group is dropped.
inline std::vector<double> min_replica_times(std::span<const FirstPassageRecord> records, std::size_t f_p) {
  if (f_p == 0) throw std::invalid_argument("min_replica_times: f_p must be positive");
  std::vector<double> out;
  for (std::size_t g = 0; g + f_p <= records.size(); g += f_p) {
    double best = kInf;
    for (std::size_t k = g; k < g + f_p; ++k) {
      if (records[k].success && records[k].steps) best = std::min(best, static_cast<double>(*records[k].steps));
    }
    out.push_back(best);
  }
  return out;
}

}  // namespace xorbench
