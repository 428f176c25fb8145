#pragma once

#include <charconv>
#include <cmath>
#include <filesystem>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "xorbench/bench/solve.hpp"
#include "xorbench/tts/scaling.hpp"
#include "xorbench/tts/tts.hpp"

namespace xorbench {

/// Parses "log:lo:hi:count", "lin:lo:hi:count" or a comma-separated list.
inline std::vector<double> parse_grid(const std::string& spec) {
  auto number = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw std::invalid_argument("grid: bad number '" + s + "'");
    }
  };
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  std::vector<double> grid;
  if (spec.rfind("log:", 0) == 0 || spec.rfind("lin:", 0) == 0) {
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 4) throw std::invalid_argument("grid: expected kind:lo:hi:count");
    const double lo = number(parts[1]), hi = number(parts[2]);
    const auto count = static_cast<std::size_t>(number(parts[3]));
    if (!(lo > 0 && hi > lo) || count < 2) throw std::invalid_argument("grid: need 0 < lo < hi and count >= 2");
    for (std::size_t k = 0; k < count; ++k) {
      const double f = static_cast<double>(k) / static_cast<double>(count - 1);
      grid.push_back(parts[0] == "log" ? lo * std::pow(hi / lo, f) : lo + f * (hi - lo));
    }
  } else {
    for (std::string p; std::getline(ss, p, ',');) grid.push_back(number(p));
  }
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (!(grid[k] > 0) || (k > 0 && !(grid[k] > grid[k - 1]))) {
      throw std::invalid_argument("grid: values must be positive and strictly increasing");
    }
  }
  if (grid.empty()) throw std::invalid_argument("grid: empty");
  return grid;
}

/// Replica factor as a function of size: "K" or "N/n" meaning floor(N/n),
/// at least 1.
inline double parse_fp(const std::string& expr, std::size_t n) {
  const auto slash = expr.find('/');
  auto integer = [&](const std::string& s) {
    std::uint64_t v = 0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc{} || r.ptr != s.data() + s.size() || v == 0) {
      throw std::invalid_argument("fp: expected a positive integer or N/n, got '" + expr + "'");
    }
    return v;
  };
  if (slash == std::string::npos) return static_cast<double>(integer(expr));
  if (expr.substr(slash + 1) != "n") throw std::invalid_argument("fp: expected N/n, got '" + expr + "'");
  return static_cast<double>(std::max<std::uint64_t>(1, integer(expr.substr(0, slash)) / n));
}

struct AnalyzeOptions {
  std::vector<double> quantiles{0.5};
  std::string fp = "1";
  std::string grid = "auto";  // auto: log-uniform from 1 to the largest cutoff
  std::size_t grid_points = 20;
  std::size_t resamples = 1000;
  std::uint64_t seed = 0;
  WindowPolicy window;
  bool include_boundary = false;  // admit BOUNDARY optima into scaling fits
};

namespace detail {

inline nlohmann::json finite_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

}  // namespace detail

struct GroupKey {
  std::string solver_id;
  std::string params_hash;
  std::size_t n = 0;

  auto operator<=>(const GroupKey&) const = default;
};

/// Groups entries by (solver, params, size) and instance.
inline std::map<GroupKey, std::map<std::string, std::vector<FirstPassageRecord>>> group_entries(
    const std::vector<LogEntry>& entries) {
  std::map<GroupKey, std::map<std::string, std::vector<FirstPassageRecord>>> out;
  for (const auto& e : entries) {
    out[{e.record.solver_id, e.record.params_hash, e.n}][e.record.instance_id].push_back(e.record);
  }
  return out;
}

/// TTS curves per (solver, params, size, quantile) and scaling fits per
/// (solver, params, quantile).
inline nlohmann::json analyze_entries(const std::vector<LogEntry>& entries, const AnalyzeOptions& opt) {
  using nlohmann::json;
  for (double q : opt.quantiles) {
    if (!(q > 0 && q < 1)) throw std::invalid_argument("quantiles must lie in (0, 1)");
  }
  json out;
  out["format_version"] = 1;
  out["settings"] = {{"quantiles", opt.quantiles}, {"fp", opt.fp},
                     {"grid", opt.grid},           {"resamples", opt.resamples},
                     {"seed", opt.seed},           {"include_boundary", opt.include_boundary},
                     {"window", opt.window.mode == WindowMode::Auto
                                    ? json("auto")
                                    : json::array({opt.window.n_min, opt.window.n_max})},
                     {"censoring", "failed runs with cutoff below t_f are excluded at t_f"}};
  out["curves"] = json::array();
  out["fits"] = json::array();

  const auto groups = group_entries(entries);
  std::map<std::tuple<std::string, std::string, double>, std::vector<ScalingPoint>> fit_points;
  std::map<std::tuple<std::string, std::string, double>, std::vector<double>> excluded;

  for (const auto& [key, by_instance] : groups) {
    std::uint64_t max_cutoff = 1;
    std::size_t runs = 0;
    for (const auto& [_, recs] : by_instance) {
      runs += recs.size();
      for (const auto& r : recs) max_cutoff = std::max(max_cutoff, r.cutoff);
    }
    const auto grid = opt.grid == "auto"
                          ? parse_grid("log:1:" + std::to_string(std::max<std::uint64_t>(2, max_cutoff)) + ":" +
                                       std::to_string(opt.grid_points))
                          : parse_grid(opt.grid);
    const double fp = parse_fp(opt.fp, key.n);

    for (double q : opt.quantiles) {
      json curve{{"solver_id", key.solver_id}, {"params_hash", key.params_hash}, {"size", key.n},
                 {"quantile", q},              {"f_p", fp},                      {"instances", by_instance.size()},
                 {"runs", runs}};
      json flags = json::array();
      std::vector<TtsGridPoint> points;
      for (std::size_t g = 0; g < grid.size(); ++g) {
        std::vector<SuccessCounts> counts;
        for (const auto& [_, recs] : by_instance) {
          const auto c = success_counts_at(recs, grid[g]);
          if (c.runs > 0) counts.push_back(c);
        }
        TtsGridPoint p{grid[g], kInf, kInf};
        if (!counts.empty()) {
          const auto seed = Fnv1a{}
                                .integer(opt.seed)
                                .str(key.solver_id)
                                .str(key.params_hash)
                                .integer(std::uint64_t{key.n})
                                .integer(static_cast<std::uint64_t>(std::llround(q * 1e6)))
                                .integer(std::uint64_t{g})
                                .digest();
          const auto b = bootstrap_tts(counts, grid[g], q, fp, opt.resamples, seed);
          p.mean = b.mean;
          p.sigma = b.sigma;
        }
        points.push_back(p);
      }
      json grid_json = json::array();
      for (const auto& p : points) {
        grid_json.push_back({{"t_f", p.t_f}, {"tts_mean", detail::finite_or_null(p.mean)},
                             {"tts_sigma", detail::finite_or_null(p.sigma)}});
      }
      curve["grid"] = grid_json;
      curve["opt"] = nullptr;
      try {
        const auto o = opt_tts(points);
        curve["opt"] = {{"t_f", o.t_f}, {"tts", o.tts}, {"sigma", o.sigma}, {"boundary_flag", o.boundary}};
        const std::tuple fk{key.solver_id, key.params_hash, q};
        if (o.boundary) flags.push_back("BOUNDARY");
        if (o.sigma > 0 && (!o.boundary || opt.include_boundary)) {
          fit_points[fk].push_back({static_cast<double>(key.n), std::log10(o.tts), o.sigma / (o.tts * std::log(10.0))});
        } else {
          excluded[fk].push_back(static_cast<double>(key.n));
        }
      } catch (const std::exception& e) {
        flags.push_back(std::string("NO_OPTIMUM: ") + e.what());
        excluded[{key.solver_id, key.params_hash, q}].push_back(static_cast<double>(key.n));
      }
      curve["flags"] = flags;
      out["curves"].push_back(curve);
    }
  }

  std::set<std::tuple<std::string, std::string, double>> fit_keys;
  for (const auto& [k, _] : fit_points) fit_keys.insert(k);
  for (const auto& [k, _] : excluded) fit_keys.insert(k);
  for (const auto& k : fit_keys) {
    const auto& [solver, hash, q] = k;
    json fit{{"solver_id", solver}, {"params_hash", hash}, {"quantile", q}};
    auto pts = fit_points[k];
    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.n < b.n; });
    json pj = json::array();
    for (const auto& p : pts) pj.push_back({{"size", p.n}, {"log10_tts", p.log10_tts}, {"sigma", p.sigma}});
    fit["points"] = pj;
    fit["excluded_sizes"] = excluded[k];
    try {
      const auto f = scaling_fit(pts, opt.window);
      fit["alpha"] = f.alpha;
      fit["alpha_2sigma"] = f.alpha_2sigma;
      fit["beta"] = f.beta;
      fit["beta_2sigma"] = f.beta_2sigma;
      fit["window"] = f.window;
      fit["chi2"] = f.chi2;
      fit["dof"] = f.dof;
      fit["error"] = nullptr;
    } catch (const std::exception& e) {
      for (const char* f : {"alpha", "alpha_2sigma", "beta", "beta_2sigma", "chi2", "dof"}) fit[f] = nullptr;
      fit["window"] = json::array();
      fit["error"] = e.what();
    }
    out["fits"].push_back(fit);
  }
  return out;
}

namespace detail {

inline std::string csv_field(const nlohmann::json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
  if (v.is_array()) {
    std::string s;
    for (const auto& e : v) s += (s.empty() ? "" : ";") + csv_field(e);
    return s;
  }
  return v.dump();
}

inline std::string csv_row(std::initializer_list<nlohmann::json> fields) {
  std::string s;
  bool first = true;
  for (const auto& f : fields) {
    if (!first) s += ',';
    s += csv_field(f);
    first = false;
  }
  return s + "\n";
}

}  // namespace detail

/// CSV views of an analysis document: one row per curve grid point, one
/// row per fit, and one row per fitted (size, log10 optTTS) point. Numbers
/// are printed with the same round-trip formatting as the JSON.
inline void export_csv(const nlohmann::json& analysis, const std::filesystem::path& dir) {
  using detail::csv_row;
  std::string curves = "solver_id,params_hash,size,quantile,f_p,t_f,tts_mean,tts_sigma,opt_t_f,opt_tts,opt_sigma,boundary_flag\n";
  for (const auto& c : analysis.at("curves")) {
    const auto& o = c.at("opt");
    const nlohmann::json none;
    for (const auto& g : c.at("grid")) {
      curves += csv_row({c["solver_id"], c["params_hash"], c["size"], c["quantile"], c["f_p"], g["t_f"], g["tts_mean"],
                         g["tts_sigma"], o.is_null() ? none : o["t_f"], o.is_null() ? none : o["tts"],
                         o.is_null() ? none : o["sigma"], o.is_null() ? none : o["boundary_flag"]});
    }
  }
  std::string fits = "solver_id,params_hash,quantile,alpha,alpha_2sigma,beta,beta_2sigma,window,error\n";
  std::string scaling = "solver_id,params_hash,quantile,size,log10_tts,sigma\n";
  for (const auto& f : analysis.at("fits")) {
    fits += csv_row({f["solver_id"], f["params_hash"], f["quantile"], f["alpha"], f["alpha_2sigma"], f["beta"],
                     f["beta_2sigma"], f["window"], f["error"]});
    for (const auto& p : f.at("points")) {
      scaling += csv_row({f["solver_id"], f["params_hash"], f["quantile"], p["size"], p["log10_tts"], p["sigma"]});
    }
  }
  write_file(dir / "curves.csv", curves);
  write_file(dir / "fits.csv", fits);
  write_file(dir / "scaling.csv", scaling);
}

/// Accepts the run directory or its logs/ subdirectory.
inline std::filesystem::path resolve_run_dir(const std::filesystem::path& p) {
  if (std::filesystem::exists(p / "ledger.jsonl")) return p;
  if (std::filesystem::exists(p.parent_path() / "ledger.jsonl")) return p.parent_path();
  throw DataError("no ledger.jsonl in " + p.string() + " or its parent");
}

inline nlohmann::json analyze_run(const std::filesystem::path& run_dir, const AnalyzeOptions& opt,
                                  const std::filesystem::path& out_dir) {
  const auto dir = resolve_run_dir(run_dir);
  const auto entries = ledger_entries(dir);
  if (entries.empty()) throw DataError("ledger of " + dir.string() + " lists no runs");
  auto analysis = analyze_entries(entries, opt);
  write_file(out_dir / "analysis.json", analysis.dump(1) + "\n");
  export_csv(analysis, out_dir);
  return analysis;
}

}  // namespace xorbench
