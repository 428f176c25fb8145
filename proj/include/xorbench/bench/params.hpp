#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "xorbench/core/error.hpp"
#include "xorbench/core/hash.hpp"
#include "xorbench/solvers/dau.hpp"
#include "xorbench/solvers/pt.hpp"
#include "xorbench/solvers/quasigreedy.hpp"
#include "xorbench/solvers/sb.hpp"

namespace xorbench {

using nlohmann::json;

inline const std::vector<std::string>& solver_ids() {
  static const std::vector<std::string> ids{"pt", "dau", "sb", "qg"};
  return ids;
}

namespace detail {

inline void reject_unknown(const json& in, std::initializer_list<const char*> known, const std::string& who) {
  if (!in.is_object()) throw DataError(who + ": params must be an object");
  for (const auto& [key, _] : in.items()) {
    if (std::find_if(known.begin(), known.end(), [&](const char* k) { return key == k; }) == known.end()) {
      throw DataError(who + ": unknown parameter '" + key + "'");
    }
  }
}

template <class T>
void read(const json& in, const char* key, T& out) {
  if (in.contains(key)) out = in.at(key).get<T>();
}

inline json optional_number(const std::optional<double>& v) { return v ? json(*v) : json("auto"); }

inline void read_auto(const json& in, const char* key, std::optional<double>& out) {
  if (!in.contains(key)) return;
  const auto& v = in.at(key);
  if (v.is_string() && v.get<std::string>() == "auto") {
    out.reset();
  } else {
    out = v.get<double>();
  }
}

}  // namespace detail

inline json to_json(const PtParams& p) {
  return {{"num_replicas", p.num_replicas}, {"beta_min", p.beta_min}, {"beta_max", p.beta_max},
          {"sweeps_per_swap", p.sweeps_per_swap}, {"max_steps", p.max_steps}};
}

inline json to_json(const DauParams& p) {
  return {{"num_replicas", p.num_replicas},
          {"repex_interval", p.repex_interval},
          {"offset_increment", detail::optional_number(p.offset_increment)},
          {"beta_min", p.beta_min},
          {"beta_max", p.beta_max},
          {"adapt_temperatures", p.adapt_temperatures},
          {"max_steps", p.max_steps}};
}

inline json to_json(const SbParams& p) {
  return {{"dt", p.dt},
          {"num_steps", p.num_steps},
          {"coupling_scale", detail::optional_number(p.coupling_scale)},
          {"loops", p.loops}};
}

inline json to_json(const QgParams& p) {
  return {{"flip_prob", p.flip_prob}, {"num_replicas", p.num_replicas}, {"max_steps", p.max_steps}};
}

inline PtParams pt_params_from(const json& in) {
  detail::reject_unknown(in, {"num_replicas", "beta_min", "beta_max", "sweeps_per_swap", "max_steps"}, "pt");
  PtParams p;
  detail::read(in, "num_replicas", p.num_replicas);
  detail::read(in, "beta_min", p.beta_min);
  detail::read(in, "beta_max", p.beta_max);
  detail::read(in, "sweeps_per_swap", p.sweeps_per_swap);
  detail::read(in, "max_steps", p.max_steps);
  return p;
}

inline DauParams dau_params_from(const json& in) {
  detail::reject_unknown(in, {"num_replicas", "repex_interval", "offset_increment", "beta_min", "beta_max",
                              "adapt_temperatures", "max_steps"},
                         "dau");
  DauParams p;
  detail::read(in, "num_replicas", p.num_replicas);
  detail::read(in, "repex_interval", p.repex_interval);
  detail::read_auto(in, "offset_increment", p.offset_increment);
  detail::read(in, "beta_min", p.beta_min);
  detail::read(in, "beta_max", p.beta_max);
  detail::read(in, "adapt_temperatures", p.adapt_temperatures);
  detail::read(in, "max_steps", p.max_steps);
  return p;
}

inline SbParams sb_params_from(const json& in) {
  detail::reject_unknown(in, {"dt", "num_steps", "coupling_scale", "loops"}, "sb");
  SbParams p;
  detail::read(in, "dt", p.dt);
  detail::read(in, "num_steps", p.num_steps);
  detail::read_auto(in, "coupling_scale", p.coupling_scale);
  detail::read(in, "loops", p.loops);
  return p;
}

inline QgParams qg_params_from(const json& in) {
  detail::reject_unknown(in, {"flip_prob", "num_replicas", "max_steps"}, "qg");
  QgParams p;
  detail::read(in, "flip_prob", p.flip_prob);
  detail::read(in, "num_replicas", p.num_replicas);
  detail::read(in, "max_steps", p.max_steps);
  return p;
}

/// A solver with fully resolved parameters. params holds every field, so
/// omitted keys and explicit defaults hash the same.
struct SolverSpec {
  std::string id;
  json params;

  std::string params_hash() const { return to_hex(hash_string(id + ":" + params.dump())); }
};

/// Fills defaults and validates. Throws DataError on unknown solvers,
/// unknown keys, wrong types or out-of-range values.
inline SolverSpec make_solver_spec(const std::string& id, const json& params = json::object()) {
  const json in = params.is_null() ? json::object() : params;
  try {
    SolverSpec spec{id, {}};
    if (id == "pt") {
      const auto p = pt_params_from(in);
      p.validate();
      spec.params = to_json(p);
    } else if (id == "dau") {
      const auto p = dau_params_from(in);
      p.validate();
      spec.params = to_json(p);
    } else if (id == "sb") {
      const auto p = sb_params_from(in);
      p.validate();
      spec.params = to_json(p);
    } else if (id == "qg") {
      const auto p = qg_params_from(in);
      p.validate();
      spec.params = to_json(p);
    } else {
      throw DataError("unknown solver '" + id + "'");
    }
    return spec;
  } catch (const json::exception& e) {
    throw DataError(id + ": bad parameter: " + e.what());
  } catch (const std::invalid_argument& e) {
    throw DataError(e.what());
  }
}

}  // namespace xorbench
