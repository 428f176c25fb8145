#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "xorbench/bench/gen.hpp"
#include "xorbench/bench/params.hpp"

namespace xorbench {

struct PlanSolver {
  SolverSpec spec;
  std::uint64_t runs = 1;  // seeds per instance
};

struct Plan {
  std::filesystem::path instances;  // directory written by gen
  std::vector<std::size_t> sizes;
  std::size_t instances_per_size = 100;
  std::uint64_t master_seed = 0;
  std::size_t workers = 1;
  std::filesystem::path out;
  std::vector<PlanSolver> solvers;
};

inline nlohmann::json to_json(const Plan& p) {
  nlohmann::json solvers = nlohmann::json::array();
  for (const auto& s : p.solvers) solvers.push_back({{"id", s.spec.id}, {"params", s.spec.params}, {"runs", s.runs}});
  return {{"instances", p.instances.string()}, {"sizes", p.sizes},   {"instances_per_size", p.instances_per_size},
          {"master_seed", p.master_seed},      {"workers", p.workers}, {"out", p.out.string()},
          {"solvers", solvers}};
}

/// Relative paths inside the plan resolve against base.
inline Plan plan_from_json(const nlohmann::json& j, const std::filesystem::path& base = {}) {
  try {
    Plan p;
    auto resolve = [&](const std::string& s) {
      const std::filesystem::path path(s);
      return path.is_absolute() || base.empty() ? path : base / path;
    };
    p.instances = resolve(j.at("instances").get<std::string>());
    p.sizes = j.at("sizes").get<std::vector<std::size_t>>();
    p.instances_per_size = j.value("instances_per_size", std::size_t{100});
    p.master_seed = j.value("master_seed", std::uint64_t{0});
    p.workers = j.value("workers", std::size_t{1});
    p.out = resolve(j.at("out").get<std::string>());
    for (const auto& s : j.at("solvers")) {
      p.solvers.push_back({make_solver_spec(s.at("id").get<std::string>(), s.value("params", nlohmann::json::object())),
                           s.value("runs", std::uint64_t{1})});
    }
    if (p.sizes.empty()) throw DataError("plan: no sizes");
    for (auto n : p.sizes) {
      if (n % 2 != 0 || n < 8) throw DataError("plan: sizes must be even and at least 8");
    }
    if (p.solvers.empty()) throw DataError("plan: no solvers");
    if (p.workers < 1) throw DataError("plan: workers must be at least 1");
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("plan: ") + e.what());
  }
}

inline Plan load_plan(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw DataError("plan: " + std::string(e.what()));
  }
  return plan_from_json(j, path.parent_path());
}

/// Seed of one cell, a content hash of its tuple so that adding cells never
/// changes the seeds of existing ones.
inline std::uint64_t cell_seed(std::uint64_t master, const std::string& instance_id, const SolverSpec& spec,
                               std::uint64_t run) {
  return Fnv1a{}
      .str("cell")
      .integer(master)
      .str(instance_id)
      .str("/")
      .str(spec.id)
      .str("/")
      .str(spec.params_hash())
      .integer(run)
      .digest();
}

struct PlanInstance {
  ManifestEntry entry;
  std::filesystem::path path;
};

/// First instances_per_size manifest entries of each planned size.
inline std::vector<PlanInstance> plan_instances(const Plan& p) {
  const auto manifest = read_manifest(p.instances);
  if (manifest.empty()) throw DataError("plan: no manifest in " + p.instances.string());
  std::vector<PlanInstance> out;
  for (auto n : p.sizes) {
    std::size_t found = 0;
    for (const auto& e : manifest) {
      if (e.n == n && e.index < p.instances_per_size) {
        out.push_back({e, p.instances / e.file});
        ++found;
      }
    }
    if (found < p.instances_per_size) {
      throw DataError("plan: manifest has " + std::to_string(found) + " instances of size " + std::to_string(n) +
                      ", plan needs " + std::to_string(p.instances_per_size));
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return std::tie(a.entry.n, a.entry.index) < std::tie(b.entry.n, b.entry.index);
  });
  return out;
}

struct Cell {
  std::size_t instance = 0;  // index into plan_instances
  std::size_t solver = 0;    // index into plan.solvers
  std::uint64_t run = 0;
  std::uint64_t seed = 0;
  std::string key;
};

inline std::vector<Cell> plan_cells(const Plan& p, const std::vector<PlanInstance>& instances) {
  std::vector<Cell> cells;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto& id = instances[i].entry.instance_id;
    for (std::size_t s = 0; s < p.solvers.size(); ++s) {
      const auto& spec = p.solvers[s].spec;
      for (std::uint64_t r = 0; r < p.solvers[s].runs; ++r) {
        cells.push_back({i, s, r, cell_seed(p.master_seed, id, spec, r),
                         id + "/" + spec.id + "/" + spec.params_hash() + "/" + std::to_string(r)});
      }
    }
  }
  return cells;
}

}  // namespace xorbench
