#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "xorbench/core/error.hpp"
#include "xorbench/instance/ising.hpp"
#include "xorbench/instance/xorsat.hpp"

namespace xorbench {

inline constexpr int kInstanceFormatVersion = 1;

/// Native instance together with its reduced forms, as stored on disk.
struct InstanceBundle {
  XorsatInstance xorsat;
  IsingInstance ising;
  QuboInstance qubo;

  std::size_t n() const noexcept { return ising.n; }
  const std::string& id() const noexcept { return xorsat.instance_id; }
};

inline InstanceBundle make_bundle(XorsatInstance inst) {
  InstanceBundle b;
  b.ising = to_ising(inst);
  b.qubo = ising_to_qubo(b.ising);
  b.xorsat = std::move(inst);
  return b;
}

inline nlohmann::json to_json(const InstanceBundle& b) {
  using nlohmann::json;
  const auto& x = b.xorsat;
  json clauses = json::array();
  for (const auto& c : x.clauses) clauses.push_back({c.vars[0], c.vars[1], c.vars[2], c.sign});
  json planted = json::array();
  for (auto bit : x.planted) planted.push_back(bit);

  json h = json::array();
  for (auto v : b.ising.h) h.push_back(v);
  json j = json::array();
  for (const auto& c : b.ising.couplings) j.push_back({c.i, c.j, c.value});
  json q = json::array();
  for (const auto& t : b.qubo.terms) q.push_back({t.i, t.j, t.value});

  json out;
  out["format_version"] = kInstanceFormatVersion;
  out["m"] = x.m;
  out["n"] = b.ising.n;
  out["clauses"] = std::move(clauses);
  out["planted"] = std::move(planted);
  out["ising"] = {{"h", std::move(h)}, {"j", std::move(j)}, {"ground_energy", b.ising.ground_energy}};
  out["qubo"] = {{"q", std::move(q)}, {"offset", b.qubo.offset}, {"ground_value", b.qubo.ground_value}};
  out["seed"] = x.seed;
  out["instance_id"] = x.instance_id;
  out["metadata"] = {{"shared_pair_count", x.shared_pair_count}};
  return out;
}

inline std::string serialize_instance(const InstanceBundle& b) { return to_json(b).dump() + "\n"; }

inline InstanceBundle bundle_from_json(const nlohmann::json& in) {
  try {
    if (in.at("format_version").get<int>() != kInstanceFormatVersion) {
      throw DataError("instance: unsupported format_version");
    }
    InstanceBundle b;
    auto& x = b.xorsat;
    x.m = in.at("m").get<std::size_t>();
    const auto n = in.at("n").get<std::size_t>();
    if (n != 2 * x.m) throw DataError("instance: n must equal 2m");
    for (const auto& c : in.at("clauses")) {
      if (c.size() != 4) throw DataError("instance: clause must have 4 entries");
      Clause cl;
      for (int k = 0; k < 3; ++k) {
        cl.vars[k] = c.at(k).get<std::uint32_t>();
        if (cl.vars[k] >= x.m) throw DataError("instance: clause variable out of range");
      }
      const auto sign = c.at(3).get<int>();
      if (sign != 0 && sign != 1) throw DataError("instance: clause sign must be 0 or 1");
      cl.sign = static_cast<std::uint8_t>(sign);
      x.clauses.push_back(cl);
    }
    for (const auto& bit : in.at("planted")) {
      const auto v = bit.get<int>();
      if (v != 0 && v != 1) throw DataError("instance: planted bits must be 0 or 1");
      x.planted.push_back(static_cast<std::uint8_t>(v));
    }
    if (x.planted.size() != x.m) throw DataError("instance: planted length mismatch");
    x.seed = in.at("seed").get<std::uint64_t>();
    x.instance_id = in.at("instance_id").get<std::string>();
    if (in.contains("metadata")) {
      x.shared_pair_count = in["metadata"].value("shared_pair_count", std::size_t{0});
    }

    const auto& ising = in.at("ising");
    b.ising.n = n;
    for (const auto& v : ising.at("h")) b.ising.h.push_back(v.get<std::int64_t>());
    if (b.ising.h.size() != n) throw DataError("instance: ising.h length mismatch");
    for (const auto& e : ising.at("j")) {
      Coupling c{e.at(0).get<std::uint32_t>(), e.at(1).get<std::uint32_t>(), e.at(2).get<std::int64_t>()};
      if (!(c.i < c.j) || c.j >= n) throw DataError("instance: coupling indices must satisfy i < j < n");
      b.ising.couplings.push_back(c);
    }
    b.ising.ground_energy = ising.at("ground_energy").get<std::int64_t>();
    b.ising.aux_map.resize(x.clauses.size());
    for (std::size_t c = 0; c < x.clauses.size(); ++c) b.ising.aux_map[c] = static_cast<std::uint32_t>(x.m + c);

    const auto& qubo = in.at("qubo");
    b.qubo.n = n;
    for (const auto& e : qubo.at("q")) {
      QuboTerm t{e.at(0).get<std::uint32_t>(), e.at(1).get<std::uint32_t>(), e.at(2).get<std::int64_t>()};
      if (t.i > t.j || t.j >= n) throw DataError("instance: qubo indices must satisfy i <= j < n");
      b.qubo.terms.push_back(t);
    }
    b.qubo.offset = qubo.at("offset").get<std::int64_t>();
    b.qubo.ground_value = qubo.at("ground_value").get<std::int64_t>();
    return b;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("instance: malformed JSON: ") + e.what());
  }
}

inline InstanceBundle parse_instance(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("instance: parse error: ") + e.what());
  }
  return bundle_from_json(j);
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot open " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw DataError("cannot write " + path.string());
  f << contents;
  if (!f) throw DataError("write failed for " + path.string());
}

inline InstanceBundle load_instance(const std::filesystem::path& path) {
  return parse_instance(read_file(path));
}

}  // namespace xorbench
