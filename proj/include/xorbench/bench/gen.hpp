#pragma once

#include <algorithm>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "xorbench/core/hash.hpp"
#include "xorbench/instance/io.hpp"

namespace xorbench {

struct ManifestEntry {
  std::size_t n = 0;
  std::size_t index = 0;
  std::uint64_t seed = 0;
  std::string instance_id;
  std::string file;  // relative to the instance directory
  std::string fnv1a64;

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

inline constexpr const char* kManifestName = "manifest.json";

inline std::uint64_t instance_seed(std::uint64_t master, std::size_t n, std::size_t index) {
  return Fnv1a{}.str("instance").integer(master).integer(std::uint64_t{n}).integer(std::uint64_t{index}).digest();
}

inline std::string content_hash(const std::string& bytes) { return to_hex(hash_string(bytes)); }

inline std::vector<ManifestEntry> read_manifest(const std::filesystem::path& dir) {
  const auto path = dir / kManifestName;
  if (!std::filesystem::exists(path)) return {};
  try {
    const auto j = nlohmann::json::parse(read_file(path));
    std::vector<ManifestEntry> out;
    for (const auto& e : j.at("entries")) {
      out.push_back({e.at("n").get<std::size_t>(), e.at("index").get<std::size_t>(), e.at("seed").get<std::uint64_t>(),
                     e.at("instance_id").get<std::string>(), e.at("file").get<std::string>(),
                     e.at("fnv1a64").get<std::string>()});
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("manifest: " + std::string(e.what()));
  }
}

inline void write_manifest(const std::filesystem::path& dir, std::vector<ManifestEntry> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return std::tie(a.n, a.index) < std::tie(b.n, b.index); });
  nlohmann::json j;
  j["format_version"] = 1;
  j["entries"] = nlohmann::json::array();
  for (const auto& e : entries) {
    j["entries"].push_back({{"n", e.n},
                            {"index", e.index},
                            {"seed", e.seed},
                            {"instance_id", e.instance_id},
                            {"file", e.file},
                            {"fnv1a64", e.fnv1a64}});
  }
  write_file(dir / kManifestName, j.dump(1) + "\n");
}

/// Writes count instances per size n under dir/n<k>/<instance_id>.json and
/// merges them into dir/manifest.json, replacing earlier entries of the same
/// sizes. Sizes are spin counts: even and at least 8.
inline std::vector<ManifestEntry> generate_ensemble(const std::filesystem::path& dir, const std::vector<std::size_t>& sizes,
                                                    std::size_t count, std::uint64_t master_seed) {
  for (auto n : sizes) {
    if (n % 2 != 0 || n < 8) throw std::invalid_argument("sizes must be even and at least 8, got " + std::to_string(n));
  }
  auto entries = read_manifest(dir);
  std::erase_if(entries, [&](const auto& e) { return std::find(sizes.begin(), sizes.end(), e.n) != sizes.end(); });
  std::vector<ManifestEntry> fresh;
  for (auto n : sizes) {
    for (std::size_t k = 0; k < count; ++k) {
      const auto seed = instance_seed(master_seed, n, k);
      const auto bundle = make_bundle(generate_instance(n / 2, seed));
      const auto text = serialize_instance(bundle);
      const auto rel = "n" + std::to_string(n) + "/" + bundle.id() + ".json";
      write_file(dir / rel, text);
      fresh.push_back({n, k, seed, bundle.id(), rel, content_hash(text)});
    }
  }
  entries.insert(entries.end(), fresh.begin(), fresh.end());
  write_manifest(dir, entries);
  return fresh;
}

/// Files whose bytes no longer match the manifest (or are missing).
inline std::vector<std::string> verify_manifest(const std::filesystem::path& dir) {
  std::vector<std::string> bad;
  for (const auto& e : read_manifest(dir)) {
    const auto path = dir / e.file;
    if (!std::filesystem::exists(path) || content_hash(read_file(path)) != e.fnv1a64) bad.push_back(e.file);
  }
  return bad;
}

}  // namespace xorbench
