#pragma once

#include <filesystem>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "xorbench/bench/gen.hpp"
#include "xorbench/instance/validate.hpp"

namespace xorbench {

struct InstanceReport {
  std::string file;
  std::string instance_id;
  std::vector<CheckResult> checks;

  bool passed() const {
    return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
  }
};

struct ValidationReport {
  std::vector<InstanceReport> instances;

  std::size_t failures() const {
    return static_cast<std::size_t>(std::count_if(instances.begin(), instances.end(), [](const auto& r) { return !r.passed(); }));
  }
};

/// Instance files under a directory (recursive, manifest excluded) or the
/// listed files themselves, in sorted order.
inline std::vector<std::filesystem::path> instance_files(const std::vector<std::filesystem::path>& inputs) {
  std::vector<std::filesystem::path> files;
  for (const auto& in : inputs) {
    if (std::filesystem::is_directory(in)) {
      for (const auto& e : std::filesystem::recursive_directory_iterator(in)) {
        if (e.is_regular_file() && e.path().extension() == ".json" && e.path().filename() != kManifestName) {
          files.push_back(e.path());
        }
      }
    } else if (std::filesystem::exists(in)) {
      files.push_back(in);
    } else {
      throw DataError("no such file or directory: " + in.string());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

/// Validates every instance. Directory inputs carrying a manifest also get a
/// content-hash check per listed file.
inline ValidationReport validate_paths(const std::vector<std::filesystem::path>& inputs, const ValidationOptions& opt = {}) {
  ValidationReport report;
  std::map<std::filesystem::path, std::string> expected_hash;
  for (const auto& in : inputs) {
    if (!std::filesystem::is_directory(in)) continue;
    for (const auto& e : read_manifest(in)) {
      expected_hash[std::filesystem::weakly_canonical(in / e.file)] = e.fnv1a64;
    }
  }
  for (const auto& path : instance_files(inputs)) {
    InstanceReport r;
    r.file = path.string();
    std::string bytes;
    try {
      bytes = read_file(path);
      const auto bundle = parse_instance(bytes);
      r.instance_id = bundle.id();
      r.checks = validate_bundle(bundle, opt);
    } catch (const DataError& e) {
      r.checks.push_back({"parse", false, e.what()});
    }
    const auto it = expected_hash.find(std::filesystem::weakly_canonical(path));
    if (it != expected_hash.end()) r.checks.push_back({"manifest_hash", content_hash(bytes) == it->second, {}});
    report.instances.push_back(std::move(r));
  }
  return report;
}

inline void print_report(std::ostream& os, const ValidationReport& report) {
  std::map<std::string, std::pair<std::size_t, std::size_t>> tally;  // pass, fail
  for (const auto& inst : report.instances) {
    std::string failed;
    for (const auto& c : inst.checks) {
      auto& t = tally[c.name];
      (c.passed ? t.first : t.second) += 1;
      if (!c.passed) failed += (failed.empty() ? "" : ",") + c.name + (c.detail.empty() ? "" : " (" + c.detail + ")");
    }
    os << (inst.passed() ? "PASS " : "FAIL ") << inst.file;
    if (!failed.empty()) os << "  " << failed;
    os << "\n";
  }
  os << "\n";
  for (const auto& [name, t] : tally) os << name << ": " << t.first << " pass, " << t.second << " fail\n";
  os << "instances: " << report.instances.size() - report.failures() << " pass, " << report.failures() << " fail\n";
}

}  // namespace xorbench
