#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "xorbench/core/error.hpp"
#include "xorbench/solvers/common.hpp"

namespace xorbench {

/// One line of a run log: a first-passage record plus the cell it answers.
struct LogEntry {
  FirstPassageRecord record;
  std::size_t n = 0;
  std::uint64_t run = 0;  // repetition index within the cell's solver spec

  std::string key() const {
    return record.instance_id + "/" + record.solver_id + "/" + record.params_hash + "/" + std::to_string(run);
  }
};

inline nlohmann::json to_json(const LogEntry& e) {
  const auto& r = e.record;
  return {{"solver_id", r.solver_id},
          {"instance_id", r.instance_id},
          {"n", e.n},
          {"run", e.run},
          {"seed", r.seed},
          {"params_hash", r.params_hash},
          {"steps", r.steps ? nlohmann::json(*r.steps) : nlohmann::json(nullptr)},
          {"cutoff", r.cutoff},
          {"success", r.success},
          {"per_step_cost_ns", r.per_step_cost_ns ? nlohmann::json(*r.per_step_cost_ns) : nlohmann::json(nullptr)},
          {"flags", r.flags}};
}

inline std::string log_line(const LogEntry& e) { return to_json(e).dump() + "\n"; }

inline LogEntry log_entry_from(const nlohmann::json& j) {
  try {
    LogEntry e;
    auto& r = e.record;
    r.solver_id = j.at("solver_id").get<std::string>();
    r.instance_id = j.at("instance_id").get<std::string>();
    e.n = j.at("n").get<std::size_t>();
    e.run = j.at("run").get<std::uint64_t>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.params_hash = j.at("params_hash").get<std::string>();
    if (!j.at("steps").is_null()) r.steps = j.at("steps").get<std::uint64_t>();
    r.cutoff = j.at("cutoff").get<std::uint64_t>();
    r.success = j.at("success").get<bool>();
    if (j.contains("per_step_cost_ns") && !j["per_step_cost_ns"].is_null()) {
      r.per_step_cost_ns = j["per_step_cost_ns"].get<double>();
    }
    r.flags = j.value("flags", std::vector<std::string>{});
    if (r.success != r.steps.has_value()) throw DataError("log line: success and steps disagree");
    if (r.steps && *r.steps > r.cutoff) throw DataError("log line: first passage beyond cutoff");
    return e;
  } catch (const nlohmann::json::exception& ex) {
    throw DataError(std::string("log line: ") + ex.what());
  }
}

struct ScannedLine {
  LogEntry entry;
  std::filesystem::path file;
  std::uint64_t offset = 0;
};

/// Reads complete lines of a JSONL log. A trailing partial line, left by an
/// interrupted writer, is ignored; with repair set the file is truncated to
/// its last complete line. A malformed complete line is a DataError.
inline std::vector<ScannedLine> scan_log_file(const std::filesystem::path& path, bool repair) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot open " + path.string());
  std::string content((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  f.close();
  std::vector<ScannedLine> out;
  std::uint64_t pos = 0;
  while (pos < content.size()) {
    const auto nl = content.find('\n', pos);
    if (nl == std::string::npos) break;
    const auto text = content.substr(pos, nl - pos);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception&) {
      throw DataError(path.string() + ": malformed line at offset " + std::to_string(pos));
    }
    out.push_back({log_entry_from(j), path, pos});
    pos = nl + 1;
  }
  if (pos < content.size() && repair) std::filesystem::resize_file(path, pos);
  return out;
}

inline std::vector<std::filesystem::path> log_files(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  if (!std::filesystem::exists(dir)) return files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".jsonl" && e.path().filename().string().rfind("worker-", 0) == 0) {
      files.push_back(e.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace xorbench
