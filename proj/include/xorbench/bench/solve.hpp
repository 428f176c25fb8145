#pragma once

#include <atomic>
#include <chrono>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <set>
#include <thread>
#include <unordered_set>

#include "xorbench/bench/plan.hpp"
#include "xorbench/bench/registry.hpp"
#include "xorbench/bench/runlog.hpp"

namespace xorbench {

struct LedgerEntry {
  std::string key;
  std::string file;  // log file name inside logs/
  std::uint64_t offset = 0;
};

inline std::string ledger_line(const LedgerEntry& e) {
  return nlohmann::json{{"key", e.key}, {"file", e.file}, {"offset", e.offset}}.dump() + "\n";
}

inline std::vector<LedgerEntry> read_ledger(const std::filesystem::path& run_dir) {
  std::vector<LedgerEntry> out;
  const auto path = run_dir / "ledger.jsonl";
  if (!std::filesystem::exists(path)) throw DataError("no ledger in " + run_dir.string());
  std::ifstream f(path);
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      out.push_back({j.at("key").get<std::string>(), j.at("file").get<std::string>(), j.at("offset").get<std::uint64_t>()});
    } catch (const nlohmann::json::exception&) {
      break;  // torn final line from an interrupted append
    }
  }
  return out;
}

/// Log entries referenced by the ledger, in ledger order.
inline std::vector<LogEntry> ledger_entries(const std::filesystem::path& run_dir) {
  std::map<std::string, std::map<std::uint64_t, LogEntry>> by_file;
  for (const auto& file : log_files(run_dir / "logs")) {
    for (auto& s : scan_log_file(file, false)) by_file[file.filename().string()].emplace(s.offset, std::move(s.entry));
  }
  std::vector<LogEntry> out;
  for (const auto& e : read_ledger(run_dir)) {
    const auto f = by_file.find(e.file);
    if (f == by_file.end()) throw DataError("ledger references missing log " + e.file);
    const auto line = f->second.find(e.offset);
    if (line == f->second.end() || line->second.key() != e.key) {
      throw DataError("ledger entry " + e.key + " does not match its log line");
    }
    out.push_back(line->second);
  }
  return out;
}

struct SolveOptions {
  std::optional<std::size_t> workers;    // overrides the plan
  bool resume = false;
  std::optional<std::size_t> max_cells;  // stop after this many new cells
};

struct SolveSummary {
  std::size_t planned = 0;
  std::size_t already_done = 0;
  std::size_t executed = 0;
  std::size_t flagged = 0;
};

/// Rebuilds the ledger from the logs, repairing torn trailing lines.
inline std::vector<LedgerEntry> rebuild_ledger(const std::filesystem::path& run_dir) {
  std::vector<LedgerEntry> ledger;
  std::unordered_set<std::string> seen;
  for (const auto& file : log_files(run_dir / "logs")) {
    for (const auto& s : scan_log_file(file, true)) {
      const auto key = s.entry.key();
      if (seen.insert(key).second) ledger.push_back({key, file.filename().string(), s.offset});
    }
  }
  std::string text;
  for (const auto& e : ledger) text += ledger_line(e);
  write_file(run_dir / "ledger.jsonl.tmp", text);
  std::filesystem::rename(run_dir / "ledger.jsonl.tmp", run_dir / "ledger.jsonl");
  return ledger;
}

inline std::string utc_timestamp() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

/// Executes every plan cell not yet in the ledger. Each worker appends to
/// its own log file; the ledger is shared and appended under a lock.
/// Timings go to meta/, never to the logs.
inline SolveSummary run_plan(const Plan& plan, const SolveOptions& opt = {}) {
  namespace fs = std::filesystem;
  const auto instances = plan_instances(plan);
  const auto cells = plan_cells(plan, instances);
  const fs::path logs = plan.out / "logs", meta = plan.out / "meta";
  fs::create_directories(logs);
  fs::create_directories(meta);

  if (!opt.resume && !log_files(logs).empty()) {
    throw DataError(plan.out.string() + " already holds run logs; pass --resume to continue");
  }
  write_file(plan.out / "plan.json", to_json(plan).dump(1) + "\n");
  for (const auto& s : plan.solvers) {
    write_file(plan.out / "params" / (s.spec.params_hash() + ".json"),
               nlohmann::json{{"solver_id", s.spec.id}, {"params", s.spec.params}}.dump(1) + "\n");
  }
  const auto ledger = rebuild_ledger(plan.out);
  std::unordered_set<std::string> done;
  for (const auto& e : ledger) done.insert(e.key);

  SolveSummary summary;
  summary.planned = cells.size();
  std::vector<const Cell*> pending;
  for (const auto& c : cells) {
    if (done.count(c.key)) {
      ++summary.already_done;
    } else {
      pending.push_back(&c);
    }
  }
  const std::size_t limit = opt.max_cells ? std::min(*opt.max_cells, pending.size()) : pending.size();

  std::vector<std::optional<InstanceBundle>> bundles(instances.size());
  std::vector<std::once_flag> loaded(instances.size());
  std::mutex ledger_mutex;
  std::ofstream ledger_out(plan.out / "ledger.jsonl", std::ios::binary | std::ios::app);
  std::atomic<std::size_t> next{0}, flagged{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&](std::size_t w) {
    try {
      const auto name = "worker-" + std::to_string(w) + ".jsonl";
      const auto path = logs / name;
      std::uint64_t offset = fs::exists(path) ? fs::file_size(path) : 0;
      std::ofstream log(path, std::ios::binary | std::ios::app);
      std::ofstream timing(meta / name, std::ios::binary | std::ios::app);
      if (!log || !timing) throw DataError("cannot open " + path.string());
      for (;;) {
        const auto k = next.fetch_add(1);
        if (k >= limit || failed) break;
        const Cell& cell = *pending[k];
        std::call_once(loaded[cell.instance], [&] { bundles[cell.instance] = load_instance(instances[cell.instance].path); });
        const auto& bundle = *bundles[cell.instance];
        if (bundle.id() != instances[cell.instance].entry.instance_id) {
          throw DataError(instances[cell.instance].path.string() + ": instance_id does not match manifest");
        }
        const auto outcome = run_solver(plan.solvers[cell.solver].spec, bundle, cell.seed);
        LogEntry entry{outcome.record, bundle.n(), cell.run};
        if (!entry.record.flags.empty()) ++flagged;
        const auto line = log_line(entry);
        log << line << std::flush;
        if (!log) throw DataError("write failed for " + path.string());
        const double per_step = outcome.steps_executed > 0 ? outcome.wall_ns / static_cast<double>(outcome.steps_executed) : 0.0;
        timing << nlohmann::json{{"key", cell.key},
                                 {"wall_ns", outcome.wall_ns},
                                 {"steps_executed", outcome.steps_executed},
                                 {"per_step_cost_ns", per_step},
                                 {"finished", utc_timestamp()}}
                      .dump()
               << "\n";
        {
          std::lock_guard lock(ledger_mutex);
          ledger_out << ledger_line({cell.key, name, offset}) << std::flush;
        }
        offset += line.size();
      }
    } catch (...) {
      failed = true;
      std::lock_guard lock(error_mutex);
      if (!error) error = std::current_exception();
    }
  };

  const std::size_t workers = std::max<std::size_t>(1, opt.workers.value_or(plan.workers));
  const auto started = utc_timestamp();
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker, w);
  }
  if (error) std::rethrow_exception(error);
  summary.executed = limit;
  summary.flagged = flagged;
  std::ofstream(meta / "invocations.jsonl", std::ios::app)
      << nlohmann::json{{"started", started}, {"finished", utc_timestamp()}, {"workers", workers},
                        {"executed", summary.executed}}
             .dump()
      << "\n";
  return summary;
}

}  // namespace xorbench
