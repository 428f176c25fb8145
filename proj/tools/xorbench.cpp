#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "xorbench/bench/analyze.hpp"
#include "xorbench/bench/gen.hpp"
#include "xorbench/bench/report.hpp"
#include "xorbench/bench/solve.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInternal = 3;

xorbench::WindowPolicy parse_window(const std::string& s) {
  if (s == "auto") return xorbench::WindowPolicy::automatic();
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("window: expected 'auto' or lo:hi");
  return xorbench::WindowPolicy::manual(std::stod(s.substr(0, colon)), std::stod(s.substr(colon + 1)));
}

}  // namespace

int main(int argc, char** argv) {
  namespace fs = std::filesystem;
  CLI::App app{"3-regular 3-XORSAT benchmark suite"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen", "Generate planted instance ensembles");
  std::vector<std::size_t> sizes;
  std::size_t count = 100;
  std::uint64_t gen_seed = 0;
  std::string gen_out = "out";
  gen->add_option("--sizes", sizes, "Spin counts n (even, >= 8)")->required()->delimiter(',');
  gen->add_option("--count", count, "Instances per size");
  gen->add_option("--seed", gen_seed, "Master seed");
  gen->add_option("--out", gen_out, "Output directory; instances go to OUT/instances");

  auto* solve = app.add_subcommand("solve", "Run a benchmark plan");
  std::string plan_path;
  std::size_t workers = 0;
  bool resume = false;
  std::size_t max_cells = 0;
  solve->add_option("--plan", plan_path, "Plan JSON")->required();
  solve->add_option("--workers", workers, "Worker threads (overrides the plan)");
  solve->add_flag("--resume", resume, "Continue a partially completed run");
  solve->add_option("--max-cells", max_cells, "Stop after this many new cells");

  auto* analyze = app.add_subcommand("analyze", "Compute TTS curves and scaling fits");
  std::string logs_dir, analyze_out, window = "auto";
  xorbench::AnalyzeOptions aopt;
  analyze->add_option("--logs", logs_dir, "Run directory written by solve")->required();
  analyze->add_option("--quantiles", aopt.quantiles, "Instance quantiles")->delimiter(',');
  analyze->add_option("--fp", aopt.fp, "Replica factor: K or N/n for floor(N/n)");
  analyze->add_option("--grid", aopt.grid, "t_f grid: auto, log:lo:hi:count, lin:lo:hi:count or a,b,c");
  analyze->add_option("--grid-points", aopt.grid_points, "Points of the automatic grid");
  analyze->add_option("--resamples", aopt.resamples, "Bootstrap resamples");
  analyze->add_option("--seed", aopt.seed, "Bootstrap seed");
  analyze->add_option("--window", window, "Fit window: auto or lo:hi");
  analyze->add_flag("--include-boundary", aopt.include_boundary, "Fit optima found at a grid endpoint");
  analyze->add_option("--out", analyze_out, "Output directory (default RUN/analysis)");

  auto* validate = app.add_subcommand("validate", "Check instance files");
  std::vector<std::string> inputs;
  xorbench::ValidationOptions vopt;
  validate->add_option("--instances", inputs, "Instance directories or files")->required();
  validate->add_option("--exhaustive-max-m", vopt.exhaustive_max_m, "Brute-force checks up to this many variables");

  auto* exp = app.add_subcommand("export", "Export an analysis as CSV");
  std::string analysis_dir, format = "csv", export_out;
  exp->add_option("--analysis", analysis_dir, "Directory holding analysis.json")->required();
  exp->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv"}));
  exp->add_option("--out", export_out, "Output directory (default: the analysis directory)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*gen) {
      const fs::path dir = fs::path(gen_out) / "instances";
      const auto entries = xorbench::generate_ensemble(dir, sizes, count, gen_seed);
      std::cout << "wrote " << entries.size() << " instances to " << dir.string() << "\n";
    } else if (*solve) {
      xorbench::SolveOptions sopt;
      if (workers > 0) sopt.workers = workers;
      if (max_cells > 0) sopt.max_cells = max_cells;
      sopt.resume = resume;
      const auto s = xorbench::run_plan(xorbench::load_plan(plan_path), sopt);
      std::cout << "cells: " << s.planned << " planned, " << s.already_done << " already done, " << s.executed
                << " executed, " << s.flagged << " flagged\n";
    } else if (*analyze) {
      aopt.window = parse_window(window);
      const auto run = xorbench::resolve_run_dir(logs_dir);
      const fs::path out = analyze_out.empty() ? run / "analysis" : fs::path(analyze_out);
      const auto a = xorbench::analyze_run(run, aopt, out);
      std::cout << a["curves"].size() << " curves, " << a["fits"].size() << " fits written to " << out.string() << "\n";
      for (const auto& f : a["fits"]) {
        std::cout << f["solver_id"].get<std::string>() << " q=" << f["quantile"].get<double>() << ": ";
        if (f["error"].is_null()) {
          std::cout << "alpha = " << f["alpha"].get<double>() << " +- " << f["alpha_2sigma"].get<double>() << "\n";
        } else {
          std::cout << f["error"].get<std::string>() << "\n";
        }
      }
    } else if (*validate) {
      std::vector<fs::path> paths(inputs.begin(), inputs.end());
      const auto report = xorbench::validate_paths(paths, vopt);
      xorbench::print_report(std::cout, report);
      if (report.instances.empty() || report.failures() > 0) return kExitData;
    } else if (*exp) {
      const fs::path dir(analysis_dir);
      nlohmann::json analysis;
      try {
        analysis = nlohmann::json::parse(xorbench::read_file(dir / "analysis.json"));
      } catch (const nlohmann::json::exception& e) {
        throw xorbench::DataError(std::string("analysis.json: ") + e.what());
      }
      xorbench::export_csv(analysis, export_out.empty() ? dir : fs::path(export_out));
    }
  } catch (const xorbench::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return 0;
}
