#pragma once

#include <exception>
#include <string>

#include "xorbench/bench/params.hpp"
#include "xorbench/instance/io.hpp"

namespace xorbench {

/// Runs one cell and re-verifies any reported success by a full energy
/// evaluation (Ising solvers) or a full clause check (quasi-greedy). A
/// solver exception becomes a flagged failure.
inline SolveOutcome run_solver(const SolverSpec& spec, const InstanceBundle& b, std::uint64_t seed) {
  SolveOutcome out;
  try {
    if (spec.id == "pt") {
      out = pt_run(b.ising, pt_params_from(spec.params), seed);
    } else if (spec.id == "dau") {
      out = dau_run(b.ising, dau_params_from(spec.params), seed);
    } else if (spec.id == "sb") {
      out = sb_run(b.ising, sb_params_from(spec.params), seed);
    } else if (spec.id == "qg") {
      out = quasigreedy_run(b.xorsat, qg_params_from(spec.params), seed);
    } else {
      throw DataError("unknown solver '" + spec.id + "'");
    }
    if (out.record.success) {
      const bool verified = spec.id == "qg" ? count_violated(b.xorsat, out.bits) == 0
                                            : out.spins.size() == b.n() &&
                                                  ising_energy(b.ising, out.spins) == b.ising.ground_energy;
      if (!verified) {
        out.record.success = false;
        out.record.steps.reset();
        out.record.flags.push_back("verification_failed");
      }
    }
  } catch (const std::exception& e) {
    out = {};
    out.record.success = false;
    out.record.flags.push_back(std::string("error: ") + e.what());
  }
  out.record.solver_id = spec.id;
  out.record.instance_id = b.id();
  out.record.seed = seed;
  out.record.params_hash = spec.params_hash();
  return out;
}

}  // namespace xorbench
