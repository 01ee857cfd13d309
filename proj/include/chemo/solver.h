#ifndef CHEMO_SOLVER_H_
#define CHEMO_SOLVER_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "chemo/model.h"

namespace chemo {

enum class Backend { kInternal, kExternal, kOracle };

enum class SolveStatus {
  kOptimal,
  kFeasibleTimeLimit,
  kInfeasible,
  kNoSolutionTimeLimit,
  kBackendError,
};

const char* StatusName(SolveStatus status);
bool HasSolution(SolveStatus status);

// Relative optimality tolerance num/den; nodes whose bound cannot beat the
// incumbent by more than tolerance * |incumbent| are pruned.
struct GapTolerance {
  std::int64_t num = 0;
  std::int64_t den = 1;
};

struct SolveOptions {
  double time_limit = 300.0;  // seconds
  Backend backend = Backend::kInternal;
  // Executable invoked as `command <model.mps> <solution.out> <seconds>`.
  std::string external_command;
  GapTolerance gap_tolerance;
  std::uint64_t seed = 0;
  // Directory for exchange files; a fresh temporary directory when empty.
  std::filesystem::path work_dir;
};

struct SolveResult {
  SolveStatus status = SolveStatus::kInfeasible;
  std::optional<std::vector<std::int64_t>> assignment;
  std::int64_t objective = 0;
  std::int64_t best_bound = 0;
  double runtime = 0.0;
  std::int64_t nodes = 0;
  std::string backend_error;  // stderr / diagnostics for kBackendError
};

// Dispatches on opts.backend. Any returned assignment satisfies every row of
// `model`; external results that do not are turned into kBackendError.
SolveResult Solve(const MilpModel& model, const SolveOptions& opts);

// Depth-first branch and bound with bound propagation and a combinatorial
// objective bound. Suited to models with up to a few thousand binaries.
SolveResult SolveInternal(const MilpModel& model, const SolveOptions& opts);

// Exhaustive enumeration of every assignment within the variable bounds.
// Refuses (std::length_error) models whose domain product exceeds 2^22.
SolveResult SolveByEnumeration(const MilpModel& model, const SolveOptions& opts);

// Writes the model to MPS, runs the external command and reads back the
// solution file.
SolveResult SolveExternal(const MilpModel& model, const SolveOptions& opts);

}  // namespace chemo

#endif  // CHEMO_SOLVER_H_
