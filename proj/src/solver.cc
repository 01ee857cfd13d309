#include "chemo/solver.h"

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include "chemo/mps.h"

namespace chemo {

const char* StatusName(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal:
      return "optimal";
    case SolveStatus::kFeasibleTimeLimit:
      return "feasible_time_limit";
    case SolveStatus::kInfeasible:
      return "infeasible";
    case SolveStatus::kNoSolutionTimeLimit:
      return "no_solution_time_limit";
    case SolveStatus::kBackendError:
      return "backend_error";
  }
  return "unknown";
}

bool HasSolution(SolveStatus status) {
  return status == SolveStatus::kOptimal || status == SolveStatus::kFeasibleTimeLimit;
}

SolveResult Solve(const MilpModel& model, const SolveOptions& opts) {
  if (!(opts.time_limit > 0)) throw std::invalid_argument("time_limit must be positive");
  SolveResult result;
  switch (opts.backend) {
    case Backend::kInternal:
      result = SolveInternal(model, opts);
      break;
    case Backend::kExternal:
      result = SolveExternal(model, opts);
      break;
    case Backend::kOracle:
      result = SolveByEnumeration(model, opts);
      break;
  }
  if (result.assignment && !model.IsFeasible(*result.assignment)) {
    result.status = SolveStatus::kBackendError;
    result.backend_error = "backend returned an assignment that violates the model";
    result.assignment.reset();
  }
  return result;
}

SolveResult SolveByEnumeration(const MilpModel& model, const SolveOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  const int n = model.num_variables();
  double space = 1;
  for (const Variable& v : model.variables()) space *= static_cast<double>(v.upper - v.lower + 1);
  if (space > static_cast<double>(1 << 22)) {
    throw std::length_error("model too large for exhaustive enumeration");
  }
  const int sign = model.sense() == Sense::kMaximize ? 1 : -1;
  std::vector<std::int64_t> values(n);
  for (int j = 0; j < n; ++j) values[j] = model.variable(j).lower;
  SolveResult result;
  result.status = SolveStatus::kInfeasible;
  while (true) {
    ++result.nodes;
    if (model.IsFeasible(values)) {
      const std::int64_t obj = model.Objective(values);
      if (!result.assignment || sign * obj > sign * result.objective) {
        result.assignment = values;
        result.objective = obj;
      }
    }
    int j = 0;
    while (j < n && values[j] == model.variable(j).upper) {
      values[j] = model.variable(j).lower;
      ++j;
    }
    if (j == n) break;
    ++values[j];
  }
  if (result.assignment) {
    result.status = SolveStatus::kOptimal;
    result.best_bound = result.objective;
  }
  result.runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  (void)opts;
  return result;
}

namespace {

std::string ShellQuote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out += "'\\''";
    else out += c;
  }
  return out + "'";
}

std::filesystem::path FreshWorkDir() {
  std::random_device rd;
  const auto base = std::filesystem::temp_directory_path();
  for (int attempt = 0; attempt < 100; ++attempt) {
    auto dir = base / ("chemo-" + std::to_string(rd()));
    if (std::filesystem::create_directory(dir)) return dir;
  }
  throw std::runtime_error("cannot create a temporary directory");
}

std::string Slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

SolveResult SolveExternal(const MilpModel& model, const SolveOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  SolveResult result;
  auto fail = [&](std::string message) {
    result.status = SolveStatus::kBackendError;
    result.backend_error = std::move(message);
    result.runtime =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
  };
  if (opts.external_command.empty()) return fail("no external command configured");

  const bool own_dir = opts.work_dir.empty();
  const std::filesystem::path dir = own_dir ? FreshWorkDir() : opts.work_dir;
  std::filesystem::create_directories(dir);
  const auto mps = dir / "model.mps";
  const auto sol = dir / "solution.out";
  const auto err = dir / "stderr.txt";
  std::filesystem::remove(sol);
  WriteMps(model, mps);
  if (model.has_warm_start()) {
    std::ofstream warm(mps.string() + ".start");
    WriteSolution(model, model.warm_start(), warm);
  }
  std::ostringstream limit;
  limit << opts.time_limit;
  const std::string command = opts.external_command + " " + ShellQuote(mps.string()) + " " +
                              ShellQuote(sol.string()) + " " + limit.str() + " >" +
                              ShellQuote((dir / "stdout.txt").string()) + " 2>" +
                              ShellQuote(err.string());
  const int raw = std::system(command.c_str());
  const int code = raw == -1 ? -1 : (WIFEXITED(raw) ? WEXITSTATUS(raw) : -1);
  const std::string stderr_text = Slurp(err);
  auto cleanup = [&] {
    if (own_dir) std::filesystem::remove_all(dir);
  };

  if (code == 2) {
    cleanup();
    result.status = SolveStatus::kInfeasible;
    result.runtime =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
  }
  if (code != 0) {
    cleanup();
    return fail("external command exited with code " + std::to_string(code) + ": " +
                stderr_text);
  }
  SolutionFile file;
  try {
    file = ReadSolutionFile(sol, model);
  } catch (const std::exception& e) {
    cleanup();
    return fail(std::string("cannot read solution: ") + e.what());
  }
  cleanup();
  const bool maximize = model.sense() == Sense::kMaximize;
  const std::string status = file.status.value_or("optimal");
  if (status == "no_solution") {
    result.status = SolveStatus::kNoSolutionTimeLimit;
  } else {
    result.status =
        status == "optimal" ? SolveStatus::kOptimal : SolveStatus::kFeasibleTimeLimit;
    result.objective = model.Objective(file.values);
    result.assignment = std::move(file.values);
  }
  // Keep the seeded incumbent when the backend returns nothing better.
  if (result.status != SolveStatus::kOptimal && model.has_warm_start() &&
      model.IsFeasible(model.warm_start())) {
    const std::int64_t warm = model.Objective(model.warm_start());
    if (!result.assignment || (maximize ? warm > result.objective : warm < result.objective)) {
      result.status = SolveStatus::kFeasibleTimeLimit;
      result.objective = warm;
      result.assignment = model.warm_start();
    }
  }
  // Bound implied by variable domains, used when the backend has no dual information.
  std::int64_t trivial = 0;
  for (const Term& t : model.objective()) {
    const Variable& v = model.variable(t.var);
    const bool high = (t.coef > 0) == maximize;
    trivial += t.coef * (high ? v.upper : v.lower);
  }
  if (result.status == SolveStatus::kOptimal) {
    result.best_bound = result.objective;
  } else if (file.bound && std::isfinite(*file.bound)) {
    // Integral objective: the dual bound may be rounded inward.
    const double b = *file.bound;
    const auto rounded = static_cast<std::int64_t>(maximize ? std::floor(b + 1e-6)
                                                            : std::ceil(b - 1e-6));
    result.best_bound = maximize ? std::min(rounded, trivial) : std::max(rounded, trivial);
  } else {
    result.best_bound = trivial;
  }
  if (result.assignment) {
    result.best_bound = maximize ? std::max(result.best_bound, result.objective)
                                 : std::min(result.best_bound, result.objective);
  }
  result.runtime =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace chemo
