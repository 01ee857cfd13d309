#ifndef CHEMO_LEXICO_H_
#define CHEMO_LEXICO_H_

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "chemo/bounds.h"
#include "chemo/formulations.h"
#include "chemo/instance.h"
#include "chemo/schedule.h"
#include "chemo/solver.h"

namespace chemo {

// Seconds per stage.
struct StageLimits {
  double af1 = 300;
  double af2_day = 60;
  double af2_warm = 300;
  double p3_day = 90;
  double kopt_iter = 60;
  double p3_overall = 600;  // per-day chair problems plus the k-opt search
};

struct LexicoOptions {
  SolveOptions solve;  // backend, gap, seed; time_limit is set per stage
  StageLimits limits;
  KOptParams kopt;     // radii; time limits are taken from `limits`
  // Re-solve the whole chair model from the k-opt result at the end.
  bool final_warm_solve = false;
  // Per-day subproblems solved concurrently when > 1. Results are merged by
  // day index, so the outcome does not depend on completion order.
  int threads = 1;
};

struct StageLog {
  std::string stage;  // "AF1", "P2-day", "AF2-warm", "P3-day", "kopt", "AF3-warm"
  std::optional<int> day;        // 0-based
  std::optional<int> iteration;  // k-opt only
  std::optional<bool> accepted;  // k-opt only
  SolveStatus status = SolveStatus::kOptimal;
  std::int64_t objective = 0;
  std::int64_t bound = 0;
  double runtime = 0.0;
};

std::string StageLogToJson(const StageLog& log);

// Raised when a stage cannot produce a usable point; carries the logs
// gathered so far.
class LexicoError : public std::runtime_error {
 public:
  LexicoError(const std::string& what, std::vector<StageLog> logs, bool backend)
      : std::runtime_error(what), logs_(std::move(logs)), backend_(backend) {}
  const std::vector<StageLog>& logs() const { return logs_; }
  bool backend_failure() const { return backend_; }

 private:
  std::vector<StageLog> logs_;
  bool backend_;
};

struct Stage1Result {
  int v1 = 0;
  bool optimal = false;
  AggregateSchedule schedule;
  std::vector<StageLog> logs;
};

struct Procedure1Result {
  int v1 = 0;
  std::vector<int> v2;
  AggregateSchedule schedule;
  std::vector<StageLog> logs;
};

struct KOptResult {
  AggregateSchedule schedule;
  // Chair counts of the start point and of every accepted move.
  std::vector<int> trace;
  std::vector<StageLog> logs;
};

struct LexicoOutcome {
  int v1 = 0;
  std::vector<int> v2;
  int phi3 = 0;
  int phi3_before_kopt = 0;
  std::vector<int> kopt_trace;
  AggregateSchedule aggregate;
  CompleteSchedule schedule;
  std::vector<StageLog> logs;
  std::optional<BoundResult> bound;
};

Stage1Result RunStage1(const Instance& inst, const LexicoOptions& opts);
Procedure1Result RunProcedure1(const Instance& inst, const LexicoOptions& opts);
LexicoOutcome RunProcedure2(const Instance& inst, const LexicoOptions& opts);

// Steepest-ascent search over k-opt balls of the chair model. Accepts only
// strict improvements; stops on the first non-improving iteration or when
// `overall_time_limit` seconds have elapsed.
KOptResult KOptSearch(const Instance& inst, const AggregateSchedule& start, int v1,
                      std::span<const int> v2, const KOptParams& kopt,
                      const SolveOptions& solve);

}  // namespace chemo

#endif  // CHEMO_LEXICO_H_
