#ifndef CHEMO_FORMULATIONS_H_
#define CHEMO_FORMULATIONS_H_

#include <optional>
#include <span>
#include <vector>

#include "chemo/instance.h"
#include "chemo/model.h"
#include "chemo/schedule.h"

namespace chemo {

struct BuiltModel {
  MilpModel model;
  VarMap vars;
};

// Complete formulation over alpha/beta/gammaB/gammaS maximizing treated
// patients. Room variables exist only where the MCP allows the patient's
// pathology.
BuiltModel BuildF1Complete(const Instance& inst);

// Aggregate formulations. AF1 maximizes treated patients; AF2 adds
// F1 >= v1 and minimizes the sum of per-day maximum waits through one
// integer W_t per day; AF3 adds F1 >= v1 and per-(patient, day) waiting caps
// and maximizes chair infusions.
BuiltModel BuildAF1(const Instance& inst);
BuiltModel BuildAF2(const Instance& inst, int v1);
BuiltModel BuildAF3(const Instance& inst, int v1, std::span<const int> v2);

enum class DayStage { kP2, kP3 };

// Aggregate model restricted to `roster` on `day` with F1 >= |roster|.
// kP2 minimizes W_day; kP3 maximizes chairs, capping waits at v2_day when
// given.
BuiltModel BuildSingleDay(const Instance& inst, int day, std::span<const int> roster,
                          DayStage stage, std::optional<int> v2_day);

struct KOptParams {
  int k_x = 20;
  int k_y = 20;
  int k_zB = 20;
  int k_zS = 20;
  double iteration_time_limit = 60.0;
  double overall_time_limit = 600.0;
};

// Appends the four Hamming-ball rows around `current`.
void AddKOptConstraints(BuiltModel& built, const AggregateSchedule& current,
                        const KOptParams& k);

// Conversions between aggregate/complete schedules and model assignments.
AggregateSchedule ExtractAggregate(const Instance& inst, const VarMap& vars,
                                   std::span<const std::int64_t> values);
// Sets x/y/zB/zS for the treated patients and W_t to the daily maximum wait.
// Throws std::invalid_argument when the schedule uses an index the model
// does not materialize.
std::vector<std::int64_t> AggregateToAssignment(const Instance& inst, const BuiltModel& built,
                                                const AggregateSchedule& agg);
CompleteSchedule ExtractComplete(const Instance& inst, const VarMap& vars,
                                 std::span<const std::int64_t> values);
std::vector<std::int64_t> CompleteToAssignment(const Instance& inst, const BuiltModel& built,
                                               const CompleteSchedule& schedule);

// F2^t evaluated literally on the aggregate variables of an assignment:
// max over patients of sum_h h*(y+zB+zS) - sum_h (h+v) x, floored at 0.
std::vector<std::int64_t> WaitingFromAssignment(const Instance& inst, const VarMap& vars,
                                                std::span<const std::int64_t> values);

}  // namespace chemo

#endif  // CHEMO_FORMULATIONS_H_
