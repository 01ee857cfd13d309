#ifndef CHEMO_BOUNDS_H_
#define CHEMO_BOUNDS_H_

#include <span>
#include <string>
#include <vector>

#include "chemo/formulations.h"
#include "chemo/instance.h"
#include "chemo/solver.h"

namespace chemo {

enum class ResourceSide { kChairs, kBeds };

// End-of-day emptiness profile of one resource kind. Chairs count only
// non-critical patients; beds count every patient.
struct EmptySlotProfile {
  // n[i][t]: resources left empty in the last i slots of day t (i = 0..|H|).
  std::vector<std::vector<int>> n;
  // l[ell][r][t]: patients with infusion length ell who can be visited in
  // room r on day t (ell = 1..max f; index 0 unused).
  std::vector<std::vector<std::vector<int>>> l;
  // m[ell][r][t][i]: of those, how many can end their day leaving i slots.
  std::vector<std::vector<std::vector<std::vector<int>>>> m;
};

EmptySlotProfile ComputeEmptySlotProfile(const Instance& inst, std::span<const int> v2,
                                         ResourceSide side);

enum class BoundMethod { kUB1, kUB2, kTrivial };
enum class BoundStatus { kExact, kTimeLimit };

struct BoundResult {
  int value = 0;
  BoundMethod method = BoundMethod::kTrivial;
  BoundStatus status = BoundStatus::kExact;
  double runtime = 0.0;
};

const char* BoundMethodName(BoundMethod method);
std::string BoundToJson(const BoundResult& bound);

// Multiple knapsack: one knapsack per chair of capacity
// |T| * (|H| - min non-critical visit).
BuiltModel BuildUB1(const Instance& inst);
// Per-day chair/bed assignment with start-of-day and end-of-day capacity
// reductions; total assigned patients fixed to v1.
BuiltModel BuildUB2(const Instance& inst, int v1, std::span<const int> v2);

// Number of non-critical patients.
BoundResult TrivialBound(const Instance& inst);
// Both return the solver's proven bound when the limit is hit, clamped to
// the trivial bound. Ub2 throws std::runtime_error when its model is
// infeasible, which signals (v1, v2) inconsistent with the instance.
BoundResult Ub1(const Instance& inst, const SolveOptions& opts);
BoundResult Ub2(const Instance& inst, int v1, std::span<const int> v2, const SolveOptions& opts);

}  // namespace chemo

#endif  // CHEMO_BOUNDS_H_
