#ifndef CHEMO_DISAGGREGATE_H_
#define CHEMO_DISAGGREGATE_H_

#include <optional>
#include <stdexcept>
#include <vector>

#include "chemo/instance.h"
#include "chemo/schedule.h"

namespace chemo {

// Raised when an aggregate schedule breaks its capacity or window
// invariants, so that some patient finds no free resource.
class DisaggregationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Per patient: the 0-based resource index, empty for patients that do not
// use that resource kind. Each day is swept slot by slot; resources whose
// holder finishes at the current slot are released before the patients
// starting at that slot take the lowest-index free resource.
std::vector<std::optional<int>> AssignRooms(const AggregateSchedule& agg, const Instance& inst);
std::vector<std::optional<int>> AssignChairs(const AggregateSchedule& agg, const Instance& inst);
// Critical patients and bed-class non-critical patients share the bed pool.
std::vector<std::optional<int>> AssignBeds(const AggregateSchedule& agg, const Instance& inst);

CompleteSchedule Disaggregate(const AggregateSchedule& agg, const Instance& inst);

}  // namespace chemo

#endif  // CHEMO_DISAGGREGATE_H_
