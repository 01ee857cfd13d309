#ifndef CHEMO_SCHEDULE_H_
#define CHEMO_SCHEDULE_H_

#include <optional>
#include <vector>

#include "chemo/instance.h"

namespace chemo {

enum class InfusionClass { kBed, kChair };

// Day + start slots of one treated patient, resource identities collapsed.
struct AggregateEntry {
  int day = 0;  // 0-based
  int visit_start = 1;
  int infusion_start = 1;
  InfusionClass infusion_class = InfusionClass::kBed;

  bool operator==(const AggregateEntry&) const = default;
};

// One optional entry per patient (indexed like Instance::patients).
struct AggregateSchedule {
  std::vector<std::optional<AggregateEntry>> entries;

  static AggregateSchedule Empty(const Instance& inst) {
    return AggregateSchedule{std::vector<std::optional<AggregateEntry>>(inst.num_patients())};
  }
  int Treated() const;
  int ChairCount() const;

  bool operator==(const AggregateSchedule&) const = default;
};

struct Appointment {
  int day = 0;  // 0-based
  int visit_start = 1;
  int room = 0;  // 0-based
  int infusion_start = 1;
  InfusionClass resource_type = InfusionClass::kBed;
  int resource = 0;  // 0-based bed or chair index

  bool operator==(const Appointment&) const = default;
};

struct CompleteSchedule {
  std::vector<std::optional<Appointment>> entries;

  static CompleteSchedule Empty(const Instance& inst) {
    return CompleteSchedule{std::vector<std::optional<Appointment>>(inst.num_patients())};
  }
  int Treated() const;

  bool operator==(const CompleteSchedule&) const = default;
};

// Collapses resource identities (x := sum_r alpha, ...).
AggregateSchedule Aggregate(const CompleteSchedule& schedule);

// Checks the aggregate invariants: windows, same-day precedence, class vs.
// criticality, and per-slot capacities (rooms per pathology, chairs, beds).
std::vector<Violation> ValidateAggregate(const AggregateSchedule& agg, const Instance& inst);

// Per-day maximum of (infusion start - visit end), 0 for days without
// treated patients.
std::vector<int> DailyMaxWait(const AggregateSchedule& agg, const Instance& inst);

// Keeps only the entries scheduled on `day`.
AggregateSchedule RestrictToDay(const AggregateSchedule& agg, int day);

// Patients treated on each day, in patient order.
std::vector<std::vector<int>> DailyRosters(const AggregateSchedule& agg, int days);

// Constructive feasible schedule: patients in order of increasing session
// length take the placement with the smallest wait (then earliest day and
// visit slot), a chair before a bed for non-critical patients.
AggregateSchedule GreedySchedule(const Instance& inst);

}  // namespace chemo

#endif  // CHEMO_SCHEDULE_H_
