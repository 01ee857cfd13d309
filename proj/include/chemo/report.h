#ifndef CHEMO_REPORT_H_
#define CHEMO_REPORT_H_

#include <string>
#include <vector>

#include "chemo/instance.h"
#include "chemo/schedule.h"

namespace chemo {

struct GroupTally {
  std::string group;
  int total = 0;
  int unscheduled = 0;
  double percent = 0.0;  // unscheduled / total * 100, 0 for empty groups
};

struct MetricsRecord {
  int phi1 = 0;
  std::vector<int> phi2;  // per day
  int phi2_total = 0;
  int phi3 = 0;
  int unscheduled_total = 0;
  std::vector<GroupTally> by_pathology;
  GroupTally critical;
  GroupTally non_critical;
};

// Requires a valid schedule (throws std::invalid_argument otherwise).
MetricsRecord Evaluate(const CompleteSchedule& schedule, const Instance& inst);

// Replays every day slot by slot and reports each broken rule: windows,
// precedence, room pathology, critical-in-bed, resource ranges, and the
// first slot at which a room, chair or bed is held by two patients.
// One appointment per patient and a single day per appointment are implied
// by the CompleteSchedule representation.
std::vector<Violation> ValidateSchedule(const CompleteSchedule& schedule, const Instance& inst);

// Per-day maximum wait measured on the replayed timeline: the gap between the
// slot at which a patient leaves the exam room and the slot at which the
// infusion resource is taken.
std::vector<int> SimulateWaiting(const CompleteSchedule& schedule, const Instance& inst);

enum class ReportFormat { kJson, kCsv, kGantt };

std::string Emit(const CompleteSchedule& schedule, const MetricsRecord& metrics,
                 const Instance& inst, ReportFormat format);

std::string MetricsToJson(const MetricsRecord& metrics);
// Reads the "appointments" array of Emit(..., kJson). Throws
// std::invalid_argument on malformed input or unknown patient ids.
CompleteSchedule ScheduleFromJson(const std::string& text, const Instance& inst);

}  // namespace chemo

#endif  // CHEMO_REPORT_H_
