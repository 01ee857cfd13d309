#ifndef CHEMO_INSTANCE_H_
#define CHEMO_INSTANCE_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace chemo {

// Conventions used across the library:
//   * patients, rooms, chairs and beds are 0-based indices internally and
//     1-based in every external representation (names, files, reports);
//   * days are 0-based internally, 1-based externally;
//   * time slots are 1-based everywhere (h in 1..|H|), so that slot
//     arithmetic such as "visit ends at h + v - 1" reads naturally.

struct Patient {
  std::string id;
  int pathology = 0;  // index into Instance::pathologies
  int visit = 1;      // v_p, slots
  int infusion = 1;   // f_p, slots
  bool critical = false;

  bool operator==(const Patient&) const = default;
};

// One planning week. mcp[r][k][t] == 1 iff room r serves pathology k on day t.
struct Instance {
  int days = 0;
  int slots_per_day = 0;  // |H|
  int visit_slots = 0;    // |H_V|
  std::vector<std::string> pathologies;
  int rooms = 0;
  int beds = 0;
  int chairs = 0;
  std::vector<std::vector<std::vector<int>>> mcp;
  std::vector<Patient> patients;

  int num_patients() const { return static_cast<int>(patients.size()); }

  bool RoomServes(int room, int pathology, int day) const {
    return mcp[room][pathology][day] != 0;
  }
  // Number of rooms devoted to `pathology` on `day` (sum_r w_rkt).
  int RoomsFor(int pathology, int day) const;
  // True iff the patient's pathology has at least one room on `day`.
  bool Treatable(int patient, int day) const {
    return RoomsFor(patients[patient].pathology, day) > 0;
  }
  int NumCritical() const;
  int NumNonCritical() const { return num_patients() - NumCritical(); }

  bool operator==(const Instance&) const = default;
};

struct Violation {
  std::string entity;  // e.g. "room 1 day 1", "patient p3"
  std::string rule;    // short machine-friendly rule id
  std::string message;
};

// Empty result iff every structural invariant holds and every patient can be
// scheduled in isolation.
std::vector<Violation> ValidateInstance(const Instance& inst);

// Raised by LoadInstance / InstanceFromJson.
class InstanceFormatError : public std::runtime_error {
 public:
  InstanceFormatError(const std::string& what, std::vector<std::string> fields)
      : std::runtime_error(what), fields_(std::move(fields)) {}
  const std::vector<std::string>& fields() const { return fields_; }

 private:
  std::vector<std::string> fields_;
};

// Canonical JSON text (fixed field order, 2-space indent, trailing newline).
std::string InstanceToJson(const Instance& inst);
Instance InstanceFromJson(const std::string& text);
void SaveInstance(const Instance& inst, const std::filesystem::path& path);
Instance LoadInstance(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Synthetic generator.

struct InfusionRange {
  int min_slots = 6;
  int max_slots = 24;
};

struct GeneratorParams {
  std::uint64_t seed = 1;
  int total_patients = 614;
  double critical_fraction = 0.2848;
  // Pathology names in index order with their (unnormalized) weights.
  std::vector<std::pair<std::string, double>> pathology_shares;
  std::map<std::string, int> visit_duration_by_group;
  std::map<std::string, InfusionRange> infusion_slot_range_by_group;
  int days = 5;
  int slots_per_day = 54;
  int visit_slots = 36;
  int rooms = 6;
  int beds = 27;
  int chairs = 26;
  // Rooms devoted to the first pathology (hematology) every day; the other
  // rooms rotate among the remaining groups. Ignored when `mcp` is set.
  int dedicated_rooms = 3;
  std::vector<std::vector<std::vector<int>>> mcp;
};

// Week-scale defaults: seven macro groups with the average weekly mix,
// hematology visits of 2 slots and 1 slot otherwise, infusions on [6, 24].
GeneratorParams DefaultGeneratorParams();

// Deterministic for a fixed parameter set. Throws std::invalid_argument on
// inconsistent parameters.
Instance Generate(const GeneratorParams& params);

// Round-robin MCP used by Generate when params.mcp is empty.
std::vector<std::vector<std::vector<int>>> DefaultMcp(const GeneratorParams& params);

}  // namespace chemo

#endif  // CHEMO_INSTANCE_H_
