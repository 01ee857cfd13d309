#include "chemo/disaggregate.h"

#include <string>

namespace chemo {
namespace {

struct Job {
  int patient;
  int start;
  int duration;
};

// Sweeps slots 1..last of one day. `eligible(resource)` filters the pool.
template <typename Eligible>
void SweepDay(const std::vector<Job>& jobs, int last_slot, int pool_size, Eligible eligible,
              const std::string& what, std::vector<std::optional<int>>& out) {
  std::vector<int> holder(pool_size, -1);
  std::vector<int> release_at(pool_size, 0);
  for (int h = 1; h <= last_slot; ++h) {
    for (int r = 0; r < pool_size; ++r) {
      if (holder[r] >= 0 && release_at[r] == h) holder[r] = -1;
    }
    for (const Job& job : jobs) {
      if (job.start != h) continue;
      int chosen = -1;
      for (int r = 0; r < pool_size && chosen < 0; ++r) {
        if (holder[r] < 0 && eligible(r, job.patient)) chosen = r;
      }
      if (chosen < 0) {
        throw DisaggregationError("no free " + what + " at slot " + std::to_string(h) +
                                  " for patient index " + std::to_string(job.patient + 1));
      }
      holder[chosen] = job.patient;
      release_at[chosen] = h + job.duration;
      out[job.patient] = chosen;
    }
  }
  for (const Job& job : jobs) {
    if (!out[job.patient]) {
      throw DisaggregationError(what + " start slot " + std::to_string(job.start) +
                                " of patient index " + std::to_string(job.patient + 1) +
                                " lies outside the sweep window");
    }
  }
}

enum class Pool { kRooms, kChairs, kBeds };

std::vector<std::optional<int>> Assign(const AggregateSchedule& agg, const Instance& inst,
                                       Pool pool) {
  std::vector<std::optional<int>> out(inst.num_patients());
  if (static_cast<int>(agg.entries.size()) != inst.num_patients()) {
    throw DisaggregationError("aggregate schedule does not match the instance");
  }
  for (int t = 0; t < inst.days; ++t) {
    std::vector<Job> jobs;
    for (int p = 0; p < inst.num_patients(); ++p) {
      const auto& e = agg.entries[p];
      if (!e || e->day != t) continue;
      const Patient& pat = inst.patients[p];
      switch (pool) {
        case Pool::kRooms:
          jobs.push_back({p, e->visit_start, pat.visit});
          break;
        case Pool::kChairs:
          if (e->infusion_class == InfusionClass::kChair) {
            jobs.push_back({p, e->infusion_start, pat.infusion});
          }
          break;
        case Pool::kBeds:
          if (e->infusion_class == InfusionClass::kBed) {
            jobs.push_back({p, e->infusion_start, pat.infusion});
          }
          break;
      }
    }
    const std::string day = " on day " + std::to_string(t + 1);
    switch (pool) {
      case Pool::kRooms:
        SweepDay(
            jobs, inst.visit_slots, inst.rooms,
            [&](int r, int p) { return inst.RoomServes(r, inst.patients[p].pathology, t); },
            "room" + day, out);
        break;
      case Pool::kChairs:
        SweepDay(jobs, inst.slots_per_day, inst.chairs, [](int, int) { return true; },
                 "chair" + day, out);
        break;
      case Pool::kBeds:
        SweepDay(jobs, inst.slots_per_day, inst.beds, [](int, int) { return true; },
                 "bed" + day, out);
        break;
    }
  }
  return out;
}

}  // namespace

std::vector<std::optional<int>> AssignRooms(const AggregateSchedule& agg, const Instance& inst) {
  return Assign(agg, inst, Pool::kRooms);
}

std::vector<std::optional<int>> AssignChairs(const AggregateSchedule& agg,
                                             const Instance& inst) {
  return Assign(agg, inst, Pool::kChairs);
}

std::vector<std::optional<int>> AssignBeds(const AggregateSchedule& agg, const Instance& inst) {
  return Assign(agg, inst, Pool::kBeds);
}

CompleteSchedule Disaggregate(const AggregateSchedule& agg, const Instance& inst) {
  for (int p = 0; p < inst.num_patients(); ++p) {
    const auto& e = agg.entries[p];
    if (!e) continue;
    const Patient& pat = inst.patients[p];
    if (e->visit_start < 1 || e->visit_start + pat.visit - 1 > inst.visit_slots ||
        e->infusion_start < e->visit_start + pat.visit ||
        e->infusion_start + pat.infusion - 1 > inst.slots_per_day) {
      throw DisaggregationError("patient " + pat.id + " on day " + std::to_string(e->day + 1) +
                                " falls outside the visit or infusion window");
    }
  }
  const auto rooms = AssignRooms(agg, inst);
  const auto chairs = AssignChairs(agg, inst);
  const auto beds = AssignBeds(agg, inst);
  CompleteSchedule out = CompleteSchedule::Empty(inst);
  for (int p = 0; p < inst.num_patients(); ++p) {
    const auto& e = agg.entries[p];
    if (!e) continue;
    const bool chair = e->infusion_class == InfusionClass::kChair;
    out.entries[p] = Appointment{e->day, e->visit_start, *rooms[p], e->infusion_start,
                                 e->infusion_class, chair ? *chairs[p] : *beds[p]};
  }
  return out;
}

}  // namespace chemo
