// Shared test fixtures: the canonical micro instance and a seeded generator
// of tiny random instances small enough for the enumeration oracle.
#ifndef CHEMO_TESTS_FIXTURES_H_
#define CHEMO_TESTS_FIXTURES_H_

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "chemo/instance.h"
#include "chemo/schedule.h"

namespace chemo::testing {

// 1 day, 6 slots (visits in 1..4), one pathology, one room, one chair and
// one bed; p1 non-critical (v=1, f=2), p2 critical (v=1, f=3).
inline Instance Micro1() {
  Instance inst;
  inst.days = 1;
  inst.slots_per_day = 6;
  inst.visit_slots = 4;
  inst.pathologies = {"HE"};
  inst.rooms = 1;
  inst.beds = 1;
  inst.chairs = 1;
  inst.mcp = {{{1}}};
  inst.patients = {{"p1", 0, 1, 2, false}, {"p2", 0, 1, 3, true}};
  return inst;
}

// The lexicographic optimum of Micro1 found by hand: p1 visits at slot 1 and
// sits on the chair from slot 2; p2 visits at slot 2 and lies in the bed
// from slot 3.
inline CompleteSchedule Micro1Optimum() {
  CompleteSchedule s;
  s.entries = {Appointment{0, 1, 0, 2, InfusionClass::kChair, 0},
               Appointment{0, 2, 0, 3, InfusionClass::kBed, 0}};
  return s;
}

struct TinyShape {
  int max_days = 2;
  int min_slots = 6;
  int max_slots = 12;
  int max_pathologies = 2;
  int max_rooms = 2;
  int max_chairs = 2;
  int max_beds = 2;
  int min_patients = 1;
  int max_patients = 8;
  int max_infusion = 5;
};

// Deterministic in `seed`; every returned instance passes ValidateInstance.
inline Instance TinyInstance(std::uint64_t seed, const TinyShape& shape = {}) {
  std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + 17);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  while (true) {
    Instance inst;
    inst.days = pick(1, shape.max_days);
    inst.slots_per_day = pick(shape.min_slots, shape.max_slots);
    inst.visit_slots = pick(2, inst.slots_per_day - 2);
    const int num_k = pick(1, shape.max_pathologies);
    for (int k = 0; k < num_k; ++k) inst.pathologies.push_back("K" + std::to_string(k + 1));
    inst.rooms = pick(1, shape.max_rooms);
    inst.chairs = pick(0, shape.max_chairs);
    inst.beds = pick(inst.chairs == 0 ? 1 : 0, shape.max_beds);
    inst.mcp.assign(inst.rooms, std::vector<std::vector<int>>(num_k, std::vector<int>(inst.days, 0)));
    for (int r = 0; r < inst.rooms; ++r) {
      for (int t = 0; t < inst.days; ++t) {
        const int k = pick(0, num_k);  // num_k means "closed"
        if (k < num_k) inst.mcp[r][k][t] = 1;
      }
    }
    const int n = pick(shape.min_patients, shape.max_patients);
    for (int p = 0; p < n; ++p) {
      Patient pat;
      pat.id = "p" + std::to_string(p + 1);
      pat.pathology = pick(0, num_k - 1);
      pat.visit = pick(1, std::min(2, inst.visit_slots));
      pat.infusion = pick(1, std::min(shape.max_infusion, inst.slots_per_day - pat.visit));
      pat.critical = pick(0, 9) < 3;
      inst.patients.push_back(pat);
    }
    if (ValidateInstance(inst).empty()) return inst;
  }
}

// Random aggregate schedule that respects every aggregate capacity, built by
// placing patients one at a time against explicit per-slot counters. Each
// patient is attempted with probability 3/4 and gets a few random tries.
inline AggregateSchedule SampleFeasibleAggregate(const Instance& inst, std::mt19937_64& rng) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  const int H = inst.slots_per_day;
  const int num_k = static_cast<int>(inst.pathologies.size());
  // visits[t][k][h], chairs[t][h], beds[t][h]
  std::vector<std::vector<std::vector<int>>> visits(
      inst.days, std::vector<std::vector<int>>(num_k, std::vector<int>(H + 2, 0)));
  std::vector<std::vector<int>> chairs(inst.days, std::vector<int>(H + 2, 0));
  std::vector<std::vector<int>> beds = chairs;
  auto rooms_for = [&](int k, int t) {
    int n = 0;
    for (int r = 0; r < inst.rooms; ++r) n += inst.mcp[r][k][t];
    return n;
  };
  AggregateSchedule agg = AggregateSchedule::Empty(inst);
  for (int p = 0; p < inst.num_patients(); ++p) {
    if (pick(0, 3) == 0) continue;
    const Patient& pat = inst.patients[p];
    for (int attempt = 0; attempt < 6; ++attempt) {
      const int t = pick(0, inst.days - 1);
      const int cap = rooms_for(pat.pathology, t);
      if (cap == 0 || pat.visit > inst.visit_slots) continue;
      const int h = pick(1, inst.visit_slots - pat.visit + 1);
      const int g_lo = h + pat.visit;
      const int g_hi = H - pat.infusion + 1;
      if (g_lo > g_hi) continue;
      const int g = pick(g_lo, g_hi);
      const bool chair = !pat.critical && pick(0, 1) == 1;
      auto& pool = chair ? chairs[t] : beds[t];
      const int pool_cap = chair ? inst.chairs : inst.beds;
      bool fits = true;
      for (int s = h; s < h + pat.visit; ++s) fits &= visits[t][pat.pathology][s] < cap;
      for (int s = g; s < g + pat.infusion; ++s) fits &= pool[s] < pool_cap;
      if (!fits) continue;
      for (int s = h; s < h + pat.visit; ++s) ++visits[t][pat.pathology][s];
      for (int s = g; s < g + pat.infusion; ++s) ++pool[s];
      agg.entries[p] = AggregateEntry{t, h, g, chair ? InfusionClass::kChair : InfusionClass::kBed};
      break;
    }
  }
  return agg;
}

// Per-day maximum of (infusion start - visit end - 1) over treated patients,
// 0 for days without any.
inline std::vector<int> ReferenceDailyWaits(const AggregateSchedule& agg, const Instance& inst) {
  std::vector<int> out(inst.days, 0);
  for (int p = 0; p < inst.num_patients(); ++p) {
    const auto& e = agg.entries[p];
    if (!e) continue;
    out[e->day] = std::max(out[e->day], e->infusion_start - (e->visit_start + inst.patients[p].visit));
  }
  return out;
}

inline int ReferenceChairs(const AggregateSchedule& agg) {
  int n = 0;
  for (const auto& e : agg.entries) n += e && e->infusion_class == InfusionClass::kChair;
  return n;
}

}  // namespace chemo::testing

#endif  // CHEMO_TESTS_FIXTURES_H_
