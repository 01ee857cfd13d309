#include "chemo/schedule.h"

#include <algorithm>
#include <numeric>
#include <string>

namespace chemo {

int AggregateSchedule::Treated() const {
  return static_cast<int>(std::count_if(entries.begin(), entries.end(),
                                        [](const auto& e) { return e.has_value(); }));
}

int AggregateSchedule::ChairCount() const {
  return static_cast<int>(std::count_if(entries.begin(), entries.end(), [](const auto& e) {
    return e.has_value() && e->infusion_class == InfusionClass::kChair;
  }));
}

int CompleteSchedule::Treated() const {
  return static_cast<int>(std::count_if(entries.begin(), entries.end(),
                                        [](const auto& e) { return e.has_value(); }));
}

AggregateSchedule Aggregate(const CompleteSchedule& schedule) {
  AggregateSchedule agg;
  agg.entries.reserve(schedule.entries.size());
  for (const auto& e : schedule.entries) {
    if (!e) {
      agg.entries.emplace_back();
      continue;
    }
    agg.entries.push_back(AggregateEntry{e->day, e->visit_start, e->infusion_start,
                                         e->resource_type});
  }
  return agg;
}

std::vector<Violation> ValidateAggregate(const AggregateSchedule& agg, const Instance& inst) {
  std::vector<Violation> out;
  if (static_cast<int>(agg.entries.size()) != inst.num_patients()) {
    out.push_back({"schedule", "size", "one entry per patient expected"});
    return out;
  }
  const int num_k = static_cast<int>(inst.pathologies.size());
  const int H = inst.slots_per_day;
  // usage[t][h] per resource kind; rooms per pathology.
  std::vector<std::vector<std::vector<int>>> visits(
      inst.days, std::vector<std::vector<int>>(num_k, std::vector<int>(H + 2, 0)));
  std::vector<std::vector<int>> chairs(inst.days, std::vector<int>(H + 2, 0));
  std::vector<std::vector<int>> beds(inst.days, std::vector<int>(H + 2, 0));

  for (int p = 0; p < inst.num_patients(); ++p) {
    const auto& e = agg.entries[p];
    if (!e) continue;
    const Patient& pat = inst.patients[p];
    const std::string who = "patient " + pat.id;
    if (e->day < 0 || e->day >= inst.days) {
      out.push_back({who, "day", "day out of range"});
      continue;
    }
    if (!inst.Treatable(p, e->day)) {
      out.push_back({who, "pathology-day", "no room serves the pathology that day"});
    }
    if (e->visit_start < 1 || e->visit_start + pat.visit - 1 > inst.visit_slots) {
      out.push_back({who, "visit-window", "visit outside the visiting window"});
      continue;
    }
    if (e->infusion_start < 1 || e->infusion_start + pat.infusion - 1 > H) {
      out.push_back({who, "infusion-window", "infusion ends after closing"});
      continue;
    }
    if (e->infusion_start < e->visit_start + pat.visit) {
      out.push_back({who, "precedence", "infusion starts before the visit ends"});
    }
    if (pat.critical && e->infusion_class != InfusionClass::kBed) {
      out.push_back({who, "critical-bed", "critical patient must use a bed"});
    }
    for (int h = e->visit_start; h < e->visit_start + pat.visit; ++h) {
      ++visits[e->day][pat.pathology][h];
    }
    auto& inf = e->infusion_class == InfusionClass::kChair ? chairs : beds;
    for (int h = e->infusion_start; h < e->infusion_start + pat.infusion; ++h) {
      ++inf[e->day][h];
    }
  }
  for (int t = 0; t < inst.days; ++t) {
    for (int h = 1; h <= H; ++h) {
      for (int k = 0; k < num_k; ++k) {
        if (visits[t][k][h] > inst.RoomsFor(k, t)) {
          out.push_back({"day " + std::to_string(t + 1) + " slot " + std::to_string(h),
                         "room-capacity",
                         "too many concurrent visits for " + inst.pathologies[k]});
        }
      }
      if (chairs[t][h] > inst.chairs) {
        out.push_back({"day " + std::to_string(t + 1) + " slot " + std::to_string(h),
                       "chair-capacity", "too many concurrent chair infusions"});
      }
      if (beds[t][h] > inst.beds) {
        out.push_back({"day " + std::to_string(t + 1) + " slot " + std::to_string(h),
                       "bed-capacity", "too many concurrent bed infusions"});
      }
    }
  }
  return out;
}

std::vector<int> DailyMaxWait(const AggregateSchedule& agg, const Instance& inst) {
  std::vector<int> wait(inst.days, 0);
  for (int p = 0; p < static_cast<int>(agg.entries.size()); ++p) {
    const auto& e = agg.entries[p];
    if (!e) continue;
    const int w = e->infusion_start - (e->visit_start + inst.patients[p].visit);
    wait[e->day] = std::max(wait[e->day], w);
  }
  return wait;
}

AggregateSchedule RestrictToDay(const AggregateSchedule& agg, int day) {
  AggregateSchedule out = agg;
  for (auto& e : out.entries) {
    if (e && e->day != day) e.reset();
  }
  return out;
}

std::vector<std::vector<int>> DailyRosters(const AggregateSchedule& agg, int days) {
  std::vector<std::vector<int>> rosters(days);
  for (int p = 0; p < static_cast<int>(agg.entries.size()); ++p) {
    if (agg.entries[p]) rosters[agg.entries[p]->day].push_back(p);
  }
  return rosters;
}

AggregateSchedule GreedySchedule(const Instance& inst) {
  AggregateSchedule out = AggregateSchedule::Empty(inst);
  const int H = inst.slots_per_day;
  const int K = static_cast<int>(inst.pathologies.size());
  // Usage counters indexed [day][slot] (slot 1-based).
  std::vector<std::vector<std::vector<int>>> room(
      K, std::vector<std::vector<int>>(inst.days, std::vector<int>(H + 2, 0)));
  std::vector<std::vector<int>> chair(inst.days, std::vector<int>(H + 2, 0));
  std::vector<std::vector<int>> bed = chair;

  auto fits = [](const std::vector<int>& used, int from, int len, int cap) {
    for (int s = from; s < from + len; ++s) {
      if (used[s] >= cap) return false;
    }
    return true;
  };
  auto take = [](std::vector<int>& used, int from, int len) {
    for (int s = from; s < from + len; ++s) ++used[s];
  };

  std::vector<int> order(inst.num_patients());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const Patient& pa = inst.patients[a];
    const Patient& pb = inst.patients[b];
    return pa.visit + pa.infusion < pb.visit + pb.infusion;
  });

  for (int p : order) {
    const Patient& pat = inst.patients[p];
    const int max_wait = H - pat.visit - pat.infusion;
    bool placed = false;
    for (int w = 0; w <= max_wait && !placed; ++w) {
      for (int t = 0; t < inst.days && !placed; ++t) {
        const int rooms = inst.RoomsFor(pat.pathology, t);
        if (rooms == 0) continue;
        for (int h = 1; h + pat.visit - 1 <= inst.visit_slots && !placed; ++h) {
          const int g = h + pat.visit + w;
          if (g + pat.infusion - 1 > H) break;
          if (!fits(room[pat.pathology][t], h, pat.visit, rooms)) continue;
          InfusionClass cls;
          if (!pat.critical && fits(chair[t], g, pat.infusion, inst.chairs)) {
            cls = InfusionClass::kChair;
            take(chair[t], g, pat.infusion);
          } else if (fits(bed[t], g, pat.infusion, inst.beds)) {
            cls = InfusionClass::kBed;
            take(bed[t], g, pat.infusion);
          } else {
            continue;
          }
          take(room[pat.pathology][t], h, pat.visit);
          out.entries[p] = AggregateEntry{t, h, g, cls};
          placed = true;
        }
      }
    }
  }
  return out;
}

}  // namespace chemo
