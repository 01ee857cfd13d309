#include "chemo/oracle.h"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <string>

namespace chemo {
namespace {

using Mask = std::uint32_t;

// Bits a..b (slots are 1-based bit positions).
Mask Span(int a, int b) { return ((Mask{1} << (b + 1)) - 1) ^ ((Mask{1} << a) - 1); }

struct Score {
  int treated = -1;
  int wait = 0;
  int chairs = 0;
};

bool Better(const Score& a, const Score& b) {
  if (a.treated != b.treated) return a.treated > b.treated;
  if (a.wait != b.wait) return a.wait < b.wait;
  return a.chairs > b.chairs;
}

class Enumerator {
 public:
  explicit Enumerator(const Instance& inst) : inst_(inst) {
    rooms_.assign(inst.days, std::vector<Mask>(inst.rooms, 0));
    chairs_.assign(inst.days, std::vector<Mask>(inst.chairs, 0));
    beds_.assign(inst.days, std::vector<Mask>(inst.beds, 0));
    day_wait_.assign(inst.days, 0);
    current_ = CompleteSchedule::Empty(inst);
  }

  LexicoOptimum Run() {
    Visit(0);
    LexicoOptimum out;
    out.v1 = best_score_.treated;
    out.phi3 = best_score_.chairs;
    out.schedule = best_;
    out.v2.assign(inst_.days, 0);
    for (int p = 0; p < inst_.num_patients(); ++p) {
      const auto& e = best_.entries[p];
      if (!e) continue;
      const int w = e->infusion_start - e->visit_start - inst_.patients[p].visit;
      out.v2[e->day] = std::max(out.v2[e->day], w);
    }
    return out;
  }

 private:
  // True iff patient p fits somewhere given current occupancy, ignoring the
  // other unplaced patients.
  bool Placeable(int p) const {
    const Patient& pat = inst_.patients[p];
    const int H = inst_.slots_per_day;
    for (int t = 0; t < inst_.days; ++t) {
      for (int h = 1; h + pat.visit - 1 <= inst_.visit_slots; ++h) {
        const Mask vm = Span(h, h + pat.visit - 1);
        bool room = false;
        for (int r = 0; r < inst_.rooms && !room; ++r) {
          room = inst_.RoomServes(r, pat.pathology, t) && (rooms_[t][r] & vm) == 0;
        }
        if (!room) continue;
        for (int g = h + pat.visit; g + pat.infusion - 1 <= H; ++g) {
          const Mask im = Span(g, g + pat.infusion - 1);
          for (Mask b : beds_[t]) {
            if ((b & im) == 0) return true;
          }
          if (!pat.critical) {
            for (Mask s : chairs_[t]) {
              if ((s & im) == 0) return true;
            }
          }
        }
      }
    }
    return false;
  }

  // Free chair slot-units usable by infusions (an infusion never starts at
  // slot 1 because a visit precedes it).
  int FreeChairUnits() const {
    const int H = inst_.slots_per_day;
    int units = 0;
    for (int t = 0; t < inst_.days; ++t) {
      for (Mask s : chairs_[t]) units += H - 1 - std::popcount(s & Span(2, H));
    }
    return units;
  }

  Score Optimistic(int next) const {
    Score s;
    std::vector<int> chair_candidates;
    int placeable = 0;
    for (int p = next; p < inst_.num_patients(); ++p) {
      if (!Placeable(p)) continue;
      ++placeable;
      if (!inst_.patients[p].critical) chair_candidates.push_back(inst_.patients[p].infusion);
    }
    s.treated = treated_ + placeable;
    s.wait = std::accumulate(day_wait_.begin(), day_wait_.end(), 0);
    std::sort(chair_candidates.begin(), chair_candidates.end());
    int units = FreeChairUnits();
    int extra = 0;
    for (int f : chair_candidates) {
      if (f > units) break;
      units -= f;
      ++extra;
    }
    s.chairs = chairs_used_ + extra;
    return s;
  }

  bool Prunable(int next) const {
    if (best_score_.treated < 0) return false;
    const Score bound = Optimistic(next);
    if (bound.treated != best_score_.treated) return bound.treated < best_score_.treated;
    if (bound.wait != best_score_.wait) return bound.wait > best_score_.wait;
    return bound.chairs <= best_score_.chairs;
  }

  void Record() {
    Score s{treated_, std::accumulate(day_wait_.begin(), day_wait_.end(), 0), chairs_used_};
    if (best_score_.treated < 0 || Better(s, best_score_)) {
      best_score_ = s;
      best_ = current_;
    }
  }

  // Lowest-index resources first; among entirely idle resources only the
  // first is tried, since idle resources of the same kind are interchangeable.
  template <typename Fn>
  void ForEachResource(std::vector<Mask>& pool, Mask need, Fn&& fn) {
    bool idle_tried = false;
    for (int i = 0; i < static_cast<int>(pool.size()); ++i) {
      if (pool[i] == 0) {
        if (idle_tried) continue;
        idle_tried = true;
      }
      if ((pool[i] & need) != 0) continue;
      pool[i] |= need;
      fn(i);
      pool[i] &= ~need;
    }
  }

  void Visit(int p) {
    if (p == inst_.num_patients()) {
      Record();
      return;
    }
    if (Prunable(p)) return;
    const Patient& pat = inst_.patients[p];
    const int H = inst_.slots_per_day;
    for (int t = 0; t < inst_.days; ++t) {
      for (int h = 1; h + pat.visit - 1 <= inst_.visit_slots; ++h) {
        const Mask vm = Span(h, h + pat.visit - 1);
        bool idle_room_tried = false;
        for (int r = 0; r < inst_.rooms; ++r) {
          if (!inst_.RoomServes(r, pat.pathology, t)) continue;
          if (rooms_[t][r] == 0) {
            if (idle_room_tried) continue;
            idle_room_tried = true;
          }
          if ((rooms_[t][r] & vm) != 0) continue;
          rooms_[t][r] |= vm;
          for (int g = h + pat.visit; g + pat.infusion - 1 <= H; ++g) {
            const Mask im = Span(g, g + pat.infusion - 1);
            const int wait = g - h - pat.visit;
            const int saved_wait = day_wait_[t];
            day_wait_[t] = std::max(day_wait_[t], wait);
            ++treated_;
            auto place = [&](InfusionClass cls, int resource) {
              current_.entries[p] = Appointment{t, h, r, g, cls, resource};
              Visit(p + 1);
              current_.entries[p].reset();
            };
            if (!pat.critical) {
              ++chairs_used_;
              ForEachResource(chairs_[t], im, [&](int s) { place(InfusionClass::kChair, s); });
              --chairs_used_;
            }
            ForEachResource(beds_[t], im, [&](int b) { place(InfusionClass::kBed, b); });
            --treated_;
            day_wait_[t] = saved_wait;
          }
          rooms_[t][r] &= ~vm;
        }
      }
    }
    Visit(p + 1);
  }

  const Instance& inst_;
  std::vector<std::vector<Mask>> rooms_, chairs_, beds_;
  std::vector<int> day_wait_;
  int treated_ = 0;
  int chairs_used_ = 0;
  CompleteSchedule current_;
  CompleteSchedule best_;
  Score best_score_;
};

void Guard(bool ok, const std::string& what) {
  if (!ok) throw OracleSizeError("instance too large for the oracle: " + what);
}

}  // namespace

LexicoOptimum BruteForceLexico(const Instance& inst, const OracleLimits& limits) {
  Guard(inst.num_patients() <= limits.max_patients, "patients");
  Guard(inst.slots_per_day <= std::min(limits.max_slots, 30), "slots per day");
  Guard(inst.rooms <= limits.max_rooms, "rooms");
  Guard(inst.days <= limits.max_days, "days");
  Guard(inst.chairs <= limits.max_chairs, "chairs");
  Guard(inst.beds <= limits.max_beds, "beds");
  Enumerator e(inst);
  return e.Run();
}

}  // namespace chemo
