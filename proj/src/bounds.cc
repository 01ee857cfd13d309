#include "chemo/bounds.h"

#include <algorithm>
#include <chrono>
#include <limits>

#include "json.hpp"

namespace chemo {
namespace {

bool Counts(const Patient& p, ResourceSide side) {
  return side == ResourceSide::kBeds || !p.critical;
}

// Smallest visit duration among the patients of a side (0 when none).
int MinVisit(const Instance& inst, ResourceSide side) {
  int best = std::numeric_limits<int>::max();
  for (const Patient& p : inst.patients) {
    if (Counts(p, side)) best = std::min(best, p.visit);
  }
  return best == std::numeric_limits<int>::max() ? 0 : best;
}

BoundResult FromSolve(const SolveResult& r, BoundMethod method, const Instance& inst) {
  BoundResult out;
  out.method = method;
  out.runtime = r.runtime;
  switch (r.status) {
    case SolveStatus::kOptimal:
      out.value = static_cast<int>(r.objective);
      break;
    case SolveStatus::kFeasibleTimeLimit:
    case SolveStatus::kNoSolutionTimeLimit:
      out.status = BoundStatus::kTimeLimit;
      out.value = static_cast<int>(r.best_bound);
      break;
    case SolveStatus::kInfeasible:
      throw std::runtime_error(std::string(BoundMethodName(method)) +
                               " model is infeasible: v1/v2 inconsistent with the instance");
    case SolveStatus::kBackendError:
      throw std::runtime_error("bound solve failed: " + r.backend_error);
  }
  out.value = std::clamp(out.value, 0, inst.NumNonCritical());
  return out;
}

}  // namespace

EmptySlotProfile ComputeEmptySlotProfile(const Instance& inst, std::span<const int> v2,
                                         ResourceSide side) {
  if (static_cast<int>(v2.size()) != inst.days) {
    throw std::invalid_argument("v2 must hold one value per day");
  }
  const int H = inst.slots_per_day;
  const int tail = H - inst.visit_slots;  // |H| - |H_V|
  int max_f = 0;
  for (const Patient& p : inst.patients) {
    if (Counts(p, side)) max_f = std::max(max_f, p.infusion);
  }
  EmptySlotProfile prof;
  prof.l.assign(max_f + 1, std::vector<std::vector<int>>(inst.rooms, std::vector<int>(inst.days, 0)));
  prof.m.assign(max_f + 1, std::vector<std::vector<std::vector<int>>>(
                               inst.rooms, std::vector<std::vector<int>>(
                                               inst.days, std::vector<int>(H + 1, 0))));
  for (const Patient& p : inst.patients) {
    if (!Counts(p, side)) continue;
    for (int r = 0; r < inst.rooms; ++r) {
      for (int t = 0; t < inst.days; ++t) {
        if (inst.RoomServes(r, p.pathology, t)) ++prof.l[p.infusion][r][t];
      }
    }
  }
  for (int ell = 1; ell <= max_f; ++ell) {
    for (int r = 0; r < inst.rooms; ++r) {
      for (int t = 0; t < inst.days; ++t) {
        const int L = prof.l[ell][r][t];
        auto& m = prof.m[ell][r][t];
        const int reach = H - (inst.visit_slots + v2[t]);
        m[0] = ell >= reach ? std::min({L, v2[t] + 1 + ell - tail, v2[t] + 1}) : 0;
        int used = m[0];
        for (int i = 1; i <= H; ++i) {
          m[i] = (ell >= reach - i && used < L) ? 1 : 0;
          used += m[i];
        }
      }
    }
  }
  const int pool = side == ResourceSide::kChairs ? inst.chairs : inst.beds;
  prof.n.assign(H + 1, std::vector<int>(inst.days, 0));
  for (int t = 0; t < inst.days; ++t) {
    int sigma = pool;
    for (int i = 0; sigma > 0 && i <= H; ++i) {
      int avail = 0;
      for (int ell = 1; ell <= max_f; ++ell) {
        for (int r = 0; r < inst.rooms; ++r) avail += prof.m[ell][r][t][i];
      }
      prof.n[i][t] = std::min(sigma, avail);
      sigma -= prof.n[i][t];
    }
  }
  return prof;
}

const char* BoundMethodName(BoundMethod method) {
  switch (method) {
    case BoundMethod::kUB1:
      return "UB1";
    case BoundMethod::kUB2:
      return "UB2";
    case BoundMethod::kTrivial:
      return "trivial";
  }
  return "unknown";
}

std::string BoundToJson(const BoundResult& bound) {
  nlohmann::ordered_json j{{"method", BoundMethodName(bound.method)},
                           {"value", bound.value},
                           {"status", bound.status == BoundStatus::kExact ? "exact" : "time_limit"},
                           {"runtime", bound.runtime}};
  return j.dump();
}

BuiltModel BuildUB1(const Instance& inst) {
  BuiltModel built;
  MilpModel& m = built.model;
  const int capacity = inst.days * (inst.slots_per_day - MinVisit(inst, ResourceSide::kChairs));
  std::vector<std::vector<Term>> per_chair(inst.chairs);
  std::vector<Term> objective;
  for (int p = 0; p < inst.num_patients(); ++p) {
    const Patient& pat = inst.patients[p];
    if (pat.critical) continue;
    std::vector<Term> assign;
    for (int s = 0; s < inst.chairs; ++s) {
      const int var = built.vars.Add(m, {Family::kMu, p, s});
      assign.push_back({var, 1});
      objective.push_back({var, 1});
      per_chair[s].push_back({var, pat.infusion});
    }
    if (!assign.empty()) {
      m.AddConstraint("assign_" + std::to_string(p + 1), std::move(assign), Relation::kLessEqual, 1);
    }
  }
  for (int s = 0; s < inst.chairs; ++s) {
    if (per_chair[s].empty()) continue;
    m.AddConstraint("chair_" + std::to_string(s + 1), std::move(per_chair[s]),
                    Relation::kLessEqual, capacity);
  }
  m.SetObjective(Sense::kMaximize, std::move(objective));
  return built;
}

BuiltModel BuildUB2(const Instance& inst, int v1, std::span<const int> v2) {
  BuiltModel built;
  MilpModel& m = built.model;
  VarMap& vars = built.vars;
  const int H = inst.slots_per_day;
  const auto chair_prof = ComputeEmptySlotProfile(inst, v2, ResourceSide::kChairs);
  const auto bed_prof = ComputeEmptySlotProfile(inst, v2, ResourceSide::kBeds);

  std::vector<Term> total, objective;
  // load[t][resource] for capacity rows.
  std::vector<std::vector<std::vector<Term>>> chair_load(
      inst.days, std::vector<std::vector<Term>>(inst.chairs));
  std::vector<std::vector<std::vector<Term>>> bed_load(inst.days,
                                                       std::vector<std::vector<Term>>(inst.beds));
  for (int p = 0; p < inst.num_patients(); ++p) {
    const Patient& pat = inst.patients[p];
    std::vector<Term> once;
    for (int t = 0; t < inst.days; ++t) {
      if (!inst.Treatable(p, t)) continue;
      for (int b = 0; b < inst.beds; ++b) {
        const int var = vars.Add(m, {pat.critical ? Family::kLambda : Family::kMuB, p, t, b});
        once.push_back({var, 1});
        bed_load[t][b].push_back({var, pat.infusion});
      }
      if (pat.critical) continue;
      for (int s = 0; s < inst.chairs; ++s) {
        const int var = vars.Add(m, {Family::kMuS, p, t, s});
        once.push_back({var, 1});
        objective.push_back({var, 1});
        chair_load[t][s].push_back({var, pat.infusion});
      }
    }
    total.insert(total.end(), once.begin(), once.end());
    if (!once.empty()) {
      m.AddConstraint("once_" + std::to_string(p + 1), std::move(once), Relation::kLessEqual, 1);
    }
  }
  m.AddConstraint("v1", std::move(total), Relation::kEqual, v1);

  auto resource_rows = [&](ResourceSide side, const EmptySlotProfile& prof,
                           std::vector<std::vector<std::vector<Term>>>& load) {
    const bool chairs = side == ResourceSide::kChairs;
    const int pool = chairs ? inst.chairs : inst.beds;
    const Family rho = chairs ? Family::kRhoS : Family::kRhoB;
    const std::string tag = chairs ? "S" : "B";
    const int min_v = MinVisit(inst, side);
    for (int t = 0; t < inst.days; ++t) {
      std::vector<int> levels{0};
      for (int i = 1; i <= H; ++i) {
        if (prof.n[i][t] > 0) levels.push_back(i);
      }
      std::vector<std::vector<Term>> per_level(H + 1);
      for (int s = 0; s < pool; ++s) {
        // Resources are grouped |R| at a time by how early they can first
        // be used; the j-th group loses j * min_v leading slots.
        const int j = inst.rooms > 0 ? s / inst.rooms + 1 : 0;
        const int cap = inst.rooms > 0 ? std::max(0, H - j * min_v) : 0;
        std::vector<Term> one, capacity = load[t][s];
        for (int i : levels) {
          const int var = vars.Add(m, {rho, i, t, s});
          one.push_back({var, 1});
          per_level[i].push_back({var, 1});
          if (i > 0) capacity.push_back({var, std::min(i, cap)});
        }
        const std::string suffix = tag + "_" + std::to_string(t + 1) + "_" + std::to_string(s + 1);
        m.AddConstraint("level_" + suffix, std::move(one), Relation::kEqual, 1);
        m.AddConstraint("cap_" + suffix, std::move(capacity), Relation::kLessEqual, cap);
      }
      for (int i : levels) {
        if (i == 0) continue;
        m.AddConstraint("count_" + tag + "_" + std::to_string(i) + "_" + std::to_string(t + 1),
                        std::move(per_level[i]), Relation::kEqual, prof.n[i][t]);
      }
    }
  };
  resource_rows(ResourceSide::kBeds, bed_prof, bed_load);
  resource_rows(ResourceSide::kChairs, chair_prof, chair_load);
  m.SetObjective(Sense::kMaximize, std::move(objective));
  return built;
}

BoundResult TrivialBound(const Instance& inst) {
  BoundResult out;
  out.method = BoundMethod::kTrivial;
  out.value = inst.NumNonCritical();
  return out;
}

BoundResult Ub1(const Instance& inst, const SolveOptions& opts) {
  const BuiltModel built = BuildUB1(inst);
  return FromSolve(Solve(built.model, opts), BoundMethod::kUB1, inst);
}

BoundResult Ub2(const Instance& inst, int v1, std::span<const int> v2, const SolveOptions& opts) {
  const BuiltModel built = BuildUB2(inst, v1, v2);
  return FromSolve(Solve(built.model, opts), BoundMethod::kUB2, inst);
}

}  // namespace chemo
