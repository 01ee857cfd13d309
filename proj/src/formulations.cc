#include "chemo/formulations.h"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace chemo {
namespace {

std::string Idx(int i) { return std::to_string(i + 1); }

// Dense lookup tables for the aggregate families of one scope (a subset of
// patients and days). Entry -1 means "not materialized".
class AggregateBuilder {
 public:
  AggregateBuilder(const Instance& inst, std::vector<int> patients, std::vector<int> days,
                   BuiltModel& built)
      : inst_(inst), patients_(std::move(patients)), days_(std::move(days)), built_(built) {
    const int H = inst.slots_per_day;
    const int n = static_cast<int>(patients_.size());
    const int nd = static_cast<int>(days_.size());
    x_.assign(n, std::vector<std::vector<int>>(nd, std::vector<int>(H + 1, -1)));
    y_ = zb_ = zs_ = x_;
    for (int i = 0; i < n; ++i) {
      const int p = patients_[i];
      const Patient& pat = inst.patients[p];
      for (int d = 0; d < nd; ++d) {
        const int t = days_[d];
        if (!inst.Treatable(p, t)) continue;
        for (int h = 1; h + pat.visit - 1 <= inst.visit_slots; ++h) {
          x_[i][d][h] = built.vars.Add(built.model, {Family::kX, p, t, h});
        }
        for (int h = 1; h + pat.infusion - 1 <= H; ++h) {
          if (pat.critical) {
            y_[i][d][h] = built.vars.Add(built.model, {Family::kY, p, t, h});
          } else {
            zs_[i][d][h] = built.vars.Add(built.model, {Family::kZS, p, t, h});
          }
        }
        if (!pat.critical) {
          for (int h = 1; h + pat.infusion - 1 <= H; ++h) {
            zb_[i][d][h] = built.vars.Add(built.model, {Family::kZB, p, t, h});
          }
        }
      }
    }
  }

  void AddCoreRows() {
    MilpModel& m = built_.model;
    const int H = inst_.slots_per_day;
    const int n = static_cast<int>(patients_.size());
    const int nd = static_cast<int>(days_.size());
    // At most one visit per patient.
    for (int i = 0; i < n; ++i) {
      std::vector<Term> terms;
      for (int d = 0; d < nd; ++d) AppendFamily(terms, x_[i][d], 1);
      if (!terms.empty()) {
        m.AddConstraint("visit_" + Idx(patients_[i]), std::move(terms), Relation::kLessEqual, 1);
      }
    }
    // Concurrent visits per pathology within the rooms devoted to it.
    const int num_k = static_cast<int>(inst_.pathologies.size());
    for (int d = 0; d < nd; ++d) {
      const int t = days_[d];
      for (int k = 0; k < num_k; ++k) {
        const int cap = inst_.RoomsFor(k, t);
        if (cap == 0) continue;
        for (int h = 1; h <= inst_.visit_slots; ++h) {
          std::vector<Term> terms;
          for (int i = 0; i < n; ++i) {
            const Patient& pat = inst_.patients[patients_[i]];
            if (pat.pathology != k) continue;
            for (int q = std::max(1, h + 1 - pat.visit); q <= h; ++q) {
              if (x_[i][d][q] >= 0) terms.push_back({x_[i][d][q], 1});
            }
          }
          if (!terms.empty()) {
            m.AddConstraint("room_" + Idx(t) + "_" + std::to_string(h) + "_" + Idx(k),
                            std::move(terms), Relation::kLessEqual, cap);
          }
        }
      }
    }
    // Same-day visit/infusion link and visit-before-infusion precedence.
    for (int i = 0; i < n; ++i) {
      const int p = patients_[i];
      const Patient& pat = inst_.patients[p];
      for (int d = 0; d < nd; ++d) {
        std::vector<Term> link;
        std::vector<Term> prec;
        for (int h = 1; h <= H; ++h) {
          if (x_[i][d][h] >= 0) {
            link.push_back({x_[i][d][h], 1});
            prec.push_back({x_[i][d][h], h + pat.visit});
          }
          for (const auto* fam : {&y_, &zb_, &zs_}) {
            const int var = (*fam)[i][d][h];
            if (var < 0) continue;
            link.push_back({var, -1});
            prec.push_back({var, -h});
          }
        }
        if (link.empty()) continue;
        const std::string suffix = Idx(p) + "_" + Idx(days_[d]);
        m.AddConstraint("link_" + suffix, std::move(link), Relation::kEqual, 0);
        m.AddConstraint("prec_" + suffix, std::move(prec), Relation::kLessEqual, 0);
      }
    }
    // Chair and bed capacity per slot.
    for (int d = 0; d < nd; ++d) {
      const int t = days_[d];
      for (int h = 1; h <= H; ++h) {
        std::vector<Term> chair_terms;
        std::vector<Term> bed_terms;
        for (int i = 0; i < n; ++i) {
          const Patient& pat = inst_.patients[patients_[i]];
          for (int q = std::max(1, h + 1 - pat.infusion); q <= h; ++q) {
            if (zs_[i][d][q] >= 0) chair_terms.push_back({zs_[i][d][q], 1});
            if (zb_[i][d][q] >= 0) bed_terms.push_back({zb_[i][d][q], 1});
            if (y_[i][d][q] >= 0) bed_terms.push_back({y_[i][d][q], 1});
          }
        }
        const std::string suffix = Idx(t) + "_" + std::to_string(h);
        if (!chair_terms.empty()) {
          m.AddConstraint("chairs_" + suffix, std::move(chair_terms), Relation::kLessEqual,
                          inst_.chairs);
        }
        if (!bed_terms.empty()) {
          m.AddConstraint("beds_" + suffix, std::move(bed_terms), Relation::kLessEqual,
                          inst_.beds);
        }
      }
    }
    AddEnergyRows();
  }

  // Redundant per-day workload rows. An infusion never starts before slot
  // 1 + v, so a resource offers at most |H| - min v slots to its patients.
  // Implied by the per-slot rows and the links; they only give the exact
  // search a capacity view it cannot assemble slot by slot.
  void AddEnergyRows() {
    MilpModel& m = built_.model;
    const int H = inst_.slots_per_day;
    const int n = static_cast<int>(patients_.size());
    for (int d = 0; d < num_days(); ++d) {
      int min_all = H, min_chair = H;
      for (int i = 0; i < n; ++i) {
        const Patient& pat = inst_.patients[patients_[i]];
        min_all = std::min(min_all, pat.visit);
        if (!pat.critical) min_chair = std::min(min_chair, pat.visit);
      }
      std::vector<Term> all, critical, chair;
      for (int i = 0; i < n; ++i) {
        const Patient& pat = inst_.patients[patients_[i]];
        for (int h = 1; h <= H; ++h) {
          if (x_[i][d][h] >= 0) {
            all.push_back({x_[i][d][h], pat.infusion});
            if (pat.critical) critical.push_back({x_[i][d][h], pat.infusion});
          }
          if (zs_[i][d][h] >= 0) chair.push_back({zs_[i][d][h], pat.infusion});
        }
      }
      const int bed_room = inst_.beds * (H - min_all);
      const int chair_room = inst_.chairs * (H - min_chair);
      const std::string t = Idx(days_[d]);
      if (!all.empty()) {
        m.AddConstraint("energy_" + t, std::move(all), Relation::kLessEqual, bed_room + chair_room);
      }
      if (!critical.empty()) {
        m.AddConstraint("energy_B_" + t, std::move(critical), Relation::kLessEqual, bed_room);
      }
      if (!chair.empty()) {
        m.AddConstraint("energy_S_" + t, std::move(chair), Relation::kLessEqual, chair_room);
      }
    }
  }

  std::vector<Term> F1Terms() const {
    std::vector<Term> terms;
    for (const auto& by_day : x_) {
      for (const auto& slots : by_day) AppendFamily(terms, slots, 1);
    }
    return terms;
  }

  std::vector<Term> ChairTerms() const {
    std::vector<Term> terms;
    for (const auto& by_day : zs_) {
      for (const auto& slots : by_day) AppendFamily(terms, slots, 1);
    }
    return terms;
  }

  // sum_h h*(infusion) - sum_h (h+v) x for scope patient i on scope day d.
  std::vector<Term> WaitTerms(int i, int d) const {
    const Patient& pat = inst_.patients[patients_[i]];
    std::vector<Term> terms;
    for (int h = 1; h <= inst_.slots_per_day; ++h) {
      if (x_[i][d][h] >= 0) terms.push_back({x_[i][d][h], -(h + pat.visit)});
      for (const auto* fam : {&y_, &zb_, &zs_}) {
        const int var = (*fam)[i][d][h];
        if (var >= 0) terms.push_back({var, h});
      }
    }
    return terms;
  }

  int num_patients() const { return static_cast<int>(patients_.size()); }
  int num_days() const { return static_cast<int>(days_.size()); }
  int patient(int i) const { return patients_[i]; }
  int day(int d) const { return days_[d]; }

 private:
  static void AppendFamily(std::vector<Term>& terms, const std::vector<int>& slots, int coef) {
    for (int var : slots) {
      if (var >= 0) terms.push_back({var, coef});
    }
  }

  const Instance& inst_;
  std::vector<int> patients_;
  std::vector<int> days_;
  BuiltModel& built_;
  std::vector<std::vector<std::vector<int>>> x_, y_, zb_, zs_;
};

std::vector<int> AllPatients(const Instance& inst) {
  std::vector<int> out(inst.num_patients());
  std::iota(out.begin(), out.end(), 0);
  return out;
}

std::vector<int> AllDays(const Instance& inst) {
  std::vector<int> out(inst.days);
  std::iota(out.begin(), out.end(), 0);
  return out;
}

// W_t epigraph: W_t >= wait expression of every scope patient on day t.
void AddWaitEpigraph(AggregateBuilder& b, BuiltModel& built, const Instance& inst,
                     std::vector<Term>& objective) {
  for (int d = 0; d < b.num_days(); ++d) {
    const int t = b.day(d);
    const int w = built.vars.AddInteger(built.model, {Family::kW, t}, 0, inst.slots_per_day);
    objective.push_back({w, 1});
    for (int i = 0; i < b.num_patients(); ++i) {
      std::vector<Term> terms = b.WaitTerms(i, d);
      if (terms.empty()) continue;
      for (Term& term : terms) term.coef = -term.coef;
      terms.push_back({w, 1});
      built.model.AddConstraint("wait_" + Idx(b.patient(i)) + "_" + Idx(t), std::move(terms),
                                Relation::kGreaterEqual, 0);
    }
  }
}

void AddWaitCaps(AggregateBuilder& b, BuiltModel& built, std::span<const int> cap_by_scope_day) {
  for (int d = 0; d < b.num_days(); ++d) {
    for (int i = 0; i < b.num_patients(); ++i) {
      std::vector<Term> terms = b.WaitTerms(i, d);
      if (terms.empty()) continue;
      built.model.AddConstraint("cap_" + Idx(b.patient(i)) + "_" + Idx(b.day(d)),
                                std::move(terms), Relation::kLessEqual, cap_by_scope_day[d]);
    }
  }
}

}  // namespace

BuiltModel BuildAF1(const Instance& inst) {
  BuiltModel built;
  AggregateBuilder b(inst, AllPatients(inst), AllDays(inst), built);
  b.AddCoreRows();
  built.model.SetObjective(Sense::kMaximize, b.F1Terms());
  return built;
}

BuiltModel BuildAF2(const Instance& inst, int v1) {
  BuiltModel built;
  AggregateBuilder b(inst, AllPatients(inst), AllDays(inst), built);
  b.AddCoreRows();
  built.model.AddConstraint("f1_min", b.F1Terms(), Relation::kGreaterEqual, v1);
  std::vector<Term> objective;
  AddWaitEpigraph(b, built, inst, objective);
  built.model.SetObjective(Sense::kMinimize, std::move(objective));
  return built;
}

BuiltModel BuildAF3(const Instance& inst, int v1, std::span<const int> v2) {
  if (static_cast<int>(v2.size()) != inst.days) {
    throw std::invalid_argument("v2 must hold one cap per day");
  }
  BuiltModel built;
  AggregateBuilder b(inst, AllPatients(inst), AllDays(inst), built);
  b.AddCoreRows();
  built.model.AddConstraint("f1_min", b.F1Terms(), Relation::kGreaterEqual, v1);
  AddWaitCaps(b, built, v2);
  built.model.SetObjective(Sense::kMaximize, b.ChairTerms());
  return built;
}

BuiltModel BuildSingleDay(const Instance& inst, int day, std::span<const int> roster,
                          DayStage stage, std::optional<int> v2_day) {
  if (day < 0 || day >= inst.days) throw std::out_of_range("day out of range");
  BuiltModel built;
  AggregateBuilder b(inst, std::vector<int>(roster.begin(), roster.end()), {day}, built);
  b.AddCoreRows();
  const auto f1 = b.F1Terms();
  if (!roster.empty()) {
    built.model.AddConstraint("f1_min", f1, Relation::kGreaterEqual,
                              static_cast<std::int64_t>(roster.size()));
  }
  if (stage == DayStage::kP2) {
    std::vector<Term> objective;
    if (!roster.empty()) AddWaitEpigraph(b, built, inst, objective);
    built.model.SetObjective(Sense::kMinimize, std::move(objective));
  } else {
    if (v2_day) {
      const int cap[1] = {*v2_day};
      AddWaitCaps(b, built, cap);
    }
    built.model.SetObjective(Sense::kMaximize, b.ChairTerms());
  }
  return built;
}

BuiltModel BuildF1Complete(const Instance& inst) {
  BuiltModel built;
  MilpModel& m = built.model;
  VarMap& vars = built.vars;
  const int H = inst.slots_per_day;
  const int n = inst.num_patients();
  // alpha[p][t][h][r], infusion[p][t][h][resource] (beta or gammaB/gammaS).
  using Grid = std::vector<std::vector<std::vector<std::vector<int>>>>;
  Grid alpha(n), beta(n), gamma_b(n), gamma_s(n);
  for (int p = 0; p < n; ++p) {
    const Patient& pat = inst.patients[p];
    alpha[p].assign(inst.days, std::vector<std::vector<int>>(H + 1, std::vector<int>(inst.rooms, -1)));
    beta[p].assign(inst.days, std::vector<std::vector<int>>(H + 1, std::vector<int>(inst.beds, -1)));
    gamma_b[p] = beta[p];
    gamma_s[p].assign(inst.days,
                      std::vector<std::vector<int>>(H + 1, std::vector<int>(inst.chairs, -1)));
    for (int t = 0; t < inst.days; ++t) {
      if (!inst.Treatable(p, t)) continue;
      for (int h = 1; h + pat.visit - 1 <= inst.visit_slots; ++h) {
        for (int r = 0; r < inst.rooms; ++r) {
          if (inst.RoomServes(r, pat.pathology, t)) {
            alpha[p][t][h][r] = vars.Add(m, {Family::kAlpha, p, t, h, r});
          }
        }
      }
      for (int h = 1; h + pat.infusion - 1 <= H; ++h) {
        if (pat.critical) {
          for (int b = 0; b < inst.beds; ++b) beta[p][t][h][b] = vars.Add(m, {Family::kBeta, p, t, h, b});
        } else {
          for (int s = 0; s < inst.chairs; ++s) {
            gamma_s[p][t][h][s] = vars.Add(m, {Family::kGammaS, p, t, h, s});
          }
          for (int b = 0; b < inst.beds; ++b) {
            gamma_b[p][t][h][b] = vars.Add(m, {Family::kGammaB, p, t, h, b});
          }
        }
      }
    }
  }
  std::vector<Term> objective;
  for (int p = 0; p < n; ++p) {
    std::vector<Term> terms;
    for (int t = 0; t < inst.days; ++t) {
      for (int h = 1; h <= H; ++h) {
        for (int var : alpha[p][t][h]) {
          if (var >= 0) terms.push_back({var, 1});
        }
      }
    }
    objective.insert(objective.end(), terms.begin(), terms.end());
    if (!terms.empty()) m.AddConstraint("visit_" + Idx(p), std::move(terms), Relation::kLessEqual, 1);
  }
  for (int t = 0; t < inst.days; ++t) {
    for (int h = 1; h <= inst.visit_slots; ++h) {
      for (int r = 0; r < inst.rooms; ++r) {
        std::vector<Term> terms;
        for (int p = 0; p < n; ++p) {
          for (int q = std::max(1, h + 1 - inst.patients[p].visit); q <= h; ++q) {
            if (alpha[p][t][q][r] >= 0) terms.push_back({alpha[p][t][q][r], 1});
          }
        }
        if (!terms.empty()) {
          m.AddConstraint("room_" + Idx(t) + "_" + std::to_string(h) + "_" + Idx(r),
                          std::move(terms), Relation::kLessEqual, 1);
        }
      }
    }
  }
  for (int p = 0; p < n; ++p) {
    const Patient& pat = inst.patients[p];
    for (int t = 0; t < inst.days; ++t) {
      std::vector<Term> link, prec;
      for (int h = 1; h <= H; ++h) {
        for (int var : alpha[p][t][h]) {
          if (var < 0) continue;
          link.push_back({var, 1});
          prec.push_back({var, h + pat.visit});
        }
        for (const Grid* grid : {&beta, &gamma_b, &gamma_s}) {
          for (int var : (*grid)[p][t][h]) {
            if (var < 0) continue;
            link.push_back({var, -1});
            prec.push_back({var, -h});
          }
        }
      }
      if (link.empty()) continue;
      const std::string suffix = Idx(p) + "_" + Idx(t);
      m.AddConstraint("link_" + suffix, std::move(link), Relation::kEqual, 0);
      m.AddConstraint("prec_" + suffix, std::move(prec), Relation::kLessEqual, 0);
    }
  }
  for (int t = 0; t < inst.days; ++t) {
    for (int h = 1; h <= H; ++h) {
      for (int s = 0; s < inst.chairs; ++s) {
        std::vector<Term> terms;
        for (int p = 0; p < n; ++p) {
          for (int q = std::max(1, h + 1 - inst.patients[p].infusion); q <= h; ++q) {
            if (gamma_s[p][t][q][s] >= 0) terms.push_back({gamma_s[p][t][q][s], 1});
          }
        }
        if (!terms.empty()) {
          m.AddConstraint("chair_" + Idx(t) + "_" + std::to_string(h) + "_" + Idx(s),
                          std::move(terms), Relation::kLessEqual, 1);
        }
      }
      for (int b = 0; b < inst.beds; ++b) {
        std::vector<Term> terms;
        for (int p = 0; p < n; ++p) {
          for (int q = std::max(1, h + 1 - inst.patients[p].infusion); q <= h; ++q) {
            if (beta[p][t][q][b] >= 0) terms.push_back({beta[p][t][q][b], 1});
            if (gamma_b[p][t][q][b] >= 0) terms.push_back({gamma_b[p][t][q][b], 1});
          }
        }
        if (!terms.empty()) {
          m.AddConstraint("bed_" + Idx(t) + "_" + std::to_string(h) + "_" + Idx(b),
                          std::move(terms), Relation::kLessEqual, 1);
        }
      }
    }
  }
  m.SetObjective(Sense::kMaximize, std::move(objective));
  return built;
}

void AddKOptConstraints(BuiltModel& built, const AggregateSchedule& current,
                        const KOptParams& k) {
  // Current values of every materialized aggregate variable.
  std::vector<std::int64_t> cur(built.model.num_variables(), 0);
  for (int p = 0; p < static_cast<int>(current.entries.size()); ++p) {
    const auto& e = current.entries[p];
    if (!e) continue;
    auto set = [&](const VarKey& key) {
      auto var = built.vars.Find(key);
      if (!var) throw std::invalid_argument("current schedule uses " + VarMap::Name(key) +
                                            " which the model does not contain");
      cur[*var] = 1;
    };
    set({Family::kX, p, e->day, e->visit_start});
    if (e->infusion_class == InfusionClass::kChair) {
      set({Family::kZS, p, e->day, e->infusion_start});
    } else {
      const bool critical = built.vars.Contains({Family::kY, p, e->day, e->infusion_start});
      set({critical ? Family::kY : Family::kZB, p, e->day, e->infusion_start});
    }
  }
  const std::pair<Family, int> balls[] = {
      {Family::kX, k.k_x}, {Family::kY, k.k_y}, {Family::kZB, k.k_zB}, {Family::kZS, k.k_zS}};
  const char* names[] = {"kopt_x", "kopt_y", "kopt_zB", "kopt_zS"};
  for (int i = 0; i < 4; ++i) {
    std::vector<Term> terms;
    std::int64_t ones = 0;
    for (int var : built.vars.OfFamily(balls[i].first)) {
      if (cur[var] == 1) {
        terms.push_back({var, -1});
        ++ones;
      } else {
        terms.push_back({var, 1});
      }
    }
    built.model.AddConstraint(names[i], std::move(terms), Relation::kLessEqual,
                              balls[i].second - ones);
  }
}

AggregateSchedule ExtractAggregate(const Instance& inst, const VarMap& vars,
                                   std::span<const std::int64_t> values) {
  struct Partial {
    std::optional<std::pair<int, int>> visit;
    std::optional<std::tuple<int, int, InfusionClass>> infusion;
  };
  std::vector<Partial> partial(inst.num_patients());
  for (int var = 0; var < vars.size(); ++var) {
    if (values[var] == 0) continue;
    const VarKey& key = vars.Key(var);
    switch (key.family) {
      case Family::kX:
        if (partial[key.a].visit) throw std::logic_error("patient visited twice");
        partial[key.a].visit = std::make_pair(key.b, key.c);
        break;
      case Family::kY:
      case Family::kZB:
      case Family::kZS: {
        if (partial[key.a].infusion) throw std::logic_error("patient infused twice");
        const auto cls = key.family == Family::kZS ? InfusionClass::kChair : InfusionClass::kBed;
        partial[key.a].infusion = std::make_tuple(key.b, key.c, cls);
        break;
      }
      default:
        break;
    }
  }
  AggregateSchedule agg = AggregateSchedule::Empty(inst);
  for (int p = 0; p < inst.num_patients(); ++p) {
    const Partial& pt = partial[p];
    if (!pt.visit && !pt.infusion) continue;
    if (!pt.visit || !pt.infusion || std::get<0>(*pt.infusion) != pt.visit->first) {
      throw std::logic_error("visit and infusion of patient " + inst.patients[p].id +
                             " do not match");
    }
    agg.entries[p] = AggregateEntry{pt.visit->first, pt.visit->second,
                                    std::get<1>(*pt.infusion), std::get<2>(*pt.infusion)};
  }
  return agg;
}

std::vector<std::int64_t> AggregateToAssignment(const Instance& inst, const BuiltModel& built,
                                                const AggregateSchedule& agg) {
  std::vector<std::int64_t> values(built.model.num_variables(), 0);
  auto set = [&](const VarKey& key) {
    auto var = built.vars.Find(key);
    if (!var) {
      throw std::invalid_argument("schedule uses " + VarMap::Name(key) +
                                  " which the model does not contain");
    }
    values[*var] = 1;
  };
  for (int p = 0; p < static_cast<int>(agg.entries.size()); ++p) {
    const auto& e = agg.entries[p];
    if (!e) continue;
    set({Family::kX, p, e->day, e->visit_start});
    if (e->infusion_class == InfusionClass::kChair) {
      set({Family::kZS, p, e->day, e->infusion_start});
    } else {
      set({inst.patients[p].critical ? Family::kY : Family::kZB, p, e->day, e->infusion_start});
    }
  }
  const std::vector<int> wait = DailyMaxWait(agg, inst);
  for (int var : built.vars.OfFamily(Family::kW)) {
    values[var] = wait[built.vars.Key(var).a];
  }
  return values;
}

CompleteSchedule ExtractComplete(const Instance& inst, const VarMap& vars,
                                 std::span<const std::int64_t> values) {
  CompleteSchedule out = CompleteSchedule::Empty(inst);
  std::vector<std::optional<VarKey>> visit(inst.num_patients()), infusion(inst.num_patients());
  for (int var = 0; var < vars.size(); ++var) {
    if (values[var] == 0) continue;
    const VarKey& key = vars.Key(var);
    if (key.family == Family::kAlpha) {
      if (visit[key.a]) throw std::logic_error("patient visited twice");
      visit[key.a] = key;
    } else if (key.family == Family::kBeta || key.family == Family::kGammaB ||
               key.family == Family::kGammaS) {
      if (infusion[key.a]) throw std::logic_error("patient infused twice");
      infusion[key.a] = key;
    }
  }
  for (int p = 0; p < inst.num_patients(); ++p) {
    if (!visit[p] && !infusion[p]) continue;
    if (!visit[p] || !infusion[p] || visit[p]->b != infusion[p]->b) {
      throw std::logic_error("visit and infusion of patient " + inst.patients[p].id +
                             " do not match");
    }
    out.entries[p] = Appointment{
        visit[p]->b, visit[p]->c, visit[p]->d, infusion[p]->c,
        infusion[p]->family == Family::kGammaS ? InfusionClass::kChair : InfusionClass::kBed,
        infusion[p]->d};
  }
  return out;
}

std::vector<std::int64_t> CompleteToAssignment(const Instance& inst, const BuiltModel& built,
                                               const CompleteSchedule& schedule) {
  std::vector<std::int64_t> values(built.model.num_variables(), 0);
  auto set = [&](const VarKey& key) {
    auto var = built.vars.Find(key);
    if (!var) {
      throw std::invalid_argument("schedule uses " + VarMap::Name(key) +
                                  " which the model does not contain");
    }
    values[*var] = 1;
  };
  for (int p = 0; p < static_cast<int>(schedule.entries.size()); ++p) {
    const auto& e = schedule.entries[p];
    if (!e) continue;
    set({Family::kAlpha, p, e->day, e->visit_start, e->room});
    Family fam = Family::kGammaS;
    if (e->resource_type == InfusionClass::kBed) {
      fam = inst.patients[p].critical ? Family::kBeta : Family::kGammaB;
    }
    set({fam, p, e->day, e->infusion_start, e->resource});
  }
  return values;
}

std::vector<std::int64_t> WaitingFromAssignment(const Instance& inst, const VarMap& vars,
                                                std::span<const std::int64_t> values) {
  // expr[p][t] accumulates sum_h h*infusion - sum_h (h+v) x.
  std::vector<std::vector<std::int64_t>> expr(inst.num_patients(),
                                              std::vector<std::int64_t>(inst.days, 0));
  for (int var = 0; var < vars.size(); ++var) {
    const VarKey& key = vars.Key(var);
    switch (key.family) {
      case Family::kX:
        expr[key.a][key.b] -= (key.c + inst.patients[key.a].visit) * values[var];
        break;
      case Family::kY:
      case Family::kZB:
      case Family::kZS:
        expr[key.a][key.b] += key.c * values[var];
        break;
      default:
        break;
    }
  }
  std::vector<std::int64_t> out(inst.days, 0);
  for (int t = 0; t < inst.days; ++t) {
    for (int p = 0; p < inst.num_patients(); ++p) out[t] = std::max(out[t], expr[p][t]);
  }
  return out;
}

}  // namespace chemo
