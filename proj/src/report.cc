#include "chemo/report.h"

#include <algorithm>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

namespace chemo {
namespace {

using ordered_json = nlohmann::ordered_json;

const char* ResourceName(InfusionClass cls) {
  return cls == InfusionClass::kChair ? "chair" : "bed";
}

std::string Where(const char* kind, int index, int day, int slot) {
  return std::string(kind) + " " + std::to_string(index + 1) + " day " +
         std::to_string(day + 1) + " slot " + std::to_string(slot);
}

void Tally(GroupTally& g, bool scheduled) {
  ++g.total;
  if (!scheduled) ++g.unscheduled;
}

void Finalize(GroupTally& g) {
  g.percent = g.total == 0 ? 0.0 : 100.0 * g.unscheduled / g.total;
}

ordered_json TallyJson(const GroupTally& g) {
  return ordered_json{{"total", g.total}, {"unscheduled", g.unscheduled}, {"percent", g.percent}};
}

}  // namespace

std::vector<Violation> ValidateSchedule(const CompleteSchedule& schedule, const Instance& inst) {
  std::vector<Violation> out;
  if (static_cast<int>(schedule.entries.size()) != inst.num_patients()) {
    out.push_back({"schedule", "size", "one entry per patient expected"});
    return out;
  }
  const int H = inst.slots_per_day;
  // holder[kind][day][index][slot] = patient + 1 (0 = free)
  using Timeline = std::vector<std::vector<std::vector<int>>>;
  Timeline rooms(inst.days, std::vector<std::vector<int>>(inst.rooms, std::vector<int>(H + 2, 0)));
  Timeline chairs(inst.days,
                  std::vector<std::vector<int>>(inst.chairs, std::vector<int>(H + 2, 0)));
  Timeline beds(inst.days, std::vector<std::vector<int>>(inst.beds, std::vector<int>(H + 2, 0)));
  // First conflicting slot per (kind, day, index) so each clash is reported once.
  auto occupy = [&](Timeline& tl, const char* kind, int t, int idx, int from, int len, int p) {
    for (int h = from; h < from + len; ++h) {
      int& cell = tl[t][idx][h];
      if (cell != 0) {
        out.push_back({Where(kind, idx, t, h), std::string(kind) + "-exclusivity",
                       "patients " + inst.patients[cell - 1].id + " and " + inst.patients[p].id +
                           " overlap"});
        return;
      }
      cell = p + 1;
    }
  };
  for (int p = 0; p < inst.num_patients(); ++p) {
    const auto& e = schedule.entries[p];
    if (!e) continue;
    const Patient& pat = inst.patients[p];
    const std::string who = "patient " + pat.id;
    bool placeable = true;
    if (e->day < 0 || e->day >= inst.days) {
      out.push_back({who, "day", "day out of range"});
      continue;
    }
    if (e->room < 0 || e->room >= inst.rooms) {
      out.push_back({who, "room-range", "room index out of range"});
      placeable = false;
    } else if (!inst.RoomServes(e->room, pat.pathology, e->day)) {
      out.push_back({who, "room-pathology",
                     "room " + std::to_string(e->room + 1) + " does not serve " +
                         inst.pathologies[pat.pathology] + " on day " +
                         std::to_string(e->day + 1)});
    }
    const int pool = e->resource_type == InfusionClass::kChair ? inst.chairs : inst.beds;
    if (e->resource < 0 || e->resource >= pool) {
      out.push_back({who, "resource-range", std::string(ResourceName(e->resource_type)) +
                                                " index out of range"});
      placeable = false;
    }
    if (pat.critical && e->resource_type != InfusionClass::kBed) {
      out.push_back({who, "critical-bed", "critical patient must be infused in a bed"});
    }
    if (e->visit_start < 1 || e->visit_start + pat.visit - 1 > inst.visit_slots) {
      out.push_back({who, "visit-window", "visit outside the visiting window"});
      placeable = false;
    }
    if (e->infusion_start < 1 || e->infusion_start + pat.infusion - 1 > H) {
      out.push_back({who, "infusion-window", "infusion outside the day"});
      placeable = false;
    }
    if (e->infusion_start < e->visit_start + pat.visit) {
      out.push_back({who, "precedence", "infusion starts before the visit ends"});
    }
    if (!placeable) continue;
    occupy(rooms, "room", e->day, e->room, e->visit_start, pat.visit, p);
    if (e->resource_type == InfusionClass::kChair) {
      occupy(chairs, "chair", e->day, e->resource, e->infusion_start, pat.infusion, p);
    } else {
      occupy(beds, "bed", e->day, e->resource, e->infusion_start, pat.infusion, p);
    }
  }
  return out;
}

std::vector<int> SimulateWaiting(const CompleteSchedule& schedule, const Instance& inst) {
  std::vector<int> out(inst.days, 0);
  // Walk each day's clock; remember when each patient left the exam room.
  for (int t = 0; t < inst.days; ++t) {
    std::unordered_map<int, int> left_room;
    for (int h = 1; h <= inst.slots_per_day + 1; ++h) {
      for (int p = 0; p < inst.num_patients(); ++p) {
        const auto& e = schedule.entries[p];
        if (!e || e->day != t) continue;
        if (e->visit_start + inst.patients[p].visit == h) left_room[p] = h;
        if (e->infusion_start == h) {
          auto it = left_room.find(p);
          const int waited = it == left_room.end() ? 0 : h - it->second;
          out[t] = std::max(out[t], waited);
        }
      }
    }
  }
  return out;
}

MetricsRecord Evaluate(const CompleteSchedule& schedule, const Instance& inst) {
  const auto violations = ValidateSchedule(schedule, inst);
  if (!violations.empty()) {
    throw std::invalid_argument("cannot evaluate an invalid schedule: " +
                                violations.front().entity + ": " + violations.front().message);
  }
  MetricsRecord m;
  m.phi2.assign(inst.days, 0);
  m.by_pathology.resize(inst.pathologies.size());
  for (std::size_t k = 0; k < inst.pathologies.size(); ++k) {
    m.by_pathology[k].group = inst.pathologies[k];
  }
  m.critical.group = "critical";
  m.non_critical.group = "non-critical";
  for (int p = 0; p < inst.num_patients(); ++p) {
    const auto& e = schedule.entries[p];
    const Patient& pat = inst.patients[p];
    Tally(m.by_pathology[pat.pathology], e.has_value());
    Tally(pat.critical ? m.critical : m.non_critical, e.has_value());
    if (!e) {
      ++m.unscheduled_total;
      continue;
    }
    ++m.phi1;
    if (e->resource_type == InfusionClass::kChair) ++m.phi3;
    m.phi2[e->day] = std::max(m.phi2[e->day], e->infusion_start - e->visit_start - pat.visit);
  }
  for (int w : m.phi2) m.phi2_total += w;
  for (auto& g : m.by_pathology) Finalize(g);
  Finalize(m.critical);
  Finalize(m.non_critical);
  return m;
}

std::string MetricsToJson(const MetricsRecord& m) {
  ordered_json groups = ordered_json::object();
  for (const auto& g : m.by_pathology) groups[g.group] = TallyJson(g);
  ordered_json j{{"phi1", m.phi1},
                 {"phi2_total", m.phi2_total},
                 {"phi2", m.phi2},
                 {"phi3", m.phi3},
                 {"unscheduled_total", m.unscheduled_total},
                 {"unscheduled",
                  {{"by_pathology", groups},
                   {"critical", TallyJson(m.critical)},
                   {"non_critical", TallyJson(m.non_critical)}}}};
  return j.dump(2) + "\n";
}

namespace {

std::string EmitJson(const CompleteSchedule& schedule, const MetricsRecord& metrics,
                     const Instance& inst) {
  ordered_json appts = ordered_json::array();
  for (int p = 0; p < inst.num_patients(); ++p) {
    const auto& e = schedule.entries[p];
    if (!e) continue;
    appts.push_back({{"patient", inst.patients[p].id},
                     {"day", e->day + 1},
                     {"visit_start", e->visit_start},
                     {"room", e->room + 1},
                     {"infusion_start", e->infusion_start},
                     {"resource_type", ResourceName(e->resource_type)},
                     {"resource", e->resource + 1}});
  }
  ordered_json j{{"appointments", appts}, {"metrics", ordered_json::parse(MetricsToJson(metrics))}};
  return j.dump(2) + "\n";
}

std::string EmitCsv(const CompleteSchedule& schedule, const Instance& inst) {
  std::ostringstream out;
  out << "patient_id,pathology,critical,day,visit_start,visit_end,room,infusion_start,"
         "infusion_end,resource_type,resource_id,wait_slots\n";
  for (int p = 0; p < inst.num_patients(); ++p) {
    const auto& e = schedule.entries[p];
    if (!e) continue;
    const Patient& pat = inst.patients[p];
    out << pat.id << ',' << inst.pathologies[pat.pathology] << ','
        << (pat.critical ? "true" : "false") << ',' << e->day + 1 << ',' << e->visit_start << ','
        << e->visit_start + pat.visit - 1 << ',' << e->room + 1 << ',' << e->infusion_start << ','
        << e->infusion_start + pat.infusion - 1 << ',' << ResourceName(e->resource_type) << ','
        << e->resource + 1 << ',' << e->infusion_start - e->visit_start - pat.visit << '\n';
  }
  return out.str();
}

std::string EmitGantt(const CompleteSchedule& schedule, const Instance& inst) {
  std::size_t width = 1;
  for (const Patient& p : inst.patients) width = std::max(width, p.id.size());
  const int H = inst.slots_per_day;
  std::ostringstream out;
  for (int t = 0; t < inst.days; ++t) {
    out << "Day " << t + 1 << " (" << H << " slots, visits in 1.." << inst.visit_slots << ")\n";
    // label -> cells
    std::vector<std::pair<std::string, std::vector<std::string>>> strips;
    auto strip = [&](const std::string& label) -> std::vector<std::string>& {
      for (auto& s : strips) {
        if (s.first == label) return s.second;
      }
      strips.push_back({label, std::vector<std::string>(H + 1, std::string(width, '.'))});
      return strips.back().second;
    };
    // Fixed order: rooms, chairs, beds.
    std::vector<std::pair<int, std::string>> order;
    for (int p = 0; p < inst.num_patients(); ++p) {
      const auto& e = schedule.entries[p];
      if (!e || e->day != t) continue;
      order.push_back({e->room, "R" + std::to_string(e->room + 1)});
      const bool chair = e->resource_type == InfusionClass::kChair;
      order.push_back({(chair ? 1000 : 2000) + e->resource,
                       (chair ? "S" : "B") + std::to_string(e->resource + 1)});
    }
    std::sort(order.begin(), order.end());
    order.erase(std::unique(order.begin(), order.end()), order.end());
    for (const auto& o : order) strip(o.second);
    for (int p = 0; p < inst.num_patients(); ++p) {
      const auto& e = schedule.entries[p];
      if (!e || e->day != t) continue;
      const Patient& pat = inst.patients[p];
      std::string id = pat.id;
      id.resize(width, ' ');
      auto& room = strip("R" + std::to_string(e->room + 1));
      for (int h = e->visit_start; h < e->visit_start + pat.visit && h <= H; ++h) room[h] = id;
      const bool chair = e->resource_type == InfusionClass::kChair;
      auto& inf = strip((chair ? "S" : "B") + std::to_string(e->resource + 1));
      for (int h = e->infusion_start; h < e->infusion_start + pat.infusion && h <= H; ++h) {
        inf[h] = id;
      }
    }
    for (const auto& [label, cells] : strips) {
      out << label << ":";
      for (int h = 1; h <= H; ++h) out << ' ' << cells[h];
      out << '\n';
    }
  }
  return out.str();
}

}  // namespace

std::string Emit(const CompleteSchedule& schedule, const MetricsRecord& metrics,
                 const Instance& inst, ReportFormat format) {
  switch (format) {
    case ReportFormat::kJson:
      return EmitJson(schedule, metrics, inst);
    case ReportFormat::kCsv:
      return EmitCsv(schedule, inst);
    case ReportFormat::kGantt:
      return EmitGantt(schedule, inst);
  }
  return {};
}

CompleteSchedule ScheduleFromJson(const std::string& text, const Instance& inst) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument("schedule JSON parse error at byte " + std::to_string(e.byte));
  }
  std::unordered_map<std::string, int> index;
  for (int p = 0; p < inst.num_patients(); ++p) index[inst.patients[p].id] = p;
  CompleteSchedule out = CompleteSchedule::Empty(inst);
  if (!j.is_object() || !j.contains("appointments") || !j["appointments"].is_array()) {
    throw std::invalid_argument("schedule JSON needs an 'appointments' array");
  }
  auto get_int = [](const ordered_json& a, const char* key) {
    if (!a.contains(key) || !a[key].is_number_integer()) {
      throw std::invalid_argument(std::string("appointment field '") + key +
                                  "' must be an integer");
    }
    return a[key].get<int>();
  };
  for (const auto& a : j["appointments"]) {
    if (!a.is_object() || !a.contains("patient") || !a["patient"].is_string()) {
      throw std::invalid_argument("appointment without a patient id");
    }
    const std::string id = a["patient"].get<std::string>();
    auto it = index.find(id);
    if (it == index.end()) throw std::invalid_argument("unknown patient " + id);
    if (out.entries[it->second]) throw std::invalid_argument("patient " + id + " listed twice");
    const std::string type = a.value("resource_type", "");
    if (type != "chair" && type != "bed") {
      throw std::invalid_argument("resource_type must be 'chair' or 'bed'");
    }
    out.entries[it->second] = Appointment{
        get_int(a, "day") - 1,   get_int(a, "visit_start"),
        get_int(a, "room") - 1,  get_int(a, "infusion_start"),
        type == "chair" ? InfusionClass::kChair : InfusionClass::kBed,
        get_int(a, "resource") - 1};
  }
  return out;
}

}  // namespace chemo
