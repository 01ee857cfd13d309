#include "chemo/instance.h"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace chemo {

using ordered_json = nlohmann::ordered_json;

int Instance::RoomsFor(int pathology, int day) const {
  int count = 0;
  for (int r = 0; r < rooms; ++r) count += mcp[r][pathology][day] != 0 ? 1 : 0;
  return count;
}

int Instance::NumCritical() const {
  int count = 0;
  for (const Patient& p : patients) count += p.critical ? 1 : 0;
  return count;
}

namespace {

void Add(std::vector<Violation>& out, std::string entity, std::string rule,
         std::string message) {
  out.push_back({std::move(entity), std::move(rule), std::move(message)});
}

std::string PatientEntity(const Instance& inst, int p) {
  return "patient " + inst.patients[p].id + " (#" + std::to_string(p + 1) + ")";
}

}  // namespace

std::vector<Violation> ValidateInstance(const Instance& inst) {
  std::vector<Violation> out;
  const int num_k = static_cast<int>(inst.pathologies.size());
  if (inst.days < 0 || inst.slots_per_day < 0 || inst.visit_slots < 0 ||
      inst.rooms < 0 || inst.beds < 0 || inst.chairs < 0) {
    Add(out, "instance", "negative-count", "all counts must be >= 0");
    return out;
  }
  if (inst.visit_slots > inst.slots_per_day) {
    Add(out, "instance", "visit-window",
        "visit_slots (" + std::to_string(inst.visit_slots) +
            ") exceeds slots_per_day (" + std::to_string(inst.slots_per_day) + ")");
  }
  bool mcp_shape_ok = static_cast<int>(inst.mcp.size()) == inst.rooms;
  for (int r = 0; mcp_shape_ok && r < inst.rooms; ++r) {
    if (static_cast<int>(inst.mcp[r].size()) != num_k) {
      mcp_shape_ok = false;
      break;
    }
    for (int k = 0; k < num_k; ++k) {
      if (static_cast<int>(inst.mcp[r][k].size()) != inst.days) mcp_shape_ok = false;
    }
  }
  if (!mcp_shape_ok) {
    Add(out, "mcp", "mcp-shape", "mcp must be rooms x pathologies x days");
    return out;
  }
  for (int r = 0; r < inst.rooms; ++r) {
    for (int t = 0; t < inst.days; ++t) {
      int assigned = 0;
      for (int k = 0; k < num_k; ++k) {
        const int w = inst.mcp[r][k][t];
        if (w != 0 && w != 1) {
          Add(out, "room " + std::to_string(r + 1) + " day " + std::to_string(t + 1),
              "mcp-binary", "mcp entries must be 0 or 1");
        }
        assigned += w != 0 ? 1 : 0;
      }
      if (assigned > 1) {
        Add(out, "room " + std::to_string(r + 1) + " day " + std::to_string(t + 1),
            "room-single-pathology",
            "room " + std::to_string(r + 1) + " is devoted to " +
                std::to_string(assigned) + " pathologies on day " +
                std::to_string(t + 1));
      }
    }
  }
  std::set<std::string> ids;
  for (int p = 0; p < inst.num_patients(); ++p) {
    const Patient& pat = inst.patients[p];
    const std::string who = PatientEntity(inst, p);
    if (!ids.insert(pat.id).second) {
      Add(out, who, "duplicate-id", "patient id '" + pat.id + "' is not unique");
    }
    if (pat.pathology < 0 || pat.pathology >= num_k) {
      Add(out, who, "unknown-pathology", "pathology index out of range");
      continue;
    }
    if (pat.visit < 1 || pat.visit > inst.visit_slots) {
      Add(out, who, "visit-duration",
          "visit duration " + std::to_string(pat.visit) + " outside [1, " +
              std::to_string(inst.visit_slots) + "]");
    }
    if (pat.infusion < 1) {
      Add(out, who, "infusion-duration", "infusion duration must be >= 1");
    }
    bool has_room = false;
    for (int t = 0; t < inst.days && !has_room; ++t) has_room = inst.Treatable(p, t);
    if (pat.visit + pat.infusion > inst.slots_per_day) {
      Add(out, who, "unschedulable patient",
          "visit + infusion = " + std::to_string(pat.visit + pat.infusion) +
              " exceeds " + std::to_string(inst.slots_per_day) + " slots");
    } else if (!has_room) {
      Add(out, who, "unschedulable patient",
          "no room serves pathology '" + inst.pathologies[pat.pathology] +
              "' on any day");
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON

std::string InstanceToJson(const Instance& inst) {
  ordered_json j;
  j["days"] = inst.days;
  j["slots_per_day"] = inst.slots_per_day;
  j["visit_slots"] = inst.visit_slots;
  j["pathologies"] = inst.pathologies;
  j["rooms"] = inst.rooms;
  j["beds"] = inst.beds;
  j["chairs"] = inst.chairs;
  j["mcp"] = inst.mcp;
  ordered_json patients = ordered_json::array();
  for (const Patient& p : inst.patients) {
    ordered_json jp;
    jp["id"] = p.id;
    jp["pathology"] = inst.pathologies.at(p.pathology);
    jp["visit"] = p.visit;
    jp["infusion"] = p.infusion;
    jp["critical"] = p.critical;
    patients.push_back(std::move(jp));
  }
  j["patients"] = std::move(patients);
  return j.dump(2) + "\n";
}

namespace {

class SchemaChecker {
 public:
  int Int(const ordered_json& obj, const std::string& key, const std::string& path,
          int min_value) {
    const std::string field = path.empty() ? key : path + "." + key;
    auto it = obj.find(key);
    if (it == obj.end()) {
      failing_.push_back(field + ": missing");
      return min_value;
    }
    if (!it->is_number_integer()) {
      failing_.push_back(field + ": expected integer");
      return min_value;
    }
    const auto value = it->get<std::int64_t>();
    if (value < min_value || value > 1'000'000'000) {
      failing_.push_back(field + ": value " + std::to_string(value) +
                         " out of range (>= " + std::to_string(min_value) + ")");
      return min_value;
    }
    return static_cast<int>(value);
  }

  void Fail(std::string msg) { failing_.push_back(std::move(msg)); }
  const std::vector<std::string>& failing() const { return failing_; }

 private:
  std::vector<std::string> failing_;
};

}  // namespace

Instance InstanceFromJson(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InstanceFormatError(
        "parse error at byte offset " + std::to_string(e.byte) + ": " + e.what(),
        {});
  }
  if (!j.is_object()) throw InstanceFormatError("instance must be a JSON object", {"$"});

  SchemaChecker check;
  Instance inst;
  inst.days = check.Int(j, "days", "", 0);
  inst.slots_per_day = check.Int(j, "slots_per_day", "", 0);
  inst.visit_slots = check.Int(j, "visit_slots", "", 0);
  inst.rooms = check.Int(j, "rooms", "", 0);
  inst.beds = check.Int(j, "beds", "", 0);
  inst.chairs = check.Int(j, "chairs", "", 0);

  std::map<std::string, int> pathology_index;
  if (auto it = j.find("pathologies"); it == j.end() || !it->is_array()) {
    check.Fail("pathologies: expected array of strings");
  } else {
    for (std::size_t k = 0; k < it->size(); ++k) {
      const auto& name = (*it)[k];
      if (!name.is_string()) {
        check.Fail("pathologies[" + std::to_string(k) + "]: expected string");
        continue;
      }
      const auto s = name.get<std::string>();
      if (!pathology_index.emplace(s, static_cast<int>(k)).second) {
        check.Fail("pathologies[" + std::to_string(k) + "]: duplicate name");
      }
      inst.pathologies.push_back(s);
    }
  }

  if (auto it = j.find("mcp"); it == j.end() || !it->is_array()) {
    check.Fail("mcp: expected 3-level array");
  } else {
    for (std::size_t r = 0; r < it->size(); ++r) {
      const auto& room = (*it)[r];
      std::vector<std::vector<int>> by_k;
      if (!room.is_array()) {
        check.Fail("mcp[" + std::to_string(r) + "]: expected array");
        inst.mcp.push_back(by_k);
        continue;
      }
      for (std::size_t k = 0; k < room.size(); ++k) {
        std::vector<int> by_t;
        if (!room[k].is_array()) {
          check.Fail("mcp[" + std::to_string(r) + "][" + std::to_string(k) +
                     "]: expected array");
        } else {
          for (std::size_t t = 0; t < room[k].size(); ++t) {
            const auto& w = room[k][t];
            if (!w.is_number_integer() || (w.get<int>() != 0 && w.get<int>() != 1)) {
              check.Fail("mcp[" + std::to_string(r) + "][" + std::to_string(k) + "][" +
                         std::to_string(t) + "]: expected 0 or 1");
              by_t.push_back(0);
            } else {
              by_t.push_back(w.get<int>());
            }
          }
        }
        by_k.push_back(std::move(by_t));
      }
      inst.mcp.push_back(std::move(by_k));
    }
  }

  if (auto it = j.find("patients"); it == j.end() || !it->is_array()) {
    check.Fail("patients: expected array");
  } else {
    for (std::size_t i = 0; i < it->size(); ++i) {
      const auto& jp = (*it)[i];
      const std::string path = "patients[" + std::to_string(i) + "]";
      if (!jp.is_object()) {
        check.Fail(path + ": expected object");
        continue;
      }
      Patient p;
      if (auto id = jp.find("id"); id != jp.end() && id->is_string()) {
        p.id = id->get<std::string>();
      } else if (id != jp.end() && id->is_number_integer()) {
        p.id = std::to_string(id->get<std::int64_t>());
      } else {
        check.Fail(path + ".id: expected string");
      }
      if (auto k = jp.find("pathology"); k != jp.end() && k->is_string()) {
        auto found = pathology_index.find(k->get<std::string>());
        if (found == pathology_index.end()) {
          check.Fail(path + ".pathology: unknown pathology '" + k->get<std::string>() + "'");
        } else {
          p.pathology = found->second;
        }
      } else {
        check.Fail(path + ".pathology: expected string");
      }
      p.visit = check.Int(jp, "visit", path, 1);
      p.infusion = check.Int(jp, "infusion", path, 1);
      if (auto c = jp.find("critical"); c != jp.end() && c->is_boolean()) {
        p.critical = c->get<bool>();
      } else {
        check.Fail(path + ".critical: expected boolean");
      }
      inst.patients.push_back(std::move(p));
    }
  }

  if (!check.failing().empty()) {
    std::ostringstream msg;
    msg << "schema violation:";
    for (const auto& f : check.failing()) msg << "\n  " << f;
    throw InstanceFormatError(msg.str(), check.failing());
  }
  return inst;
}

void SaveInstance(const Instance& inst, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << InstanceToJson(inst);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

Instance LoadInstance(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return InstanceFromJson(buffer.str());
}

}  // namespace chemo
