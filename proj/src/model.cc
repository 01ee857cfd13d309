#include "chemo/model.h"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace chemo {

int MilpModel::AddBinary(std::string name) { return AddInteger(std::move(name), 0, 1); }

int MilpModel::AddInteger(std::string name, std::int64_t lower, std::int64_t upper) {
  if (lower > upper) throw std::invalid_argument("empty domain for " + name);
  const int id = num_variables();
  if (!by_name_.emplace(name, id).second) {
    throw std::invalid_argument("duplicate variable name " + name);
  }
  const VarKind kind = lower == 0 && upper == 1 ? VarKind::kBinary : VarKind::kInteger;
  variables_.push_back({std::move(name), kind, lower, upper});
  return id;
}

namespace {

std::vector<Term> Canonical(std::vector<Term> terms, int num_vars) {
  std::map<int, std::int64_t> merged;
  for (const Term& t : terms) {
    if (t.var < 0 || t.var >= num_vars) throw std::out_of_range("term references unknown variable");
    merged[t.var] += t.coef;
  }
  std::vector<Term> out;
  out.reserve(merged.size());
  for (const auto& [var, coef] : merged) {
    if (coef != 0) out.push_back({var, coef});
  }
  return out;
}

}  // namespace

int MilpModel::AddConstraint(std::string name, std::vector<Term> terms, Relation relation,
                             std::int64_t rhs) {
  constraints_.push_back({std::move(name), Canonical(std::move(terms), num_variables()),
                          relation, rhs});
  return num_constraints() - 1;
}

void MilpModel::SetObjective(Sense sense, std::vector<Term> terms) {
  sense_ = sense;
  objective_ = Canonical(std::move(terms), num_variables());
}

std::optional<int> MilpModel::FindVariable(const std::string& name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

void MilpModel::SetWarmStart(std::vector<std::int64_t> values) {
  if (static_cast<int>(values.size()) != num_variables()) {
    throw std::invalid_argument("warm start must assign every variable");
  }
  warm_start_ = std::move(values);
}

std::int64_t MilpModel::Objective(std::span<const std::int64_t> values) const {
  std::int64_t total = 0;
  for (const Term& t : objective_) total += t.coef * values[t.var];
  return total;
}

std::int64_t MilpModel::Activity(const Constraint& row,
                                 std::span<const std::int64_t> values) const {
  std::int64_t total = 0;
  for (const Term& t : row.terms) total += t.coef * values[t.var];
  return total;
}

bool Satisfied(Relation relation, std::int64_t activity, std::int64_t rhs) {
  switch (relation) {
    case Relation::kLessEqual:
      return activity <= rhs;
    case Relation::kEqual:
      return activity == rhs;
    case Relation::kGreaterEqual:
      return activity >= rhs;
  }
  return false;
}

std::vector<int> MilpModel::Violations(std::span<const std::int64_t> values) const {
  std::vector<int> out;
  if (static_cast<int>(values.size()) != num_variables()) {
    out.push_back(-1);
    return out;
  }
  for (int j = 0; j < num_variables(); ++j) {
    if (values[j] < variables_[j].lower || values[j] > variables_[j].upper) {
      out.push_back(-1);
      break;
    }
  }
  for (int i = 0; i < num_constraints(); ++i) {
    const Constraint& row = constraints_[i];
    if (!Satisfied(row.relation, Activity(row, values), row.rhs)) out.push_back(i);
  }
  return out;
}

// ---------------------------------------------------------------------------
// VarMap

std::uint64_t VarMap::Pack(const VarKey& key) {
  auto field = [](int v) -> std::uint64_t {
    if (v < -1 || v >= 32766) throw std::out_of_range("variable index too large");
    return static_cast<std::uint64_t>(v + 1);
  };
  return (static_cast<std::uint64_t>(key.family) << 60) | (field(key.a) << 45) |
         (field(key.b) << 30) | (field(key.c) << 15) | field(key.d);
}

int VarMap::Add(MilpModel& model, const VarKey& key) {
  return AddInteger(model, key, 0, 1);
}

int VarMap::AddInteger(MilpModel& model, const VarKey& key, std::int64_t lower,
                       std::int64_t upper) {
  if (model.num_variables() != size()) {
    throw std::logic_error("VarMap and model are out of sync");
  }
  const int id = model.AddInteger(Name(key), lower, upper);
  keys_.push_back(key);
  index_.emplace(Pack(key), id);
  return id;
}

std::optional<int> VarMap::Find(const VarKey& key) const {
  auto it = index_.find(Pack(key));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<int> VarMap::OfFamily(Family family) const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i) {
    if (keys_[i].family == family) out.push_back(i);
  }
  return out;
}

namespace {

struct FamilyInfo {
  Family family;
  const char* prefix;
  int arity;
  // Per field: offset added when rendering the external name.
  int offset[4];
};

// Patients, days and resources are rendered 1-based; slots are already
// 1-based and unused-slot levels stay 0-based.
constexpr FamilyInfo kFamilies[] = {
    {Family::kX, "x", 3, {1, 1, 0, 0}},
    {Family::kY, "y", 3, {1, 1, 0, 0}},
    {Family::kZB, "zB", 3, {1, 1, 0, 0}},
    {Family::kZS, "zS", 3, {1, 1, 0, 0}},
    {Family::kW, "W", 1, {1, 0, 0, 0}},
    {Family::kAlpha, "alpha", 4, {1, 1, 0, 1}},
    {Family::kBeta, "beta", 4, {1, 1, 0, 1}},
    {Family::kGammaB, "gB", 4, {1, 1, 0, 1}},
    {Family::kGammaS, "gS", 4, {1, 1, 0, 1}},
    {Family::kMu, "mu", 2, {1, 1, 0, 0}},
    {Family::kLambda, "lam", 3, {1, 1, 1, 0}},
    {Family::kMuB, "muB", 3, {1, 1, 1, 0}},
    {Family::kMuS, "muS", 3, {1, 1, 1, 0}},
    {Family::kRhoB, "rhoB", 3, {0, 1, 1, 0}},
    {Family::kRhoS, "rhoS", 3, {0, 1, 1, 0}},
};

const FamilyInfo& Info(Family family) {
  for (const auto& info : kFamilies) {
    if (info.family == family) return info;
  }
  throw std::logic_error("unknown family");
}

}  // namespace

std::string VarMap::Name(const VarKey& key) {
  const FamilyInfo& info = Info(key.family);
  const int fields[4] = {key.a, key.b, key.c, key.d};
  std::string name = info.prefix;
  for (int i = 0; i < info.arity; ++i) {
    name += '_';
    name += std::to_string(fields[i] + info.offset[i]);
  }
  return name;
}

std::optional<VarKey> VarMap::Parse(const std::string& name) {
  const auto sep = name.find('_');
  if (sep == std::string::npos) return std::nullopt;
  const std::string prefix = name.substr(0, sep);
  for (const auto& info : kFamilies) {
    if (prefix != info.prefix) continue;
    int fields[4] = {-1, -1, -1, -1};
    std::size_t pos = sep;
    for (int i = 0; i < info.arity; ++i) {
      if (pos >= name.size() || name[pos] != '_') return std::nullopt;
      ++pos;
      std::size_t end = pos;
      while (end < name.size() && name[end] >= '0' && name[end] <= '9') ++end;
      if (end == pos || end - pos > 6) return std::nullopt;
      fields[i] = std::stoi(name.substr(pos, end - pos)) - info.offset[i];
      pos = end;
    }
    if (pos != name.size()) return std::nullopt;
    return VarKey{info.family, fields[0], fields[1], fields[2], fields[3]};
  }
  return std::nullopt;
}

}  // namespace chemo
