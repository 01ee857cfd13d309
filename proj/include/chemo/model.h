#ifndef CHEMO_MODEL_H_
#define CHEMO_MODEL_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace chemo {

enum class Sense { kMaximize, kMinimize };
enum class Relation { kLessEqual, kEqual, kGreaterEqual };
enum class VarKind { kBinary, kInteger };

struct Variable {
  std::string name;
  VarKind kind = VarKind::kBinary;
  std::int64_t lower = 0;
  std::int64_t upper = 1;
};

struct Term {
  int var = 0;
  std::int64_t coef = 0;
};

struct Constraint {
  std::string name;
  std::vector<Term> terms;
  Relation relation = Relation::kLessEqual;
  std::int64_t rhs = 0;
};

// Solver-neutral integer linear program. Every coefficient, bound and rhs is
// an integer; assignments are full vectors indexed by variable id.
class MilpModel {
 public:
  int AddBinary(std::string name);
  int AddInteger(std::string name, std::int64_t lower, std::int64_t upper);
  // Terms referring to the same variable are merged; zero terms dropped.
  int AddConstraint(std::string name, std::vector<Term> terms, Relation relation,
                    std::int64_t rhs);
  void SetObjective(Sense sense, std::vector<Term> terms);

  int num_variables() const { return static_cast<int>(variables_.size()); }
  int num_constraints() const { return static_cast<int>(constraints_.size()); }
  const std::vector<Variable>& variables() const { return variables_; }
  const Variable& variable(int id) const { return variables_[id]; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  const Constraint& constraint(int id) const { return constraints_[id]; }
  Sense sense() const { return sense_; }
  const std::vector<Term>& objective() const { return objective_; }

  std::optional<int> FindVariable(const std::string& name) const;

  const std::vector<std::int64_t>& warm_start() const { return warm_start_; }
  bool has_warm_start() const { return !warm_start_.empty(); }
  void SetWarmStart(std::vector<std::int64_t> values);
  void ClearWarmStart() { warm_start_.clear(); }

  std::int64_t Objective(std::span<const std::int64_t> values) const;
  std::int64_t Activity(const Constraint& row, std::span<const std::int64_t> values) const;
  // Indices of rows violated by `values`, plus a pseudo-row -1 when a value
  // lies outside its variable bounds. Empty iff feasible.
  std::vector<int> Violations(std::span<const std::int64_t> values) const;
  bool IsFeasible(std::span<const std::int64_t> values) const {
    return Violations(values).empty();
  }

 private:
  std::vector<Variable> variables_;
  std::vector<Constraint> constraints_;
  std::unordered_map<std::string, int> by_name_;
  Sense sense_ = Sense::kMaximize;
  std::vector<Term> objective_;
  std::vector<std::int64_t> warm_start_;
};

bool Satisfied(Relation relation, std::int64_t activity, std::int64_t rhs);

// Variable families. Index fields a..d carry (patient, day, slot, resource)
// for the scheduling families and the family-specific tuple for bound models,
// see VarMap::Name.
enum class Family {
  kX,       // x_p_t_h
  kY,       // y_p_t_h
  kZB,      // zB_p_t_h
  kZS,      // zS_p_t_h
  kW,       // W_t
  kAlpha,   // alpha_p_t_h_r
  kBeta,    // beta_p_t_h_b
  kGammaB,  // gB_p_t_h_b
  kGammaS,  // gS_p_t_h_s
  kMu,      // mu_p_s
  kLambda,  // lam_p_t_b
  kMuB,     // muB_p_t_b
  kMuS,     // muS_p_t_s
  kRhoB,    // rhoB_i_t_b
  kRhoS,    // rhoS_i_t_s
};

struct VarKey {
  Family family = Family::kX;
  int a = -1;
  int b = -1;
  int c = -1;
  int d = -1;

  bool operator==(const VarKey&) const = default;
};

// Bidirectional map between structured indices and model variable ids.
// Stored indices are internal (0-based patients/days/resources, 1-based
// slots and 0-based unused-slot levels); names use the external 1-based
// numbering, e.g. x_3_1_12 is patient #3 on day 1 starting at slot 12.
class VarMap {
 public:
  int Add(MilpModel& model, const VarKey& key);
  int AddInteger(MilpModel& model, const VarKey& key, std::int64_t lower,
                 std::int64_t upper);
  std::optional<int> Find(const VarKey& key) const;
  bool Contains(const VarKey& key) const { return Find(key).has_value(); }
  const VarKey& Key(int var) const { return keys_[var]; }
  int size() const { return static_cast<int>(keys_.size()); }
  // All variable ids of one family, in creation order.
  std::vector<int> OfFamily(Family family) const;

  static std::string Name(const VarKey& key);
  static std::optional<VarKey> Parse(const std::string& name);

 private:
  static std::uint64_t Pack(const VarKey& key);
  std::vector<VarKey> keys_;
  std::unordered_map<std::uint64_t, int> index_;
};

}  // namespace chemo

#endif  // CHEMO_MODEL_H_
