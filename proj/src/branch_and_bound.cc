#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <limits>
#include <map>
#include <numeric>

#include "chemo/solver.h"

namespace chemo {
namespace {

using Clock = std::chrono::steady_clock;

// Row in two-sided form lo <= sum a_j x_j <= hi.
struct Row {
  std::vector<Term> terms;
  bool has_lo = false;
  bool has_hi = false;
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  std::int64_t min_act = 0;
  std::int64_t max_act = 0;
  // Largest |a_j| * (ub_j - lb_j) over the root domains: once the slack of a
  // side is at least this, the side cannot tighten any bound.
  std::int64_t span = 0;
};

struct TrailEntry {
  int var;
  std::int64_t lb;
  std::int64_t ub;
  int lb_why;
  int ub_why;
};

// Sets of decision depths, stored as fixed-width bitsets in one arena.
// Every bound carries the set of branching decisions it follows from; a
// subtree refuted without using its own decision is skipped on the sibling.
class DepthSets {
 public:
  void Init(int max_depth) {
    words_ = max_depth / 64 + 1;
    data_.assign(words_, 0);  // id 0 is the empty set
  }
  int words() const { return words_; }
  std::size_t size() const { return data_.size() / words_; }
  void Truncate(std::size_t count) { data_.resize(count * words_); }
  int Store(const std::vector<std::uint64_t>& bits) {
    data_.insert(data_.end(), bits.begin(), bits.end());
    return static_cast<int>(size()) - 1;
  }
  void OrInto(int id, std::vector<std::uint64_t>& bits) const {
    if (id == 0) return;
    const std::uint64_t* src = &data_[static_cast<std::size_t>(id) * words_];
    for (int w = 0; w < words_; ++w) bits[w] |= src[w];
  }

 private:
  int words_ = 1;
  std::vector<std::uint64_t> data_;
};

using Depths = std::vector<std::uint64_t>;

bool Has(const Depths& d, int depth) { return (d[depth / 64] >> (depth % 64)) & 1; }
void Set(Depths& d, int depth) { d[depth / 64] |= std::uint64_t{1} << (depth % 64); }
void Clear(Depths& d, int depth) { d[depth / 64] &= ~(std::uint64_t{1} << (depth % 64)); }

class Search {
 public:
  Search(const MilpModel& model, const SolveOptions& opts)
      : model_(model), opts_(opts), start_(Clock::now()) {
    const int n = model.num_variables();
    lb_.resize(n);
    ub_.resize(n);
    for (int j = 0; j < n; ++j) {
      lb_[j] = model.variable(j).lower;
      ub_[j] = model.variable(j).upper;
    }
    // Internally always maximize.
    sign_ = model.sense() == Sense::kMaximize ? 1 : -1;
    obj_.assign(n, 0);
    for (const Term& t : model.objective()) obj_[t.var] = sign_ * t.coef;

    for (const Constraint& c : model.constraints()) {
      Row row;
      row.terms = c.terms;
      row.has_hi = c.relation != Relation::kGreaterEqual;
      row.has_lo = c.relation != Relation::kLessEqual;
      row.hi = row.lo = c.rhs;
      rows_.push_back(std::move(row));
    }
    AddDerivedCliques();
    // The objective doubles as a cutoff row once an incumbent exists.
    Row objective_row;
    for (int j = 0; j < n; ++j) {
      if (obj_[j] != 0) objective_row.terms.push_back({j, obj_[j]});
    }
    objective_row_ = static_cast<int>(rows_.size());
    rows_.push_back(std::move(objective_row));

    columns_.resize(n);
    for (int r = 0; r < static_cast<int>(rows_.size()); ++r) {
      Row& row = rows_[r];
      for (const Term& t : row.terms) {
        columns_[t.var].push_back({r, t.coef});
        row.span = std::max(row.span, std::abs(t.coef) * (ub_[t.var] - lb_[t.var]));
        if (t.coef > 0) {
          row.min_act += t.coef * lb_[t.var];
          row.max_act += t.coef * ub_[t.var];
        } else {
          row.min_act += t.coef * ub_[t.var];
          row.max_act += t.coef * lb_[t.var];
        }
      }
    }
    in_queue_.assign(rows_.size(), false);
    BuildObjectiveGroups();
    FindKnapsackRows();

    // Each branching strictly shrinks one domain, which bounds the depth.
    std::int64_t max_depth = 1;
    for (int j = 0; j < n; ++j) max_depth += ub_[j] - lb_[j];
    sets_.Init(static_cast<int>(std::min<std::int64_t>(max_depth, 1 << 20)));
    lb_why_.assign(n, 0);
    ub_why_.assign(n, 0);
    reason_.assign(sets_.words(), 0);

    order_.resize(n);
    std::iota(order_.begin(), order_.end(), 0);
    std::stable_sort(order_.begin(), order_.end(), [&](int a, int b) {
      return std::abs(obj_[a]) > std::abs(obj_[b]);
    });
  }

  SolveResult Run() {
    for (int r = 0; r < static_cast<int>(rows_.size()); ++r) Enqueue(r);
    const bool root_ok = Propagate();
    const std::int64_t root_bound = root_ok ? Bound() : 0;

    if (model_.has_warm_start() && model_.IsFeasible(model_.warm_start())) {
      Accept(model_.warm_start());
    }
    if (!root_ok) {
      return Finish(incumbent_ ? SolveStatus::kOptimal : SolveStatus::kInfeasible, root_bound);
    }
    if (Elapsed() >= opts_.time_limit) {
      return Finish(incumbent_ ? SolveStatus::kFeasibleTimeLimit
                               : SolveStatus::kNoSolutionTimeLimit,
                    root_bound);
    }
    if (incumbent_) {
      Enqueue(objective_row_);
      if (!Propagate()) return Finish(SolveStatus::kOptimal, root_bound);
    }
    Dive(1);
    if (stopped_) {
      return Finish(incumbent_ ? SolveStatus::kFeasibleTimeLimit
                               : SolveStatus::kNoSolutionTimeLimit,
                    root_bound);
    }
    return Finish(incumbent_ ? SolveStatus::kOptimal : SolveStatus::kInfeasible, root_bound);
  }

 private:
  double Elapsed() const {
    return std::chrono::duration<double>(Clock::now() - start_).count();
  }

  bool IsBinary(int j) const {
    return model_.variable(j).lower == 0 && model_.variable(j).upper == 1;
  }

  // Rows "sum x <= 1" over binaries with unit coefficients.
  bool IsCliqueRow(const Row& row) const {
    if (!row.has_hi || row.hi != 1 || row.has_lo) return false;
    for (const Term& t : row.terms) {
      if (t.coef != 1 || !IsBinary(t.var)) return false;
    }
    return row.terms.size() >= 2;
  }

  // For every unit equality "sum A - sum B = 0" whose A side lies inside a
  // clique C, sum B <= sum A, so the B sides of all such rows sharing C form
  // another clique. Adding those rows lets propagation and the objective
  // bound see, e.g., that a patient takes at most one infusion slot per week.
  void AddDerivedCliques() {
    std::vector<int> clique_of(model_.num_variables(), -1);
    const int base = static_cast<int>(rows_.size());
    for (int r = 0; r < base; ++r) {
      if (!IsCliqueRow(rows_[r])) continue;
      for (const Term& t : rows_[r].terms) {
        if (clique_of[t.var] < 0) clique_of[t.var] = r;
      }
    }
    std::map<int, std::vector<int>> unions;
    for (int r = 0; r < base; ++r) {
      const Row& row = rows_[r];
      if (!row.has_lo || !row.has_hi || row.lo != 0 || row.hi != 0) continue;
      std::vector<int> pos, neg;
      bool unit = true;
      for (const Term& t : row.terms) {
        if (!IsBinary(t.var) || std::abs(t.coef) != 1) unit = false;
        (t.coef > 0 ? pos : neg).push_back(t.var);
      }
      if (!unit || pos.empty() || neg.empty()) continue;
      for (const auto* side : {&pos, &neg}) {
        const int c = clique_of[side->front()];
        if (c < 0) continue;
        const bool inside = std::all_of(side->begin(), side->end(),
                                        [&](int v) { return clique_of[v] == c; });
        if (!inside) continue;
        const auto& other = side == &pos ? neg : pos;
        auto& u = unions[c];
        u.insert(u.end(), other.begin(), other.end());
      }
    }
    for (auto& [c, members] : unions) {
      std::sort(members.begin(), members.end());
      members.erase(std::unique(members.begin(), members.end()), members.end());
      if (members.size() < 2) continue;
      Row row;
      row.has_hi = true;
      row.hi = 1;
      for (int v : members) row.terms.push_back({v, 1});
      rows_.push_back(std::move(row));
    }
  }

  // Partition improving binary objective variables into disjoint cliques.
  void BuildObjectiveGroups() {
    const int n = model_.num_variables();
    std::vector<bool> grouped(n, false);
    for (int r = 0; r < objective_row_; ++r) {
      if (!IsCliqueRow(rows_[r])) continue;
      std::vector<int> group;
      for (const Term& t : rows_[r].terms) {
        if (!grouped[t.var] && obj_[t.var] > 0) group.push_back(t.var);
      }
      if (group.size() < 2) continue;
      for (int v : group) grouped[v] = true;
      groups_.push_back(std::move(group));
    }
    for (int j = 0; j < n; ++j) {
      if (obj_[j] != 0 && !grouped[j]) loose_.push_back(j);
    }
  }

  // Rows "sum a_j x_j <= b" with a_j >= 0 over improving objective variables
  // only, excluding plain cliques, feed the knapsack bound.
  void FindKnapsackRows() {
    for (int r = 0; r < objective_row_; ++r) {
      const Row& row = rows_[r];
      if (!row.has_hi || row.has_lo || IsCliqueRow(row) || row.terms.size() < 2) continue;
      const bool pure = std::all_of(row.terms.begin(), row.terms.end(), [&](const Term& t) {
        return t.coef >= 0 && obj_[t.var] > 0 && IsBinary(t.var);
      });
      if (pure) knapsack_rows_.push_back(r);
    }
    weight_.assign(model_.num_variables(), -1);
  }

  // Greedy fractional knapsack over one row: every clique group becomes one
  // item with its best profit and lightest free weight, and objective
  // variables outside the row are taken for free.
  std::int64_t KnapsackBound(const Row& row) const {
    for (const Term& t : row.terms) weight_[t.var] = t.coef;
    std::int64_t fixed = 0;
    long double free_profit = 0;
    items_.clear();
    auto add_item = [&](std::int64_t profit, std::int64_t weight) {
      if (weight <= 0) {
        free_profit += profit;
      } else {
        items_.push_back({profit, weight});
      }
    };
    for (const auto& group : groups_) {
      std::int64_t profit = 0, weight = std::numeric_limits<std::int64_t>::max();
      bool taken = false, any = false;
      for (int v : group) {
        if (lb_[v] == 1) {
          fixed += obj_[v];
          taken = true;
          break;
        }
        if (ub_[v] == 1) {
          any = true;
          profit = std::max(profit, obj_[v]);
          weight = std::min(weight, std::max<std::int64_t>(weight_[v], 0));
        }
      }
      if (!taken && any) add_item(profit, weight);
    }
    for (int j : loose_) {
      if (obj_[j] < 0) {
        fixed += obj_[j] * lb_[j];
        continue;
      }
      fixed += obj_[j] * lb_[j];
      for (std::int64_t k = lb_[j]; k < ub_[j]; ++k) add_item(obj_[j], std::max<std::int64_t>(weight_[j], 0));
    }
    for (const Term& t : row.terms) weight_[t.var] = -1;

    std::sort(items_.begin(), items_.end(), [](const auto& a, const auto& b) {
      return a.first * b.second > b.first * a.second;
    });
    long double room = static_cast<long double>(row.hi - row.min_act);
    long double total = free_profit;
    for (const auto& [profit, weight] : items_) {
      if (room <= 0) break;
      if (weight <= room) {
        total += profit;
        room -= weight;
      } else {
        total += profit * room / weight;
        room = 0;
      }
    }
    return fixed + static_cast<std::int64_t>(std::floor(total + 1e-9));
  }

  // Combinatorial upper bound on the internal (maximized) objective.
  std::int64_t Bound() const {
    std::int64_t best = CliqueBound();
    for (int r : knapsack_rows_) best = std::min(best, KnapsackBound(rows_[r]));
    return best;
  }

  std::int64_t CliqueBound() const {
    std::int64_t total = 0;
    for (const auto& group : groups_) {
      std::int64_t best = 0;
      for (int v : group) {
        if (lb_[v] == 1) {
          best = obj_[v];
          break;
        }
        if (ub_[v] == 1) best = std::max(best, obj_[v]);
      }
      total += best;
    }
    for (int j : loose_) total += obj_[j] > 0 ? obj_[j] * ub_[j] : obj_[j] * lb_[j];
    return total;
  }

  void Enqueue(int r) {
    if (!in_queue_[r]) {
      in_queue_[r] = true;
      queue_.push_back(r);
    }
  }

  void ChangeActivity(int var, std::int64_t new_lb, std::int64_t new_ub) {
    const std::int64_t dl = new_lb - lb_[var];
    const std::int64_t du = new_ub - ub_[var];
    for (const auto& [r, a] : columns_[var]) {
      Row& row = rows_[r];
      if (a > 0) {
        row.min_act += a * dl;
        row.max_act += a * du;
      } else {
        row.min_act += a * du;
        row.max_act += a * dl;
      }
    }
  }

  // Tightens the domain of `var` because of the decisions in `why`. On an
  // empty domain returns false and leaves the refutation in conflict_.
  bool Tighten(int var, std::int64_t new_lb, std::int64_t new_ub, const Depths& why) {
    new_lb = std::max(new_lb, lb_[var]);
    new_ub = std::min(new_ub, ub_[var]);
    if (new_lb > new_ub) {
      conflict_ = why;
      sets_.OrInto(lb_why_[var], conflict_);
      sets_.OrInto(ub_why_[var], conflict_);
      return false;
    }
    if (new_lb == lb_[var] && new_ub == ub_[var]) return true;
    trail_.push_back({var, lb_[var], ub_[var], lb_why_[var], ub_why_[var]});
    const int id = sets_.Store(why);
    if (new_lb != lb_[var]) lb_why_[var] = id;
    if (new_ub != ub_[var]) ub_why_[var] = id;
    ChangeActivity(var, new_lb, new_ub);
    lb_[var] = new_lb;
    ub_[var] = new_ub;
    for (const auto& entry : columns_[var]) Enqueue(entry.first);
    return true;
  }

  void Undo(std::size_t mark, std::size_t sets_mark) {
    while (trail_.size() > mark) {
      const TrailEntry e = trail_.back();
      trail_.pop_back();
      ChangeActivity(e.var, e.lb, e.ub);
      lb_[e.var] = e.lb;
      ub_[e.var] = e.ub;
      lb_why_[e.var] = e.lb_why;
      ub_why_[e.var] = e.ub_why;
    }
    sets_.Truncate(sets_mark);
  }

  // Decisions behind the bounds that hold a row side's activity where it is:
  // lower bounds of positive terms for the upper side, and so on.
  void RowReason(const Row& row, bool upper_side, Depths& out) const {
    std::fill(out.begin(), out.end(), 0);
    for (const Term& t : row.terms) {
      const bool use_lb = (t.coef > 0) == upper_side;
      sets_.OrInto(use_lb ? lb_why_[t.var] : ub_why_[t.var], out);
    }
  }

  Depths ObjectiveReason() const {
    Depths out(sets_.words(), 0);
    for (const Term& t : rows_[objective_row_].terms) {
      sets_.OrInto(lb_why_[t.var], out);
      sets_.OrInto(ub_why_[t.var], out);
    }
    return out;
  }

  static std::int64_t FloorDiv(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
  }

  bool Propagate() {
    bool ok = true;
    while (!queue_.empty()) {
      const int r = queue_.front();
      queue_.pop_front();
      in_queue_[r] = false;
      if (!ok) continue;
      Row& row = rows_[r];
      if (row.has_hi && row.min_act > row.hi) {
        conflict_.assign(sets_.words(), 0);
        RowReason(row, true, conflict_);
        ok = false;
        continue;
      }
      if (row.has_lo && row.max_act < row.lo) {
        conflict_.assign(sets_.words(), 0);
        RowReason(row, false, conflict_);
        ok = false;
        continue;
      }
      if (row.has_hi && row.hi - row.min_act < row.span) {
        bool have_reason = false;
        for (const Term& t : row.terms) {
          const std::int64_t slack = row.hi - row.min_act;
          const int j = t.var;
          const std::int64_t room = FloorDiv(slack, std::abs(t.coef));
          if (room >= ub_[j] - lb_[j]) continue;
          if (!have_reason) {
            RowReason(row, true, reason_);
            have_reason = true;
          }
          const bool tightened = t.coef > 0 ? Tighten(j, lb_[j], lb_[j] + room, reason_)
                                            : Tighten(j, ub_[j] - room, ub_[j], reason_);
          if (!tightened) {
            ok = false;
            break;
          }
        }
      }
      if (ok && row.has_lo && row.max_act - row.lo < row.span) {
        bool have_reason = false;
        for (const Term& t : row.terms) {
          const std::int64_t slack = row.max_act - row.lo;
          const int j = t.var;
          const std::int64_t room = FloorDiv(slack, std::abs(t.coef));
          if (room >= ub_[j] - lb_[j]) continue;
          if (!have_reason) {
            RowReason(row, false, reason_);
            have_reason = true;
          }
          const bool tightened = t.coef > 0 ? Tighten(j, ub_[j] - room, ub_[j], reason_)
                                            : Tighten(j, lb_[j], lb_[j] + room, reason_);
          if (!tightened) {
            ok = false;
            break;
          }
        }
      }
    }
    return ok;
  }

  std::int64_t InternalObjective(std::span<const std::int64_t> values) const {
    std::int64_t total = 0;
    for (int j = 0; j < static_cast<int>(values.size()); ++j) total += obj_[j] * values[j];
    return total;
  }

  void Accept(std::span<const std::int64_t> values) {
    const std::int64_t value = InternalObjective(values);
    if (incumbent_ && value <= incumbent_value_) return;
    incumbent_ = std::vector<std::int64_t>(values.begin(), values.end());
    incumbent_value_ = value;
    const GapTolerance& gap = opts_.gap_tolerance;
    const std::int64_t slack =
        gap.num > 0 ? gap.num * std::abs(value) / std::max<std::int64_t>(gap.den, 1) : 0;
    Row& cutoff = rows_[objective_row_];
    cutoff.has_lo = true;
    cutoff.lo = value + slack + 1;
    cutoff.span = std::numeric_limits<std::int64_t>::max();
  }

  int PickBranchVariable() const {
    for (int j : order_) {
      if (lb_[j] < ub_[j]) return j;
    }
    return -1;
  }

  // Explores the subtree whose branching decision sits at `depth`. Returns
  // the decisions its refutation depends on; bits >= depth are never set.
  Depths Dive(int depth) {
    const Depths everything(sets_.words(), ~std::uint64_t{0});
    if (stopped_) return everything;
    if ((++nodes_ & 255) == 0 && Elapsed() >= opts_.time_limit) {
      stopped_ = true;
      return everything;
    }
    if (incumbent_ && Bound() < rows_[objective_row_].lo) return ObjectiveReason();
    const int j = PickBranchVariable();
    if (j < 0) {
      // Every variable fixed and every row consistent; once accepted, the
      // cutoff row refutes this point.
      if (!model_.IsFeasible(lb_)) return everything;
      Accept(lb_);
      return ObjectiveReason();
    }
    // Children as (lb, ub) domains, preferred direction first.
    std::pair<std::int64_t, std::int64_t> children[2];
    const bool high_first = obj_[j] > 0 || (obj_[j] == 0 && IsBinary(j));
    if (high_first) {
      children[0] = {ub_[j], ub_[j]};
      children[1] = {lb_[j], ub_[j] - 1};
    } else {
      children[0] = {lb_[j], lb_[j]};
      children[1] = {lb_[j] + 1, ub_[j]};
    }
    Depths why(sets_.words(), 0);
    Set(why, depth);
    Depths refuted;
    for (int c = 0; c < 2; ++c) {
      const std::size_t mark = trail_.size();
      const std::size_t sets_mark = sets_.size();
      if (Tighten(j, children[c].first, children[c].second, why) && Propagate()) {
        refuted = Dive(depth + 1);
      } else {
        refuted = conflict_;
      }
      Undo(mark, sets_mark);
      if (stopped_) return everything;
      if (incumbent_) {
        // A new incumbent may allow the cutoff to prune the sibling early.
        Enqueue(objective_row_);
      }
      if (c == 1 || !Has(refuted, depth)) break;
      // The sibling's bound follows from whatever refuted this child.
      why = refuted;
      Clear(why, depth);
    }
    // Bits above `depth` can survive only from the "everything" sentinel.
    for (int d = depth; d < sets_.words() * 64; ++d) Clear(refuted, d);
    return refuted;
  }

  SolveResult Finish(SolveStatus status, std::int64_t root_bound) {
    SolveResult result;
    result.status = status;
    result.nodes = nodes_;
    if (incumbent_) {
      result.objective = sign_ * incumbent_value_;
      result.assignment = std::move(incumbent_);
    }
    result.best_bound =
        status == SolveStatus::kOptimal ? result.objective : sign_ * root_bound;
    result.runtime = Elapsed();
    return result;
  }

  const MilpModel& model_;
  const SolveOptions& opts_;
  Clock::time_point start_;
  int sign_ = 1;
  std::vector<std::int64_t> obj_;
  std::vector<std::int64_t> lb_, ub_;
  std::vector<Row> rows_;
  int objective_row_ = 0;
  std::vector<std::vector<std::pair<int, std::int64_t>>> columns_;
  std::vector<std::vector<int>> groups_;
  std::vector<int> loose_;
  std::vector<int> knapsack_rows_;
  mutable std::vector<std::int64_t> weight_;
  mutable std::vector<std::pair<std::int64_t, std::int64_t>> items_;
  std::vector<int> order_;
  std::deque<int> queue_;
  std::vector<bool> in_queue_;
  std::vector<TrailEntry> trail_;
  DepthSets sets_;
  std::vector<int> lb_why_, ub_why_;
  Depths reason_, conflict_;
  std::optional<std::vector<std::int64_t>> incumbent_;
  std::int64_t incumbent_value_ = 0;
  std::int64_t nodes_ = 0;
  bool stopped_ = false;
};

}  // namespace

SolveResult SolveInternal(const MilpModel& model, const SolveOptions& opts) {
  Search search(model, opts);
  return search.Run();
}

}  // namespace chemo
