#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "chemo/instance.h"

namespace chemo {
namespace {

// The distributions in <random> are implementation-defined; these helpers
// only rely on the (fully specified) engine output so that a seed produces
// the same instance on every platform.
int UniformInt(std::mt19937_64& rng, int lo, int hi) {
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % span;
  std::uint64_t draw;
  do {
    draw = rng();
  } while (draw >= limit);
  return lo + static_cast<int>(draw % span);
}

double UniformReal(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

void CheckParams(const GeneratorParams& p) {
  auto fail = [](const std::string& msg) { throw std::invalid_argument(msg); };
  if (p.total_patients < 0) fail("total_patients must be >= 0");
  if (!(p.critical_fraction >= 0.0 && p.critical_fraction <= 1.0)) {
    fail("critical_fraction must lie in [0, 1]");
  }
  if (p.days < 0 || p.rooms < 0 || p.beds < 0 || p.chairs < 0) {
    fail("days, rooms, beds and chairs must be >= 0");
  }
  if (p.slots_per_day < 1 || p.visit_slots < 1 || p.visit_slots > p.slots_per_day) {
    fail("need 1 <= visit_slots <= slots_per_day");
  }
  if (p.pathology_shares.empty()) fail("at least one pathology is required");
  double total = 0.0;
  for (const auto& [name, w] : p.pathology_shares) {
    if (!(w >= 0.0) || !std::isfinite(w)) fail("pathology share for " + name + " must be >= 0");
    total += w;
  }
  if (!(total > 0.0)) fail("pathology shares must not all be zero");
  for (const auto& [name, w] : p.pathology_shares) {
    const auto v = p.visit_duration_by_group.find(name);
    const int visit = v == p.visit_duration_by_group.end() ? 1 : v->second;
    if (visit < 1 || visit > p.visit_slots) fail("visit duration of " + name + " out of range");
    const auto f = p.infusion_slot_range_by_group.find(name);
    const InfusionRange range = f == p.infusion_slot_range_by_group.end() ? InfusionRange{}
                                                                          : f->second;
    if (range.min_slots < 1 || range.max_slots < range.min_slots) {
      fail("infusion range of " + name + " is empty");
    }
    if (visit + range.max_slots > p.slots_per_day) {
      fail("visit + max infusion of " + name + " exceeds slots_per_day");
    }
  }
  if (!p.mcp.empty()) {
    if (static_cast<int>(p.mcp.size()) != p.rooms) fail("mcp must have one entry per room");
    for (const auto& by_k : p.mcp) {
      if (by_k.size() != p.pathology_shares.size()) fail("mcp must cover every pathology");
      for (const auto& by_t : by_k) {
        if (static_cast<int>(by_t.size()) != p.days) fail("mcp must cover every day");
      }
    }
  }
  if (p.dedicated_rooms < 0) fail("dedicated_rooms must be >= 0");
}

}  // namespace

GeneratorParams DefaultGeneratorParams() {
  GeneratorParams params;
  // Average weekly percentages per macro group; they are renormalized.
  params.pathology_shares = {{"HE", 32.31}, {"GI", 11.90}, {"UR", 6.95}, {"GY", 4.09},
                             {"BR", 30.81}, {"OT", 14.58}, {"LU", 15.69}};
  for (const auto& [name, w] : params.pathology_shares) {
    params.visit_duration_by_group[name] = name == "HE" ? 2 : 1;
    params.infusion_slot_range_by_group[name] = InfusionRange{6, 24};
  }
  return params;
}

std::vector<std::vector<std::vector<int>>> DefaultMcp(const GeneratorParams& params) {
  const int num_k = static_cast<int>(params.pathology_shares.size());
  std::vector<std::vector<std::vector<int>>> mcp(
      params.rooms, std::vector<std::vector<int>>(num_k, std::vector<int>(params.days, 0)));
  if (num_k == 0 || params.rooms == 0 || params.days == 0) return mcp;

  const int dedicated = num_k == 1 ? params.rooms : std::min(params.dedicated_rooms, params.rooms);
  for (int r = 0; r < dedicated; ++r) {
    for (int t = 0; t < params.days; ++t) mcp[r][0][t] = 1;
  }
  const int rotating = params.rooms - dedicated;
  const int cells = rotating * params.days;
  if (cells == 0) return mcp;

  // Largest-remainder apportionment of the rotating room-days, at least one
  // per group while cells last.
  const int groups = num_k - 1;
  double weight_sum = 0.0;
  for (int g = 1; g < num_k; ++g) weight_sum += params.pathology_shares[g].second;
  std::vector<int> quota(groups, 0);
  std::vector<double> remainder(groups, 0.0);
  int assigned = 0;
  for (int g = 0; g < groups; ++g) {
    const double exact = weight_sum > 0.0
                             ? cells * params.pathology_shares[g + 1].second / weight_sum
                             : static_cast<double>(cells) / groups;
    quota[g] = static_cast<int>(std::floor(exact));
    remainder[g] = exact - quota[g];
    assigned += quota[g];
  }
  for (int g = 0; g < groups && assigned < cells; ++g) {
    if (quota[g] == 0) {
      quota[g] = 1;
      remainder[g] = -1.0;
      ++assigned;
    }
  }
  while (assigned > cells) {
    // Only possible when the minimum-one rule overshoots; trim the largest.
    auto it = std::max_element(quota.begin(), quota.end());
    --*it;
    --assigned;
  }
  std::vector<int> order(groups);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return remainder[a] > remainder[b]; });
  for (int i = 0; assigned < cells; i = (i + 1) % groups) {
    ++quota[order[i]];
    ++assigned;
  }

  // Deal the room-days round-robin by group index, day-major over the
  // rotating rooms.
  int next_group = 0;
  for (int t = 0; t < params.days; ++t) {
    for (int r = dedicated; r < params.rooms; ++r) {
      while (quota[next_group] == 0) next_group = (next_group + 1) % groups;
      mcp[r][next_group + 1][t] = 1;
      --quota[next_group];
      next_group = (next_group + 1) % groups;
    }
  }
  return mcp;
}

Instance Generate(const GeneratorParams& params) {
  CheckParams(params);
  std::mt19937_64 rng(params.seed);

  Instance inst;
  inst.days = params.days;
  inst.slots_per_day = params.slots_per_day;
  inst.visit_slots = params.visit_slots;
  inst.rooms = params.rooms;
  inst.beds = params.beds;
  inst.chairs = params.chairs;
  for (const auto& [name, w] : params.pathology_shares) inst.pathologies.push_back(name);
  inst.mcp = params.mcp.empty() ? DefaultMcp(params) : params.mcp;

  std::vector<double> cumulative;
  double total = 0.0;
  for (const auto& [name, w] : params.pathology_shares) {
    total += w;
    cumulative.push_back(total);
  }

  const int n = params.total_patients;
  inst.patients.resize(n);
  for (int i = 0; i < n; ++i) {
    Patient& p = inst.patients[i];
    p.id = "p" + std::to_string(i + 1);
    const double u = UniformReal(rng) * total;
    p.pathology = static_cast<int>(
        std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
    p.pathology = std::min(p.pathology, static_cast<int>(cumulative.size()) - 1);
    const std::string& name = params.pathology_shares[p.pathology].first;
    const auto v = params.visit_duration_by_group.find(name);
    p.visit = v == params.visit_duration_by_group.end() ? 1 : v->second;
    const auto f = params.infusion_slot_range_by_group.find(name);
    const InfusionRange range =
        f == params.infusion_slot_range_by_group.end() ? InfusionRange{} : f->second;
    p.infusion = UniformInt(rng, range.min_slots, range.max_slots);
  }

  // Exactly round(n * fraction) critical patients, chosen by a seeded shuffle.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (int i = n - 1; i > 0; --i) std::swap(order[i], order[UniformInt(rng, 0, i)]);
  const int num_critical = static_cast<int>(std::lround(n * params.critical_fraction));
  for (int i = 0; i < num_critical; ++i) inst.patients[order[i]].critical = true;
  return inst;
}

}  // namespace chemo
