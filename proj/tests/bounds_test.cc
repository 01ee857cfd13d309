#include <gtest/gtest.h>

#include <functional>
#include <numeric>

#include "chemo/bounds.h"
#include "chemo/oracle.h"
#include "fixtures.h"

namespace chemo {
namespace {

// Exhaustive multiple knapsack: every non-critical patient goes to one chair
// or to none; a chair holds at most `capacity` infusion slots.
int ReferenceMultipleKnapsack(const Instance& inst) {
  int min_v = 0;
  std::vector<int> sizes;
  for (const Patient& p : inst.patients) {
    if (p.critical) continue;
    sizes.push_back(p.infusion);
    min_v = min_v == 0 ? p.visit : std::min(min_v, p.visit);
  }
  const int capacity = inst.days * (inst.slots_per_day - min_v);
  std::vector<int> load(inst.chairs, 0);
  int best = 0;
  std::function<void(std::size_t, int)> go = [&](std::size_t i, int packed) {
    if (i == sizes.size()) {
      best = std::max(best, packed);
      return;
    }
    go(i + 1, packed);
    for (int s = 0; s < inst.chairs; ++s) {
      if (load[s] + sizes[i] > capacity) continue;
      load[s] += sizes[i];
      go(i + 1, packed + 1);
      load[s] -= sizes[i];
    }
  };
  go(0, 0);
  return best;
}

TEST(Bounds, Micro) {
  const Instance inst = testing::Micro1();
  EXPECT_EQ(TrivialBound(inst).value, 1);
  EXPECT_EQ(Ub1(inst, {}).value, 1);
  const std::vector<int> v2{0};
  const BoundResult ub2 = Ub2(inst, 2, v2, {});
  EXPECT_EQ(ub2.value, 1);
  EXPECT_EQ(ub2.status, BoundStatus::kExact);
}

TEST(Bounds, AllCriticalGivesZero) {
  Instance inst = testing::Micro1();
  inst.patients[0].critical = true;
  EXPECT_EQ(TrivialBound(inst).value, 0);
  EXPECT_EQ(Ub1(inst, {}).value, 0);
}

TEST(Bounds, Ub1MatchesExhaustivePacking) {
  testing::TinyShape shape;
  shape.max_chairs = 3;
  shape.max_infusion = 8;
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const Instance inst = testing::TinyInstance(seed, shape);
    EXPECT_EQ(Ub1(inst, {}).value, ReferenceMultipleKnapsack(inst)) << seed;
  }
}

TEST(Bounds, OrderingAgainstTheOptimum) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const Instance inst = testing::TinyInstance(seed);
    const LexicoOptimum best = BruteForceLexico(inst);
    const int ub2 = Ub2(inst, best.v1, best.v2, {}).value;
    const int ub1 = Ub1(inst, {}).value;
    EXPECT_LE(best.phi3, ub2) << seed;
    EXPECT_LE(ub2, ub1) << seed;
    EXPECT_LE(ub1, TrivialBound(inst).value) << seed;
  }
}

TEST(Bounds, EmptySlotProfileNeverExceedsThePool) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const Instance inst = testing::TinyInstance(seed);
    const std::vector<int> v2(inst.days, 1);
    for (ResourceSide side : {ResourceSide::kChairs, ResourceSide::kBeds}) {
      const EmptySlotProfile prof = ComputeEmptySlotProfile(inst, v2, side);
      const int pool = side == ResourceSide::kChairs ? inst.chairs : inst.beds;
      for (int t = 0; t < inst.days; ++t) {
        int sum = 0;
        for (const auto& row : prof.n) sum += row[t];
        EXPECT_LE(sum, pool);
      }
    }
  }
  EXPECT_THROW(ComputeEmptySlotProfile(testing::Micro1(), std::vector<int>{}, ResourceSide::kChairs),
               std::invalid_argument);
}

TEST(Bounds, InconsistentTargetsAreRejected) {
  const std::vector<int> v2{0};
  EXPECT_THROW(Ub2(testing::Micro1(), 3, v2, {}), std::runtime_error);
}

TEST(Bounds, JsonReport) {
  BoundResult r;
  r.method = BoundMethod::kUB2;
  r.value = 7;
  EXPECT_EQ(BoundToJson(r),
            "{\"method\":\"UB2\",\"value\":7,\"status\":\"exact\",\"runtime\":0.0}");
}

}  // namespace
}  // namespace chemo
