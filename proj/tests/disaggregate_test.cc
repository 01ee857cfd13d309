#include <gtest/gtest.h>

#include <random>

#include "chemo/disaggregate.h"
#include "chemo/report.h"
#include "fixtures.h"

namespace chemo {
namespace {

TEST(Disaggregate, MicroOptimumRoundTrips) {
  const Instance inst = testing::Micro1();
  const CompleteSchedule complete = Disaggregate(Aggregate(testing::Micro1Optimum()), inst);
  EXPECT_EQ(complete, testing::Micro1Optimum());
}

TEST(Disaggregate, SampledAggregatesStayValidAndKeepTheirMetrics) {
  std::mt19937_64 rng(99);
  int checked = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const Instance inst = testing::TinyInstance(seed);
    for (int i = 0; i < 5; ++i) {
      const AggregateSchedule agg = testing::SampleFeasibleAggregate(inst, rng);
      ASSERT_TRUE(ValidateAggregate(agg, inst).empty());
      const CompleteSchedule complete = Disaggregate(agg, inst);
      ASSERT_TRUE(ValidateSchedule(complete, inst).empty()) << seed;
      EXPECT_EQ(Aggregate(complete), agg);
      const MetricsRecord m = Evaluate(complete, inst);
      EXPECT_EQ(m.phi1, agg.Treated());
      EXPECT_EQ(m.phi2, testing::ReferenceDailyWaits(agg, inst));
      EXPECT_EQ(m.phi3, testing::ReferenceChairs(agg));
      ++checked;
    }
  }
  EXPECT_EQ(checked, 500);
}

TEST(Disaggregate, GreedyScheduleIsFeasible) {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const Instance inst = testing::TinyInstance(seed);
    const AggregateSchedule g = GreedySchedule(inst);
    ASSERT_TRUE(ValidateAggregate(g, inst).empty()) << seed;
    EXPECT_TRUE(ValidateSchedule(Disaggregate(g, inst), inst).empty()) << seed;
  }
  // Micro: p1 (shorter) goes first and takes the chair right after its visit.
  const AggregateSchedule micro = GreedySchedule(testing::Micro1());
  EXPECT_EQ(micro.entries[0], (AggregateEntry{0, 1, 2, InfusionClass::kChair}));
  EXPECT_EQ(micro.entries[1], (AggregateEntry{0, 2, 3, InfusionClass::kBed}));
}

TEST(Disaggregate, LowestFreeResourceIsTaken) {
  Instance inst = testing::Micro1();
  inst.rooms = 2;
  inst.chairs = 2;
  inst.mcp = {{{1}}, {{1}}};
  inst.patients = {{"a", 0, 2, 2, false}, {"b", 0, 1, 2, false}, {"c", 0, 1, 1, false}};
  AggregateSchedule agg = AggregateSchedule::Empty(inst);
  agg.entries[0] = AggregateEntry{0, 1, 3, InfusionClass::kChair};  // room 1 slots 1-2
  agg.entries[1] = AggregateEntry{0, 2, 3, InfusionClass::kChair};  // room 2 slot 2
  agg.entries[2] = AggregateEntry{0, 3, 5, InfusionClass::kChair};  // room 1 again
  const auto rooms = AssignRooms(agg, inst);
  EXPECT_EQ(rooms[0], 0);
  EXPECT_EQ(rooms[1], 1);
  EXPECT_EQ(rooms[2], 0);
  const auto chairs = AssignChairs(agg, inst);
  EXPECT_EQ(chairs[0], 0);
  EXPECT_EQ(chairs[1], 1);
  EXPECT_EQ(chairs[2], 0);  // chair 1 is released at the end of slot 4
}

TEST(Disaggregate, OverbookedSlotIsReported) {
  Instance inst = testing::Micro1();
  inst.beds = 2;
  AggregateSchedule agg = AggregateSchedule::Empty(inst);
  agg.entries[0] = AggregateEntry{0, 1, 2, InfusionClass::kBed};
  agg.entries[1] = AggregateEntry{0, 1, 3, InfusionClass::kBed};  // same room slot 1
  try {
    Disaggregate(agg, inst);
    FAIL();
  } catch (const DisaggregationError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("slot 1"), std::string::npos) << what;
    EXPECT_NE(what.find("day 1"), std::string::npos) << what;
  }
}

TEST(Disaggregate, WindowViolationIsReported) {
  const Instance inst = testing::Micro1();
  AggregateSchedule agg = AggregateSchedule::Empty(inst);
  agg.entries[0] = AggregateEntry{0, 4, 6, InfusionClass::kChair};  // infusion runs past slot 6
  EXPECT_THROW(Disaggregate(agg, inst), DisaggregationError);
}

}  // namespace
}  // namespace chemo
