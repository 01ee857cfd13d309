#include <gtest/gtest.h>

#include <numeric>

#include "chemo/lexico.h"
#include "chemo/oracle.h"
#include "chemo/report.h"
#include "fixtures.h"

namespace chemo {
namespace {

int Sum(const std::vector<int>& v) { return std::accumulate(v.begin(), v.end(), 0); }

Instance ForcedWait() {
  Instance inst;
  inst.days = 1;
  inst.slots_per_day = 6;
  inst.visit_slots = 1;
  inst.pathologies = {"HE"};
  inst.rooms = 2;
  inst.chairs = 1;
  inst.beds = 0;
  inst.mcp = {{{1}}, {{1}}};
  inst.patients = {{"a", 0, 1, 2, false}, {"b", 0, 1, 2, false}};
  return inst;
}

TEST(Lexico, Micro) {
  const LexicoOutcome out = RunProcedure2(testing::Micro1(), {});
  EXPECT_EQ(out.v1, 2);
  EXPECT_EQ(out.v2, std::vector<int>{0});
  EXPECT_EQ(out.phi3, 1);
  EXPECT_TRUE(ValidateSchedule(out.schedule, testing::Micro1()).empty());
}

TEST(Lexico, ForcedWaitMatchesOptimum) {
  const Instance inst = ForcedWait();
  const LexicoOutcome out = RunProcedure2(inst, {});
  const LexicoOptimum best = BruteForceLexico(inst);
  EXPECT_EQ(out.v1, best.v1);
  EXPECT_EQ(out.v2, best.v2);
  EXPECT_EQ(out.phi3, best.phi3);
}

TEST(Lexico, StageLogsInOrder) {
  Instance inst = testing::TinyInstance(5);
  const LexicoOutcome out = RunProcedure2(inst, {});
  ASSERT_FALSE(out.logs.empty());
  EXPECT_EQ(out.logs.front().stage, "AF1");
  int p2 = 0, p3 = 0;
  for (const StageLog& log : out.logs) {
    p2 += log.stage == "P2-day";
    p3 += log.stage == "P3-day";
  }
  EXPECT_EQ(p2, inst.days);
  EXPECT_EQ(p3, inst.days);
  EXPECT_EQ(StageLogToJson(out.logs.front()).rfind("{\"stage\":\"AF1\",\"status\":", 0), 0u);
}

TEST(Lexico, AgreesWithOracleOnTinyInstances) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const Instance inst = testing::TinyInstance(seed);
    const LexicoOptimum best = BruteForceLexico(inst);
    const LexicoOutcome out = RunProcedure2(inst, {});
    EXPECT_EQ(out.v1, best.v1) << seed;
    EXPECT_EQ(Sum(out.v2), Sum(best.v2)) << seed;
    EXPECT_LE(out.phi3, best.phi3) << seed;
    const MetricsRecord m = Evaluate(out.schedule, inst);
    EXPECT_EQ(m.phi1, out.v1);
    for (int t = 0; t < inst.days; ++t) EXPECT_LE(m.phi2[t], out.v2[t]);
  }
}

TEST(Lexico, KOptClimbsStrictly) {
  Instance inst = testing::Micro1();
  inst.beds = 2;
  AggregateSchedule start = AggregateSchedule::Empty(inst);
  start.entries[0] = AggregateEntry{0, 1, 2, InfusionClass::kBed};
  start.entries[1] = AggregateEntry{0, 2, 3, InfusionClass::kBed};
  const std::vector<int> v2{0};
  const KOptResult k = KOptSearch(inst, start, 2, v2, {}, {});
  EXPECT_EQ(k.trace, (std::vector<int>{0, 1}));
  EXPECT_EQ(k.schedule.ChairCount(), 1);
  ASSERT_EQ(k.logs.size(), 2u);
  EXPECT_TRUE(*k.logs[0].accepted);
  EXPECT_FALSE(*k.logs[1].accepted);
}

TEST(Lexico, KOptTracesAreMonotone) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const Instance inst = testing::TinyInstance(seed);
    LexicoOptions opts;
    opts.kopt = {1, 1, 1, 1};
    const LexicoOutcome out = RunProcedure2(inst, opts);
    ASSERT_FALSE(out.kopt_trace.empty());
    EXPECT_EQ(out.kopt_trace.front(), out.phi3_before_kopt);
    for (std::size_t i = 1; i < out.kopt_trace.size(); ++i) {
      EXPECT_GT(out.kopt_trace[i], out.kopt_trace[i - 1]) << seed;
    }
    EXPECT_EQ(out.kopt_trace.back(), out.phi3);
  }
}

TEST(Lexico, ThreadsDoNotChangeTheResult) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Instance inst = testing::TinyInstance(seed);
    LexicoOptions two;
    two.threads = 2;
    const LexicoOutcome a = RunProcedure2(inst, {});
    const LexicoOutcome b = RunProcedure2(inst, two);
    EXPECT_EQ(a.schedule, b.schedule) << seed;
  }
}

TEST(Lexico, BackendFailureIsSurfaced) {
  LexicoOptions opts;
  opts.solve.backend = Backend::kExternal;
  opts.solve.external_command = "/nonexistent/solver-binary";
  try {
    RunProcedure2(testing::Micro1(), opts);
    FAIL();
  } catch (const LexicoError& e) {
    EXPECT_TRUE(e.backend_failure());
    ASSERT_EQ(e.logs().size(), 1u);
    EXPECT_EQ(e.logs()[0].status, SolveStatus::kBackendError);
  }
}

}  // namespace
}  // namespace chemo
