#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>

#include "chemo/formulations.h"
#include "chemo/solver.h"
#include "fixtures.h"

namespace chemo {
namespace {

namespace fs = std::filesystem;
using testing::Micro1;

SolveOptions Internal(double limit = 60) {
  SolveOptions o;
  o.time_limit = limit;
  return o;
}

TEST(Solver, MicroAggregateStagesReachKnownOptima) {
  const Instance inst = Micro1();
  const SolveResult r1 = Solve(BuildAF1(inst).model, Internal());
  EXPECT_EQ(r1.status, SolveStatus::kOptimal);
  EXPECT_EQ(r1.objective, 2);
  EXPECT_EQ(r1.best_bound, 2);

  const SolveResult r2 = Solve(BuildAF2(inst, 2).model, Internal());
  EXPECT_EQ(r2.status, SolveStatus::kOptimal);
  EXPECT_EQ(r2.objective, 0);

  const std::vector<int> v2{0};
  const SolveResult r3 = Solve(BuildAF3(inst, 2, v2).model, Internal());
  EXPECT_EQ(r3.status, SolveStatus::kOptimal);
  EXPECT_EQ(r3.objective, 1);
}

TEST(Solver, ContradictoryRowsAreInfeasible) {
  MilpModel m;
  const int x = m.AddBinary("x");
  m.AddConstraint("lo", {{x, 1}}, Relation::kGreaterEqual, 1);
  m.AddConstraint("hi", {{x, 1}}, Relation::kLessEqual, 0);
  m.SetObjective(Sense::kMaximize, {{x, 1}});
  const SolveResult r = Solve(m, Internal());
  EXPECT_EQ(r.status, SolveStatus::kInfeasible);
  EXPECT_FALSE(r.assignment.has_value());
}

TEST(Solver, WarmStartIsKeptWhenTimeRunsOut) {
  const Instance inst = Micro1();
  BuiltModel built = BuildAF1(inst);
  const SolveResult full = Solve(built.model, Internal());
  ASSERT_TRUE(full.assignment);
  built.model.SetWarmStart(*full.assignment);
  const SolveResult r = Solve(built.model, Internal(1e-12));
  EXPECT_EQ(r.status, SolveStatus::kFeasibleTimeLimit);
  EXPECT_EQ(r.objective, 2);
  EXPECT_GE(r.best_bound, r.objective);
}

TEST(Solver, FullyPropagatedModelNeedsNoBranching) {
  MilpModel m;
  const int a = m.AddBinary("a");
  const int b = m.AddBinary("b");
  const int c = m.AddInteger("c", 0, 5);
  m.AddConstraint("fix_a", {{a, 1}}, Relation::kEqual, 1);
  m.AddConstraint("ab", {{a, 1}, {b, 1}}, Relation::kLessEqual, 1);
  m.AddConstraint("c", {{c, 1}, {a, -3}}, Relation::kEqual, 0);
  m.SetObjective(Sense::kMaximize, {{b, 2}, {c, 1}});
  const SolveResult r = SolveInternal(m, Internal());
  EXPECT_EQ(r.status, SolveStatus::kOptimal);
  EXPECT_EQ(r.objective, 3);
  EXPECT_LE(r.nodes, 1);
}

TEST(Solver, EmptyModel) {
  MilpModel m;
  const SolveResult r = Solve(m, Internal());
  EXPECT_EQ(r.status, SolveStatus::kOptimal);
  EXPECT_EQ(r.objective, 0);
}

// Random small integer programs checked against exhaustive enumeration.
MilpModel RandomModel(std::mt19937_64& rng) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  MilpModel m;
  const int n = pick(1, 10);
  for (int j = 0; j < n; ++j) {
    if (pick(0, 4) == 0) {
      m.AddInteger("i" + std::to_string(j), pick(-1, 0), pick(1, 3));
    } else {
      m.AddBinary("b" + std::to_string(j));
    }
  }
  const int rows = pick(0, 6);
  for (int r = 0; r < rows; ++r) {
    std::vector<Term> terms;
    for (int j = 0; j < n; ++j) {
      if (pick(0, 2) == 0) terms.push_back({j, pick(-3, 3)});
    }
    m.AddConstraint("r" + std::to_string(r), std::move(terms),
                    static_cast<Relation>(pick(0, 2)), pick(-2, 4));
  }
  std::vector<Term> obj;
  for (int j = 0; j < n; ++j) obj.push_back({j, pick(-4, 4)});
  m.SetObjective(pick(0, 1) ? Sense::kMaximize : Sense::kMinimize, std::move(obj));
  return m;
}

TEST(Solver, MatchesEnumerationOnRandomModels) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 400; ++trial) {
    const MilpModel m = RandomModel(rng);
    const SolveResult exact = SolveByEnumeration(m, Internal());
    const SolveResult bb = Solve(m, Internal());
    ASSERT_EQ(bb.status, exact.status) << "trial " << trial;
    if (exact.status == SolveStatus::kOptimal) {
      EXPECT_EQ(bb.objective, exact.objective) << "trial " << trial;
      EXPECT_EQ(bb.best_bound, bb.objective);
      ASSERT_TRUE(bb.assignment);
      EXPECT_TRUE(m.IsFeasible(*bb.assignment));
    }
  }
}

TEST(Solver, MatchesEnumerationOnTinyAggregateModels) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    testing::TinyShape shape;
    shape.max_patients = 3;
    shape.max_slots = 7;
    shape.max_days = 1;
    const Instance inst = testing::TinyInstance(seed, shape);
    const MilpModel m = BuildAF1(inst).model;
    SolveResult exact;
    try {
      exact = SolveByEnumeration(m, Internal());
    } catch (const std::length_error&) {
      continue;
    }
    EXPECT_EQ(Solve(m, Internal()).objective, exact.objective) << "seed " << seed;
  }
}

TEST(Solver, EnumerationRefusesLargeModels) {
  MilpModel m;
  for (int j = 0; j < 40; ++j) m.AddBinary("b" + std::to_string(j));
  EXPECT_THROW(SolveByEnumeration(m, Internal()), std::length_error);
}

TEST(Solver, ReplayIsDeterministic) {
  const Instance inst = testing::TinyInstance(11);
  const MilpModel m = BuildAF1(inst).model;
  SolveOptions opts = Internal();
  opts.seed = 5;
  const SolveResult a = Solve(m, opts);
  const SolveResult b = Solve(m, opts);
  EXPECT_EQ(a.status, b.status);
  EXPECT_EQ(a.objective, b.objective);
  EXPECT_EQ(a.best_bound, b.best_bound);
  EXPECT_EQ(a.nodes, b.nodes);
  EXPECT_EQ(a.assignment, b.assignment);
}

TEST(Solver, GapToleranceStopsEarlyWithinTolerance) {
  const Instance inst = testing::TinyInstance(6);
  const MilpModel m = BuildAF1(inst).model;
  const SolveResult exact = Solve(m, Internal());
  SolveOptions loose = Internal();
  loose.gap_tolerance = {1, 2};
  const SolveResult r = Solve(m, loose);
  ASSERT_TRUE(r.assignment);
  EXPECT_LE(r.objective, exact.objective);
  EXPECT_GE(2 * r.objective + 1, exact.objective);
}

// Fake external solvers written as shell scripts.
class ExternalBackend : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("chemo-ext-test-" + std::to_string(::getpid()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Script(const std::string& name, const std::string& body) {
    const fs::path path = dir_ / name;
    std::ofstream(path) << "#!/bin/sh\n" << body;
    fs::permissions(path, fs::perms::owner_all);
    return path.string();
  }

  SolveOptions Options(const std::string& command) {
    SolveOptions o;
    o.backend = Backend::kExternal;
    o.external_command = command;
    o.time_limit = 30;
    return o;
  }

  fs::path dir_;
};

TEST_F(ExternalBackend, ExitTwoMeansInfeasible) {
  const SolveResult r = Solve(BuildAF1(Micro1()).model, Options(Script("inf.sh", "exit 2\n")));
  EXPECT_EQ(r.status, SolveStatus::kInfeasible);
}

TEST_F(ExternalBackend, FailureCarriesStderr) {
  const SolveResult r = Solve(BuildAF1(Micro1()).model,
                              Options(Script("fail.sh", "echo license missing >&2\nexit 3\n")));
  EXPECT_EQ(r.status, SolveStatus::kBackendError);
  EXPECT_NE(r.backend_error.find("license missing"), std::string::npos);
}

TEST_F(ExternalBackend, ViolatingSolutionIsRejected) {
  // Puts every variable to 1, which breaks the one-visit rows.
  const std::string body =
      "awk '/^    [^M]/ && $1 != \"MARKER\" {print $1, 1}' \"$1\" | sort -u > \"$2\"\nexit 0\n";
  const SolveResult r = Solve(BuildAF1(Micro1()).model, Options(Script("bad.sh", body)));
  EXPECT_EQ(r.status, SolveStatus::kBackendError);
}

TEST_F(ExternalBackend, MissingSolutionFileIsAnError) {
  const SolveResult r = Solve(BuildAF1(Micro1()).model, Options(Script("none.sh", "exit 0\n")));
  EXPECT_EQ(r.status, SolveStatus::kBackendError);
}

TEST_F(ExternalBackend, SeededIncumbentSurvivesAnEmptyAnswer) {
  BuiltModel built = BuildAF1(Micro1());
  built.model.SetWarmStart(*Solve(built.model, Internal()).assignment);
  const SolveResult r = Solve(
      built.model,
      Options(Script("nosol.sh", "printf '# status no_solution\\n# bound 2\\n' > \"$2\"\n")));
  EXPECT_EQ(r.status, SolveStatus::kFeasibleTimeLimit);
  EXPECT_EQ(r.objective, 2);
  EXPECT_EQ(r.best_bound, 2);
}

TEST_F(ExternalBackend, InfiniteBoundFallsBackToDomains) {
  const MilpModel model = BuildAF1(Micro1()).model;
  const SolveResult r = Solve(
      model, Options(Script("inf_bound.sh",
                            "printf '# status no_solution\\n# bound inf\\n' > \"$2\"\n")));
  EXPECT_EQ(r.status, SolveStatus::kNoSolutionTimeLimit);
  EXPECT_EQ(r.best_bound, static_cast<std::int64_t>(model.objective().size()));
}

TEST_F(ExternalBackend, HighsWrapperSolvesMicro) {
  if (std::system("python3 -c 'import highspy' >/dev/null 2>&1") != 0) {
    GTEST_SKIP() << "highspy not installed";
  }
  const std::string cmd = std::string("python3 ") + CHEMO_SOURCE_DIR "/tools/highs_backend.py";
  const Instance inst = Micro1();
  const SolveResult r1 = Solve(BuildAF1(inst).model, Options(cmd));
  EXPECT_EQ(r1.status, SolveStatus::kOptimal);
  EXPECT_EQ(r1.objective, 2);
  const SolveResult r2 = Solve(BuildAF2(inst, 2).model, Options(cmd));
  EXPECT_EQ(r2.objective, 0);
  const std::vector<int> v2{0};
  const SolveResult r3 = Solve(BuildAF3(inst, 2, v2).model, Options(cmd));
  EXPECT_EQ(r3.objective, 1);
}

}  // namespace
}  // namespace chemo
