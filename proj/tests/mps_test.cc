#include <gtest/gtest.h>

#include <sstream>

#include "chemo/formulations.h"
#include "chemo/mps.h"
#include "chemo/oracle.h"
#include "fixtures.h"

namespace chemo {
namespace {

using testing::Micro1;

MilpModel RoundTrip(const MilpModel& m) {
  std::stringstream buf;
  WriteMps(m, buf);
  return ReadMps(buf);
}

void ExpectSameModel(const MilpModel& a, const MilpModel& b) {
  ASSERT_EQ(a.num_variables(), b.num_variables());
  for (int j = 0; j < a.num_variables(); ++j) {
    EXPECT_EQ(a.variable(j).name, b.variable(j).name);
    EXPECT_EQ(a.variable(j).kind, b.variable(j).kind);
    EXPECT_EQ(a.variable(j).lower, b.variable(j).lower);
    EXPECT_EQ(a.variable(j).upper, b.variable(j).upper);
  }
  ASSERT_EQ(a.num_constraints(), b.num_constraints());
  for (int r = 0; r < a.num_constraints(); ++r) {
    const Constraint& x = a.constraint(r);
    const Constraint& y = b.constraint(r);
    EXPECT_EQ(x.name, y.name);
    EXPECT_EQ(x.relation, y.relation);
    EXPECT_EQ(x.rhs, y.rhs);
    ASSERT_EQ(x.terms.size(), y.terms.size()) << x.name;
    for (std::size_t i = 0; i < x.terms.size(); ++i) {
      EXPECT_EQ(x.terms[i].var, y.terms[i].var);
      EXPECT_EQ(x.terms[i].coef, y.terms[i].coef);
    }
  }
  EXPECT_EQ(a.sense(), b.sense());
  ASSERT_EQ(a.objective().size(), b.objective().size());
  for (std::size_t i = 0; i < a.objective().size(); ++i) {
    EXPECT_EQ(a.objective()[i].var, b.objective()[i].var);
    EXPECT_EQ(a.objective()[i].coef, b.objective()[i].coef);
  }
}

TEST(Mps, AggregateModelsRoundTrip) {
  const Instance inst = testing::TinyInstance(3);
  const std::vector<int> v2(inst.days, 2);
  ExpectSameModel(BuildAF1(inst).model, RoundTrip(BuildAF1(inst).model));
  ExpectSameModel(BuildAF2(inst, 1).model, RoundTrip(BuildAF2(inst, 1).model));
  ExpectSameModel(BuildAF3(inst, 1, v2).model, RoundTrip(BuildAF3(inst, 1, v2).model));
  ExpectSameModel(BuildF1Complete(inst).model, RoundTrip(BuildF1Complete(inst).model));
}

TEST(Mps, LargeCoefficientsStayExact) {
  MilpModel m;
  const int a = m.AddInteger("a_long_variable_name_beyond_eight", -7, 123456789);
  const int b = m.AddBinary("b");
  m.AddConstraint("a_row_with_a_long_name", {{a, 987654321}, {b, -3}}, Relation::kGreaterEqual,
                  -1234567890123LL);
  m.SetObjective(Sense::kMinimize, {{a, 1}, {b, -5}});
  ExpectSameModel(m, RoundTrip(m));
}

TEST(Mps, EmptyModelHasOnlyTheObjectiveRow) {
  MilpModel m;
  std::stringstream buf;
  WriteMps(m, buf);
  const std::string text = buf.str();
  const auto rows = text.find("ROWS\n");
  const auto columns = text.find("COLUMNS\n");
  ASSERT_NE(rows, std::string::npos);
  ASSERT_NE(columns, std::string::npos);
  EXPECT_EQ(text.substr(rows + 5, columns - rows - 5), " N  OBJ\n");
  EXPECT_EQ(RoundTrip(m).num_variables(), 0);
}

TEST(Mps, OracleOptimumReplaysThroughFiles) {
  const Instance inst = Micro1();
  const LexicoOptimum best = BruteForceLexico(inst);
  const BuiltModel built = BuildAF1(inst);
  const auto values = AggregateToAssignment(inst, built, Aggregate(best.schedule));
  std::stringstream model_text, sol_text;
  WriteMps(built.model, model_text);
  WriteSolution(built.model, values, sol_text);
  const MilpModel parsed = ReadMps(model_text);
  const SolutionFile sol = ReadSolutionFile(sol_text, parsed);
  EXPECT_TRUE(parsed.IsFeasible(sol.values));
  EXPECT_EQ(parsed.Objective(sol.values), 2);
}

TEST(Mps, FractionalBinaryIsRejectedWithLine) {
  const MilpModel m = BuildAF1(Micro1()).model;
  const std::string name = m.variable(0).name;
  std::stringstream in("# comment\n" + name + " 0.5\n");
  try {
    ReadSolutionFile(in, m);
    FAIL() << "expected a parse error";
  } catch (const FileFormatError& e) {
    EXPECT_EQ(e.line(), 2);
  }
  std::stringstream two(name + " 2\n");
  EXPECT_THROW(ReadSolutionFile(two, m), FileFormatError);
  std::stringstream junk(name + " abc\n");
  EXPECT_THROW(ReadSolutionFile(junk, m), FileFormatError);
}

TEST(Mps, UnknownNamesIgnoredAndMetadataRead) {
  const MilpModel m = BuildAF1(Micro1()).model;
  std::stringstream in("# status optimal\n# objective 2\n# bound 2\nnot_a_var 1\n" +
                       m.variable(1).name + " 1\n");
  const SolutionFile sol = ReadSolutionFile(in, m);
  EXPECT_EQ(sol.status, "optimal");
  EXPECT_EQ(sol.objective, 2.0);
  EXPECT_EQ(sol.values[1], 1);
  EXPECT_EQ(sol.values[0], 0);
}

TEST(Mps, TruncatedFileIsRejected) {
  std::stringstream in("NAME x\nROWS\n N  OBJ\nCOLUMNS\n");
  EXPECT_THROW(ReadMps(in), FileFormatError);
}

}  // namespace
}  // namespace chemo
