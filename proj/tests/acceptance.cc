// Acceptance harness: `acceptance --criterion N` checks one criterion and
// prints a single PASS/FAIL line; without the flag every criterion runs.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "chemo/bounds.h"
#include "chemo/cli.h"
#include "chemo/disaggregate.h"
#include "chemo/formulations.h"
#include "chemo/lexico.h"
#include "chemo/mps.h"
#include "chemo/oracle.h"
#include "chemo/report.h"
#include "fixtures.h"
#include "json.hpp"

namespace chemo {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

constexpr int kSuiteSize = 200;
constexpr std::uint64_t kSuiteSeed = 10000;  // disjoint from the unit-test seeds

Instance SuiteInstance(int i) { return testing::TinyInstance(kSuiteSeed + i); }

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

int Sum(const std::vector<int>& v) { return std::accumulate(v.begin(), v.end(), 0); }

// Daily maximum of (infusion start - visit end) straight from the appointments.
std::vector<int> WaitFormula(const CompleteSchedule& s, const Instance& inst) {
  std::vector<int> w(inst.days, 0);
  for (int p = 0; p < inst.num_patients(); ++p) {
    const auto& e = s.entries[p];
    if (e) w[e->day] = std::max(w[e->day], e->infusion_start - e->visit_start - inst.patients[p].visit);
  }
  return w;
}

Outcome Equivalence() {
  const auto start = Clock::now();
  int match = 0;
  std::string first_miss;
  for (int i = 0; i < kSuiteSize; ++i) {
    const Instance inst = SuiteInstance(i);
    const SolveResult r = Solve(BuildAF1(inst).model, {});
    const int oracle = BruteForceLexico(inst).v1;
    if (r.status == SolveStatus::kOptimal && r.objective == oracle) {
      ++match;
    } else if (first_miss.empty()) {
      first_miss = " first mismatch at instance " + std::to_string(i);
    }
  }
  const double secs = Seconds(start);
  Outcome o;
  o.pass = match == kSuiteSize && secs < 300;
  o.detail = std::to_string(match) + "/" + std::to_string(kSuiteSize) +
             " AF1 optima equal the oracle, " + std::to_string(secs) + " s" + first_miss;
  return o;
}

Outcome Disaggregation() {
  std::mt19937_64 rng(4242);
  int ok = 0, total = 0;
  for (int i = 0; total < 1200; ++i) {
    const Instance inst = SuiteInstance(i % kSuiteSize);
    const AggregateSchedule agg = testing::SampleFeasibleAggregate(inst, rng);
    ++total;
    try {
      const CompleteSchedule s = Disaggregate(agg, inst);
      if (!ValidateSchedule(s, inst).empty()) continue;
      const MetricsRecord m = Evaluate(s, inst);
      if (m.phi1 == agg.Treated() && m.phi2 == DailyMaxWait(agg, inst) &&
          m.phi3 == agg.ChairCount()) {
        ++ok;
      }
    } catch (const std::exception&) {
    }
  }
  return {ok == total, std::to_string(ok) + "/" + std::to_string(total) +
                           " sampled aggregates disaggregate cleanly with equal metrics"};
}

Outcome LexicoExactness() {
  int p1_ok = 0, p2_ok = 0;
  for (int i = 0; i < kSuiteSize; ++i) {
    const Instance inst = SuiteInstance(i);
    const LexicoOptimum best = BruteForceLexico(inst);
    const Procedure1Result p1 = RunProcedure1(inst, {});
    // Equal-total daily vectors are equally good; only the sum is pinned down.
    if (p1.v1 == best.v1 && Sum(p1.v2) == Sum(best.v2)) ++p1_ok;
    const LexicoOutcome p2 = RunProcedure2(inst, {});
    const MetricsRecord m = Evaluate(p2.schedule, inst);
    bool ok = p2.phi3 <= best.phi3 && m.phi1 >= p2.v1 && m.phi3 == p2.phi3;
    for (int t = 0; t < inst.days; ++t) ok = ok && m.phi2[t] <= p2.v2[t];
    if (ok) ++p2_ok;
  }
  return {p1_ok == kSuiteSize && p2_ok == kSuiteSize,
          "procedure1 wait total optimal on " + std::to_string(p1_ok) + "/" +
              std::to_string(kSuiteSize) + ", procedure2 within caps and <= optimum on " +
              std::to_string(p2_ok) + "/" + std::to_string(kSuiteSize)};
}

Outcome BoundDominance() {
  int ok = 0, counted = 0;
  for (int i = 0; i < kSuiteSize; ++i) {
    const Instance inst = SuiteInstance(i);
    const LexicoOptimum best = BruteForceLexico(inst);
    const BoundResult ub1 = Ub1(inst, {});
    const BoundResult ub2 = Ub2(inst, best.v1, best.v2, {});
    if (ub1.status != BoundStatus::kExact || ub2.status != BoundStatus::kExact) continue;
    ++counted;
    if (best.phi3 <= ub2.value && ub2.value <= ub1.value && ub1.value <= inst.NumNonCritical()) {
      ++ok;
    }
  }
  return {ok == counted && counted > 0,
          std::to_string(ok) + "/" + std::to_string(counted) +
              " instances satisfy phi3* <= UB2 <= UB1 <= non-critical count"};
}

Outcome MetricSemantics() {
  std::mt19937_64 rng(77);
  int ok = 0, total = 0;
  auto check = [&](const CompleteSchedule& s, const Instance& inst) {
    ++total;
    const auto sim = SimulateWaiting(s, inst);
    if (sim == WaitFormula(s, inst) && sim == Evaluate(s, inst).phi2) ++ok;
  };
  for (int i = 0; i < kSuiteSize; ++i) {
    const Instance inst = SuiteInstance(i);
    check(RunProcedure2(inst, {}).schedule, inst);
    check(BruteForceLexico(inst).schedule, inst);
    check(Disaggregate(testing::SampleFeasibleAggregate(inst, rng), inst), inst);
  }
  return {ok == total, std::to_string(ok) + "/" + std::to_string(total) +
                           " schedules have simulated waits equal to the formula"};
}

// Writes `built`, reads it back, and replays `values` through a solution file.
bool ReplayMatches(const BuiltModel& built, const std::vector<std::int64_t>& values,
                   std::int64_t expected) {
  std::stringstream mps;
  WriteMps(built.model, mps);
  const MilpModel read = ReadMps(mps);
  std::stringstream sol;
  WriteSolution(built.model, values, sol);
  const SolutionFile file = ReadSolutionFile(sol, read);
  return read.num_variables() == built.model.num_variables() &&
         read.num_constraints() == built.model.num_constraints() &&
         read.Violations(file.values).empty() && read.Objective(file.values) == expected &&
         built.model.Objective(values) == expected;
}

Outcome FileFidelity() {
  int ok = 0, total = 0;
  for (int i = -1; i < 60; ++i) {
    const Instance inst = i < 0 ? testing::Micro1() : SuiteInstance(i);
    const LexicoOptimum best = BruteForceLexico(inst);
    const AggregateSchedule agg = Aggregate(best.schedule);
    const BuiltModel af1 = BuildAF1(inst);
    const BuiltModel af2 = BuildAF2(inst, best.v1);
    const BuiltModel af3 = BuildAF3(inst, best.v1, best.v2);
    ok += ReplayMatches(af1, AggregateToAssignment(inst, af1, agg), best.v1);
    ok += ReplayMatches(af2, AggregateToAssignment(inst, af2, agg), Sum(best.v2));
    ok += ReplayMatches(af3, AggregateToAssignment(inst, af3, agg), best.phi3);
    total += 3;
  }
  return {ok == total, std::to_string(ok) + "/" + std::to_string(total) +
                           " exported models replay the optimum with the same objective"};
}

Outcome ScaledRun(const std::string& backend) {
  const fs::path dir = fs::temp_directory_path() / "chemo_acceptance_full";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const Instance inst = Generate(DefaultGeneratorParams());
  SaveInstance(inst, dir / "week.json");
  const StageLimits limits;
  const double ub2_limit = 60;
  const double budget = limits.af1 + inst.days * limits.af2_day + limits.af2_warm +
                        limits.p3_overall + ub2_limit;
  std::ostringstream out, err;
  const auto start = Clock::now();
  const int code = RunCli({"solve", "--instance", (dir / "week.json").string(), "--backend",
                           backend, "--out", (dir / "run").string(), "--bound"},
                          out, err);
  const double secs = Seconds(start);
  if (code != kExitOk) {
    return {false, "solve exited with " + std::to_string(code) + ": " + err.str()};
  }
  std::ifstream in(dir / "run" / "schedule.json");
  std::stringstream text;
  text << in.rdbuf();
  const CompleteSchedule schedule = ScheduleFromJson(text.str(), inst);
  const auto violations = ValidateSchedule(schedule, inst);
  const auto result = nlohmann::json::parse(out.str());
  const double gap = result.value("gap_percent", -1.0);
  Outcome o;
  o.pass = secs <= 1.5 * budget && violations.empty() && result.contains("gap_percent");
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "%d patients, phi1=%d phi2=%d phi3=%d UB2=%d gap=%.2f%% (soft target 12%%: %s), "
                "%.0f s of %.0f s allowed, %zu violations",
                inst.num_patients(), result.value("phi1", -1), result.value("phi2", -1),
                result.value("phi3", -1), result.value("ub2", -1), gap,
                gap >= 0 && gap <= 12 ? "met" : "missed", secs, 1.5 * budget, violations.size());
  o.detail = buf;
  return o;
}

Outcome KOptMonotonicity() {
  std::mt19937_64 rng(99);
  int ok = 0, runs = 0, accepted = 0;
  auto check_trace = [&](const std::vector<int>& trace, const std::vector<StageLog>& logs,
                         int before, int after) {
    ++runs;
    bool good = !trace.empty() && trace.front() == before && after >= before;
    for (std::size_t i = 1; i < trace.size(); ++i) good = good && trace[i] > trace[i - 1];
    std::int64_t last = before;
    for (const StageLog& log : logs) {
      if (log.stage != "kopt" || !log.accepted || !*log.accepted) continue;
      ++accepted;
      good = good && log.objective > last;
      last = log.objective;
    }
    if (good) ++ok;
  };
  for (int i = 0; i < kSuiteSize; ++i) {
    const Instance inst = SuiteInstance(i);
    LexicoOptions opts;
    opts.kopt = {2, 2, 2, 2};
    const LexicoOutcome out = RunProcedure2(inst, opts);
    check_trace(out.kopt_trace, out.logs, out.phi3_before_kopt, out.phi3);

    // A random feasible start leaves room for several improving moves.
    const AggregateSchedule start = testing::SampleFeasibleAggregate(inst, rng);
    const KOptResult k = KOptSearch(inst, start, start.Treated(), DailyMaxWait(start, inst),
                                    KOptParams{2, 2, 2, 2}, {});
    check_trace(k.trace, k.logs, start.ChairCount(), k.schedule.ChairCount());
  }
  return {ok == runs && accepted > 0,
          std::to_string(ok) + "/" + std::to_string(runs) + " runs monotone over " +
              std::to_string(accepted) + " accepted moves"};
}

}  // namespace
}  // namespace chemo

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks"};
  int only = 0;
  std::string backend =
      std::string("external:python3 ") + CHEMO_SOURCE_DIR + "/tools/highs_backend.py";
  app.add_option("--criterion", only, "Run a single criterion (1-8)")->check(CLI::Range(1, 8));
  app.add_option("--backend", backend, "Backend for the full-scale run");
  CLI11_PARSE(app, argc, argv);

  using chemo::Outcome;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"AF1 equals the enumeration optimum", chemo::Equivalence},
      {"disaggregation soundness", chemo::Disaggregation},
      {"lexicographic exactness", chemo::LexicoExactness},
      {"bound validity and dominance", chemo::BoundDominance},
      {"waiting metric semantics", chemo::MetricSemantics},
      {"MPS and solution file fidelity", chemo::FileFidelity},
      {"full-scale week", [&] { return chemo::ScaledRun(backend); }},
      {"k-opt monotonicity", chemo::KOptMonotonicity},
  };
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only != 0 && only != static_cast<int>(i) + 1) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << "criterion " << i + 1 << " [" << criteria[i].first << "]: "
              << (o.pass ? "PASS" : "FAIL") << " - " << o.detail << std::endl;
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
