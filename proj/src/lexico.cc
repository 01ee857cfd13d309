#include "chemo/lexico.h"

#include <chrono>
#include <functional>
#include <future>
#include <numeric>

#include "chemo/disaggregate.h"
#include "json.hpp"

namespace chemo {
namespace {

using Clock = std::chrono::steady_clock;

double Since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

StageLog MakeLog(std::string stage, std::optional<int> day, const SolveResult& r) {
  StageLog log;
  log.stage = std::move(stage);
  log.day = day;
  log.status = r.status;
  log.objective = r.objective;
  log.bound = r.best_bound;
  log.runtime = r.runtime;
  return log;
}

SolveOptions WithLimit(const SolveOptions& base, double seconds) {
  SolveOptions out = base;
  out.time_limit = seconds;
  out.work_dir.clear();  // concurrent solves must not share exchange files
  return out;
}

void ThrowIfBackendFailed(const SolveResult& r, const std::string& stage,
                          const std::vector<StageLog>& logs) {
  if (r.status == SolveStatus::kBackendError) {
    throw LexicoError(stage + ": " + r.backend_error, logs, true);
  }
}

int TotalWait(const AggregateSchedule& agg, const Instance& inst) {
  const auto w = DailyMaxWait(agg, inst);
  return std::accumulate(w.begin(), w.end(), 0);
}

// Copies the entries of `day` from `src` into `dst`.
void MergeDay(AggregateSchedule& dst, const AggregateSchedule& src, int day) {
  for (std::size_t p = 0; p < dst.entries.size(); ++p) {
    if (dst.entries[p] && dst.entries[p]->day == day) dst.entries[p].reset();
  }
  for (std::size_t p = 0; p < src.entries.size(); ++p) {
    if (src.entries[p] && src.entries[p]->day == day) dst.entries[p] = src.entries[p];
  }
}

struct DayOutcome {
  AggregateSchedule schedule;
  SolveResult result;
};

// Runs `solve_day` for every day, possibly concurrently, and returns the
// outcomes indexed by day.
std::vector<DayOutcome> ForEachDay(int days, int threads,
                                   const std::function<DayOutcome(int)>& solve_day) {
  std::vector<DayOutcome> out(days);
  if (threads <= 1) {
    for (int t = 0; t < days; ++t) out[t] = solve_day(t);
    return out;
  }
  for (int first = 0; first < days; first += threads) {
    std::vector<std::future<DayOutcome>> batch;
    for (int t = first; t < std::min(days, first + threads); ++t) {
      batch.push_back(std::async(std::launch::async, solve_day, t));
    }
    for (std::size_t i = 0; i < batch.size(); ++i) out[first + i] = batch[i].get();
  }
  return out;
}

// Solves the single-day restriction of `stage` for every day, warm-started
// from `current`; days whose solve yields no point keep `current`.
AggregateSchedule SolveDays(const Instance& inst, const AggregateSchedule& current,
                            DayStage stage, std::span<const int> v2, double limit,
                            const LexicoOptions& opts, std::vector<StageLog>& logs) {
  const auto rosters = DailyRosters(current, inst.days);
  auto solve_day = [&](int t) {
    DayOutcome out;
    const std::optional<int> cap =
        stage == DayStage::kP3 ? std::optional<int>(v2[t]) : std::nullopt;
    BuiltModel built = BuildSingleDay(inst, t, rosters[t], stage, cap);
    const AggregateSchedule day_start = RestrictToDay(current, t);
    built.model.SetWarmStart(AggregateToAssignment(inst, built, day_start));
    out.result = Solve(built.model, WithLimit(opts.solve, limit));
    out.schedule = day_start;
    if (out.result.assignment) {
      out.schedule = ExtractAggregate(inst, built.vars, *out.result.assignment);
    }
    return out;
  };
  const auto outcomes = ForEachDay(inst.days, opts.threads, solve_day);
  AggregateSchedule merged = current;
  const std::string name = stage == DayStage::kP2 ? "P2-day" : "P3-day";
  for (int t = 0; t < inst.days; ++t) {
    logs.push_back(MakeLog(name, t, outcomes[t].result));
    ThrowIfBackendFailed(outcomes[t].result, name, logs);
    MergeDay(merged, outcomes[t].schedule, t);
  }
  return merged;
}

}  // namespace

std::string StageLogToJson(const StageLog& log) {
  nlohmann::ordered_json j;
  j["stage"] = log.stage;
  if (log.day) j["day"] = *log.day + 1;
  if (log.iteration) j["iteration"] = *log.iteration;
  if (log.accepted) j["accepted"] = *log.accepted;
  j["status"] = StatusName(log.status);
  j["objective"] = log.objective;
  j["bound"] = log.bound;
  j["runtime"] = log.runtime;
  return j.dump();
}

Stage1Result RunStage1(const Instance& inst, const LexicoOptions& opts) {
  Stage1Result out;
  BuiltModel built = BuildAF1(inst);
  built.model.SetWarmStart(AggregateToAssignment(inst, built, GreedySchedule(inst)));
  const SolveResult r = Solve(built.model, WithLimit(opts.solve, opts.limits.af1));
  out.logs.push_back(MakeLog("AF1", std::nullopt, r));
  ThrowIfBackendFailed(r, "AF1", out.logs);
  if (!r.assignment) {
    throw LexicoError(std::string("AF1 produced no schedule: ") + StatusName(r.status), out.logs,
                      false);
  }
  out.schedule = ExtractAggregate(inst, built.vars, *r.assignment);
  out.v1 = out.schedule.Treated();
  out.optimal = r.status == SolveStatus::kOptimal;
  return out;
}

Procedure1Result RunProcedure1(const Instance& inst, const LexicoOptions& opts) {
  Stage1Result s1 = RunStage1(inst, opts);
  Procedure1Result out;
  out.v1 = s1.v1;
  out.logs = std::move(s1.logs);

  // Fix each day's treated set and minimize that day's maximum wait.
  const AggregateSchedule per_day =
      SolveDays(inst, s1.schedule, DayStage::kP2, {}, opts.limits.af2_day, opts, out.logs);

  // Whole-week model seeded with the union; rosters may change.
  BuiltModel af2 = BuildAF2(inst, out.v1);
  af2.model.SetWarmStart(AggregateToAssignment(inst, af2, per_day));
  const SolveResult r = Solve(af2.model, WithLimit(opts.solve, opts.limits.af2_warm));
  out.logs.push_back(MakeLog("AF2-warm", std::nullopt, r));
  ThrowIfBackendFailed(r, "AF2-warm", out.logs);
  out.schedule = per_day;
  if (r.assignment) {
    AggregateSchedule whole = ExtractAggregate(inst, af2.vars, *r.assignment);
    if (TotalWait(whole, inst) <= TotalWait(per_day, inst)) out.schedule = std::move(whole);
  }
  out.v2 = DailyMaxWait(out.schedule, inst);
  return out;
}

KOptResult KOptSearch(const Instance& inst, const AggregateSchedule& start, int v1,
                      std::span<const int> v2, const KOptParams& kopt,
                      const SolveOptions& solve) {
  const auto begin = Clock::now();
  KOptResult out;
  out.schedule = start;
  out.trace.push_back(start.ChairCount());
  for (int iteration = 1;; ++iteration) {
    const double remaining = kopt.overall_time_limit - Since(begin);
    if (remaining <= 0) break;
    BuiltModel built = BuildAF3(inst, v1, v2);
    AddKOptConstraints(built, out.schedule, kopt);
    built.model.SetWarmStart(AggregateToAssignment(inst, built, out.schedule));
    const SolveResult r =
        Solve(built.model, WithLimit(solve, std::min(kopt.iteration_time_limit, remaining)));
    StageLog log = MakeLog("kopt", std::nullopt, r);
    log.iteration = iteration;
    bool improved = false;
    if (r.assignment) {
      AggregateSchedule next = ExtractAggregate(inst, built.vars, *r.assignment);
      if (next.ChairCount() > out.schedule.ChairCount()) {
        out.schedule = std::move(next);
        out.trace.push_back(out.schedule.ChairCount());
        improved = true;
      }
    }
    log.accepted = improved;
    out.logs.push_back(log);
    if (!improved) break;
  }
  return out;
}

LexicoOutcome RunProcedure2(const Instance& inst, const LexicoOptions& opts) {
  Procedure1Result p1 = RunProcedure1(inst, opts);
  LexicoOutcome out;
  out.v1 = p1.v1;
  out.v2 = p1.v2;
  out.logs = std::move(p1.logs);

  const auto p3_start = Clock::now();
  AggregateSchedule current =
      SolveDays(inst, p1.schedule, DayStage::kP3, out.v2, opts.limits.p3_day, opts, out.logs);
  out.phi3_before_kopt = current.ChairCount();

  KOptParams kopt = opts.kopt;
  kopt.iteration_time_limit = opts.limits.kopt_iter;
  kopt.overall_time_limit = opts.limits.p3_overall - Since(p3_start);
  if (kopt.overall_time_limit > 0) {
    KOptResult k = KOptSearch(inst, current, out.v1, out.v2, kopt, opts.solve);
    // A failed iteration simply ends the search at the current incumbent.
    out.logs.insert(out.logs.end(), k.logs.begin(), k.logs.end());
    out.kopt_trace = std::move(k.trace);
    current = std::move(k.schedule);
  } else {
    out.kopt_trace = {current.ChairCount()};
  }

  if (opts.final_warm_solve) {
    BuiltModel af3 = BuildAF3(inst, out.v1, out.v2);
    af3.model.SetWarmStart(AggregateToAssignment(inst, af3, current));
    const double remaining = std::max(1.0, opts.limits.p3_overall - Since(p3_start));
    const SolveResult r = Solve(af3.model, WithLimit(opts.solve, remaining));
    out.logs.push_back(MakeLog("AF3-warm", std::nullopt, r));
    if (r.assignment) {
      AggregateSchedule whole = ExtractAggregate(inst, af3.vars, *r.assignment);
      if (whole.ChairCount() > current.ChairCount()) current = std::move(whole);
    }
  }

  // Lexicographic safety: the final point keeps v1 and every daily cap.
  const auto waits = DailyMaxWait(current, inst);
  for (int t = 0; t < inst.days; ++t) {
    if (waits[t] > out.v2[t]) {
      throw LexicoError("final schedule exceeds the waiting cap on day " + std::to_string(t + 1),
                        out.logs, false);
    }
  }
  if (current.Treated() < out.v1) {
    throw LexicoError("final schedule treats fewer patients than v1", out.logs, false);
  }
  out.aggregate = current;
  out.phi3 = current.ChairCount();
  out.schedule = Disaggregate(current, inst);
  return out;
}

}  // namespace chemo
