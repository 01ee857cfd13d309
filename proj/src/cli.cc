#include "chemo/cli.h"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "chemo/bounds.h"
#include "chemo/disaggregate.h"
#include "chemo/formulations.h"
#include "chemo/instance.h"
#include "chemo/lexico.h"
#include "chemo/mps.h"
#include "chemo/oracle.h"
#include "chemo/report.h"
#include "json.hpp"

namespace chemo {
namespace {

namespace fs = std::filesystem;

// Bad flag values discovered after parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Unreadable or inconsistent input files.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Solver or backend failures.
struct BackendFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CommonFlags {
  std::string instance;
  std::string backend = "internal";
  std::string limits;
  std::string kopt;
  std::uint64_t seed = 1;
  int threads = 1;
};

void AddCommon(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--instance", f.instance, "Instance JSON file")->required();
  cmd->add_option("--backend", f.backend, "internal | external:<command> | oracle");
  cmd->add_option("--limits", f.limits,
                  "Stage limits in seconds, e.g. af1=300,af2day=60,af2warm=300,p3day=90,"
                  "kopt=60,p3all=600");
  cmd->add_option("--kopt", f.kopt, "Neighbourhood radii k_x,k_y,k_zB,k_zS");
  cmd->add_option("--seed", f.seed, "Deterministic seed");
  cmd->add_option("--threads", f.threads, "Concurrent per-day subproblems")
      ->check(CLI::PositiveNumber);
}

std::vector<std::string> Split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream in(text);
  std::string part;
  while (std::getline(in, part, sep)) parts.push_back(part);
  return parts;
}

double ParsePositive(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double value = 0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || !(value > 0)) throw UsageError(what + " must be a positive number");
  return value;
}

int ParseInt(const std::string& text, const std::string& what, int min_value) {
  std::size_t used = 0;
  int value = 0;
  try {
    value = std::stoi(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || value < min_value) {
    throw UsageError(what + " must be an integer >= " + std::to_string(min_value));
  }
  return value;
}

StageLimits ParseLimits(const std::string& text) {
  StageLimits limits;
  if (text.empty()) return limits;
  const std::map<std::string, double StageLimits::*> keys{
      {"af1", &StageLimits::af1},         {"af2day", &StageLimits::af2_day},
      {"af2warm", &StageLimits::af2_warm}, {"p3day", &StageLimits::p3_day},
      {"kopt", &StageLimits::kopt_iter},   {"p3all", &StageLimits::p3_overall}};
  for (const std::string& item : Split(text, ',')) {
    const auto eq = item.find('=');
    const auto key = keys.find(item.substr(0, eq));
    if (eq == std::string::npos || key == keys.end()) {
      throw UsageError("unknown --limits entry '" + item + "'");
    }
    limits.*(key->second) = ParsePositive(item.substr(eq + 1), "--limits " + key->first);
  }
  return limits;
}

KOptParams ParseKOpt(const std::string& text) {
  KOptParams k;
  if (text.empty()) return k;
  const auto parts = Split(text, ',');
  if (parts.size() != 4) throw UsageError("--kopt expects four comma-separated integers");
  k.k_x = ParseInt(parts[0], "--kopt", 0);
  k.k_y = ParseInt(parts[1], "--kopt", 0);
  k.k_zB = ParseInt(parts[2], "--kopt", 0);
  k.k_zS = ParseInt(parts[3], "--kopt", 0);
  return k;
}

SolveOptions ParseBackend(const std::string& text, std::uint64_t seed) {
  SolveOptions opts;
  opts.seed = seed;
  if (text == "internal") {
    opts.backend = Backend::kInternal;
  } else if (text == "oracle") {
    opts.backend = Backend::kOracle;
  } else if (text.rfind("external:", 0) == 0 && text.size() > 9) {
    opts.backend = Backend::kExternal;
    opts.external_command = text.substr(9);
  } else {
    throw UsageError("--backend must be internal, oracle or external:<command>");
  }
  return opts;
}

LexicoOptions MakeLexicoOptions(const CommonFlags& f) {
  LexicoOptions opts;
  opts.solve = ParseBackend(f.backend, f.seed);
  opts.limits = ParseLimits(f.limits);
  opts.kopt = ParseKOpt(f.kopt);
  opts.threads = f.threads;
  return opts;
}

Instance ReadInstance(const std::string& path) {
  Instance inst;
  try {
    inst = LoadInstance(path);
  } catch (const InstanceFormatError& e) {
    throw DataError(path + ": " + e.what());
  }
  const auto problems = ValidateInstance(inst);
  if (!problems.empty()) {
    std::string text = path + ": invalid instance";
    for (const Violation& v : problems) text += "\n  " + v.entity + ": " + v.message;
    throw DataError(text);
  }
  return inst;
}

std::vector<int> ParseV2(const std::string& text, int days) {
  std::vector<int> v2;
  for (const std::string& part : Split(text, ',')) v2.push_back(ParseInt(part, "--v2", 0));
  if (static_cast<int>(v2.size()) != days) {
    throw UsageError("--v2 needs one value per day (" + std::to_string(days) + ")");
  }
  return v2;
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream file(path);
  if (!file) throw DataError("cannot write " + path.string());
  file << text;
  if (!text.empty() && text.back() != '\n') file << '\n';
}

std::string Percent(double value) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(2) << value;
  return s.str();
}

// ---------------------------------------------------------------------------

struct GenerateFlags {
  std::uint64_t seed = 1;
  int patients = 614;
  std::string out;
};

int CmdGenerate(const GenerateFlags& f, std::ostream& out) {
  if (f.patients < 0) throw UsageError("--patients must be >= 0");
  GeneratorParams params = DefaultGeneratorParams();
  params.seed = f.seed;
  params.total_patients = f.patients;
  Instance inst;
  try {
    inst = Generate(params);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  SaveInstance(inst, f.out);

  // One row in the layout of the patient-mix table: totals, critical share
  // and the share of every pathology group.
  const int n = inst.num_patients();
  auto share = [&](int count) { return Percent(n > 0 ? 100.0 * count / n : 0.0); };
  std::vector<int> per_group(inst.pathologies.size(), 0);
  for (const Patient& p : inst.patients) ++per_group[p.pathology];
  out << std::left << std::setw(8) << "|P|" << std::setw(16) << "critical";
  for (const auto& name : inst.pathologies) out << std::setw(16) << name;
  out << "\n" << std::setw(8) << n
      << std::setw(16) << (std::to_string(inst.NumCritical()) + " " + share(inst.NumCritical()));
  for (int count : per_group) out << std::setw(16) << (std::to_string(count) + " " + share(count));
  out << "\nwritten " << f.out << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct SolveFlags {
  CommonFlags common;
  std::string out = ".";
  int stage = 3;
  bool bound = false;
  bool final_warm = false;
  double ub2_limit = 60;
};

void WriteLogs(const fs::path& dir, const std::vector<StageLog>& logs) {
  std::string text;
  for (const StageLog& log : logs) text += StageLogToJson(log) + "\n";
  WriteText(dir / "stages.jsonl", text);
}

void WriteScheduleFiles(const fs::path& dir, const CompleteSchedule& schedule,
                        const Instance& inst, MetricsRecord& metrics) {
  const auto problems = ValidateSchedule(schedule, inst);
  if (!problems.empty()) {
    throw BackendFailure("produced schedule fails validation: " + problems.front().message);
  }
  metrics = Evaluate(schedule, inst);
  WriteText(dir / "schedule.json", Emit(schedule, metrics, inst, ReportFormat::kJson));
  WriteText(dir / "metrics.json", MetricsToJson(metrics));
  WriteText(dir / "schedule.csv", Emit(schedule, metrics, inst, ReportFormat::kCsv));
  WriteText(dir / "gantt.txt", Emit(schedule, metrics, inst, ReportFormat::kGantt));
}

int CmdSolve(const SolveFlags& f, std::ostream& out) {
  if (f.stage < 1 || f.stage > 3) throw UsageError("--stage must be 1, 2 or 3");
  LexicoOptions opts = MakeLexicoOptions(f.common);
  opts.final_warm_solve = f.final_warm;
  const Instance inst = ReadInstance(f.common.instance);
  const fs::path dir = f.out;
  fs::create_directories(dir);
  const auto start = std::chrono::steady_clock::now();

  nlohmann::ordered_json result;
  std::vector<StageLog> logs;
  std::optional<CompleteSchedule> schedule;
  std::vector<int> v2;
  int v1 = 0;
  try {
    if (opts.solve.backend == Backend::kOracle) {
      LexicoOptimum best;
      try {
        best = BruteForceLexico(inst);
      } catch (const OracleSizeError& e) {
        throw UsageError(std::string("oracle backend: ") + e.what());
      }
      v1 = best.v1;
      v2 = best.v2;
      schedule = best.schedule;
      StageLog log;
      log.stage = "oracle";
      log.objective = best.v1;
      log.bound = best.v1;
      logs.push_back(log);
    } else if (f.stage == 1) {
      Stage1Result s1 = RunStage1(inst, opts);
      v1 = s1.v1;
      logs = std::move(s1.logs);
    } else if (f.stage == 2) {
      Procedure1Result p1 = RunProcedure1(inst, opts);
      v1 = p1.v1;
      v2 = p1.v2;
      logs = std::move(p1.logs);
      schedule = Disaggregate(p1.schedule, inst);
    } else {
      LexicoOutcome lex = RunProcedure2(inst, opts);
      v1 = lex.v1;
      v2 = lex.v2;
      logs = std::move(lex.logs);
      schedule = std::move(lex.schedule);
      result["phi3_before_kopt"] = lex.phi3_before_kopt;
      result["kopt_trace"] = lex.kopt_trace;
    }
  } catch (const LexicoError& e) {
    WriteLogs(dir, e.logs());
    throw BackendFailure(e.what());
  }
  WriteLogs(dir, logs);

  result["v1"] = v1;
  if (!v2.empty()) result["v2"] = v2;
  if (schedule) {
    MetricsRecord metrics;
    WriteScheduleFiles(dir, *schedule, inst, metrics);
    result["phi1"] = metrics.phi1;
    result["phi2"] = metrics.phi2_total;
    result["phi3"] = metrics.phi3;
    if (f.bound) {
      SolveOptions bound_opts = opts.solve;
      bound_opts.time_limit = f.ub2_limit;
      if (bound_opts.backend == Backend::kOracle) bound_opts.backend = Backend::kInternal;
      BoundResult ub2;
      try {
        ub2 = Ub2(inst, v1, v2, bound_opts);
      } catch (const std::runtime_error& e) {
        throw BackendFailure(e.what());
      }
      WriteText(dir / "bound.json", BoundToJson(ub2));
      result["ub2"] = ub2.value;
      result["ub2_status"] = ub2.status == BoundStatus::kExact ? "exact" : "time_limit";
      result["gap_percent"] =
          ub2.value > 0 ? 100.0 * (ub2.value - metrics.phi3) / ub2.value : 0.0;
    }
  }
  result["runtime"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  WriteText(dir / "result.json", result.dump(2));
  out << result.dump() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct BoundFlags {
  CommonFlags common;
  std::optional<int> v1;
  std::string v2;
  double ub1_limit = 60;
  double ub2_limit = 60;
  std::string out;
};

// v1 and v2 from the flags, running the first procedure for whatever is
// missing.
std::pair<int, std::vector<int>> ResolveTargets(const Instance& inst, std::optional<int> v1,
                                                const std::string& v2_text,
                                                const LexicoOptions& opts, bool need_v2) {
  std::vector<int> v2;
  if (!v2_text.empty()) v2 = ParseV2(v2_text, inst.days);
  if (v1 && (!need_v2 || !v2.empty())) return {*v1, v2};
  try {
    if (!need_v2) return {RunStage1(inst, opts).v1, v2};
    Procedure1Result p1 = RunProcedure1(inst, opts);
    return {v1.value_or(p1.v1), v2.empty() ? p1.v2 : v2};
  } catch (const LexicoError& e) {
    throw BackendFailure(e.what());
  }
}

int CmdBound(const BoundFlags& f, std::ostream& out) {
  const LexicoOptions opts = MakeLexicoOptions(f.common);
  const Instance inst = ReadInstance(f.common.instance);
  const auto [v1, v2] = ResolveTargets(inst, f.v1, f.v2, opts, true);
  SolveOptions so = opts.solve;
  if (so.backend == Backend::kOracle) so.backend = Backend::kInternal;
  std::vector<BoundResult> bounds{TrivialBound(inst)};
  try {
    so.time_limit = f.ub1_limit;
    bounds.push_back(Ub1(inst, so));
    so.time_limit = f.ub2_limit;
    bounds.push_back(Ub2(inst, v1, v2, so));
  } catch (const std::runtime_error& e) {
    throw BackendFailure(e.what());
  }
  int best = bounds.front().value;
  for (const BoundResult& b : bounds) best = std::min(best, b.value);

  out << std::left << std::setw(10) << "method" << std::setw(8) << "value" << std::setw(12)
      << "status" << std::setw(12) << "runtime" << "gap_to_best_%\n";
  nlohmann::ordered_json report;
  report["v1"] = v1;
  report["v2"] = v2;
  for (const BoundResult& b : bounds) {
    const double gap = best > 0 ? 100.0 * (b.value - best) / best : 0.0;
    out << std::setw(10) << BoundMethodName(b.method) << std::setw(8) << b.value << std::setw(12)
        << (b.status == BoundStatus::kExact ? "exact" : "time_limit") << std::setw(12)
        << Percent(b.runtime) << Percent(gap) << "\n";
    report["bounds"].push_back(nlohmann::ordered_json::parse(BoundToJson(b)));
  }
  if (!f.out.empty()) WriteText(f.out, report.dump(2));
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct ValidateFlags {
  std::string instance;
  std::string schedule;
};

int CmdValidate(const ValidateFlags& f, std::ostream& out) {
  const Instance inst = ReadInstance(f.instance);
  std::ifstream file(f.schedule);
  if (!file) throw DataError("cannot read " + f.schedule);
  std::stringstream text;
  text << file.rdbuf();
  CompleteSchedule schedule;
  try {
    schedule = ScheduleFromJson(text.str(), inst);
  } catch (const std::exception& e) {
    throw DataError(f.schedule + ": " + e.what());
  }
  const auto problems = ValidateSchedule(schedule, inst);
  if (problems.empty()) {
    const MetricsRecord m = Evaluate(schedule, inst);
    out << "valid: phi1=" << m.phi1 << " phi2=" << m.phi2_total << " phi3=" << m.phi3 << "\n";
    return kExitOk;
  }
  for (const Violation& v : problems) {
    out << v.rule << " " << v.entity << ": " << v.message << "\n";
  }
  return kExitInvalidData;
}

// ---------------------------------------------------------------------------

struct ExportFlags {
  CommonFlags common;
  std::string model = "af1";
  std::optional<int> v1;
  std::string v2;
  std::string out;
};

int CmdExportMps(const ExportFlags& f, std::ostream& out) {
  const LexicoOptions opts = MakeLexicoOptions(f.common);
  const Instance inst = ReadInstance(f.common.instance);
  BuiltModel built;
  if (f.model == "f1") {
    built = BuildF1Complete(inst);
  } else if (f.model == "af1") {
    built = BuildAF1(inst);
  } else if (f.model == "ub1") {
    built = BuildUB1(inst);
  } else if (f.model == "af2") {
    built = BuildAF2(inst, ResolveTargets(inst, f.v1, f.v2, opts, false).first);
  } else if (f.model == "af3" || f.model == "ub2") {
    const auto [v1, v2] = ResolveTargets(inst, f.v1, f.v2, opts, true);
    built = f.model == "af3" ? BuildAF3(inst, v1, v2) : BuildUB2(inst, v1, v2);
  } else {
    throw UsageError("--model must be one of f1, af1, af2, af3, ub1, ub2");
  }
  WriteMps(built.model, fs::path(f.out));
  out << "written " << f.out << ": " << built.model.num_variables() << " columns, "
      << built.model.num_constraints() << " rows\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct ReplayFlags {
  std::string mps;
  std::string solution;
};

int CmdReplay(const ReplayFlags& f, std::ostream& out) {
  MilpModel model;
  SolutionFile sol;
  try {
    model = ReadMps(fs::path(f.mps));
    sol = ReadSolutionFile(fs::path(f.solution), model);
  } catch (const FileFormatError& e) {
    throw DataError(e.what());
  }
  const auto violated = model.Violations(sol.values);
  out << "objective " << model.Objective(sol.values) << "\n";
  if (violated.empty()) {
    out << "feasible\n";
    return kExitOk;
  }
  for (int r : violated) {
    out << "violated " << (r < 0 ? std::string("variable bounds") : model.constraint(r).name)
        << "\n";
  }
  return kExitInvalidData;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Chemotherapy outpatient scheduling"};
  app.require_subcommand(1);

  GenerateFlags gen;
  auto* generate = app.add_subcommand("generate", "Write a synthetic instance");
  generate->add_option("--seed", gen.seed, "Random seed");
  generate->add_option("--patients", gen.patients, "Number of patients");
  generate->add_option("--out", gen.out, "Output instance file")->required();

  SolveFlags sol;
  auto* solve = app.add_subcommand("solve", "Run the lexicographic procedure");
  AddCommon(solve, sol.common);
  solve->add_option("--out", sol.out, "Output directory");
  solve->add_option("--stage", sol.stage, "Stop after stage 1, 2 or 3");
  solve->add_flag("--bound", sol.bound, "Also compute UB2 and report the chair gap");
  solve->add_flag("--final-warm-solve", sol.final_warm,
                  "Re-solve the chair model from the k-opt result");
  solve->add_option("--ub2-limit", sol.ub2_limit, "UB2 time limit in seconds")
      ->check(CLI::PositiveNumber);

  BoundFlags bnd;
  auto* bound = app.add_subcommand("bound", "Upper bounds on chair infusions");
  AddCommon(bound, bnd.common);
  bound->add_option("--v1", bnd.v1, "Treated patients target");
  bound->add_option("--v2", bnd.v2, "Per-day waiting caps, comma separated");
  bound->add_option("--ub1-limit", bnd.ub1_limit, "UB1 time limit in seconds")
      ->check(CLI::PositiveNumber);
  bound->add_option("--ub2-limit", bnd.ub2_limit, "UB2 time limit in seconds")
      ->check(CLI::PositiveNumber);
  bound->add_option("--out", bnd.out, "Optional JSON report");

  ValidateFlags val;
  auto* validate = app.add_subcommand("validate", "Check a schedule against an instance");
  validate->add_option("--instance", val.instance, "Instance JSON file")->required();
  validate->add_option("--schedule", val.schedule, "Schedule JSON file")->required();

  ExportFlags exp;
  auto* export_mps = app.add_subcommand("export-mps", "Write a formulation in MPS format");
  AddCommon(export_mps, exp.common);
  export_mps->add_option("--model", exp.model, "f1 | af1 | af2 | af3 | ub1 | ub2");
  export_mps->add_option("--v1", exp.v1, "Treated patients target");
  export_mps->add_option("--v2", exp.v2, "Per-day waiting caps, comma separated");
  export_mps->add_option("--out", exp.out, "Output MPS file")->required();

  ReplayFlags rep;
  auto* replay = app.add_subcommand("replay", "Evaluate a solution file against an MPS model");
  replay->add_option("--mps", rep.mps, "MPS file")->required();
  replay->add_option("--solution", rep.solution, "Solution file")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*generate) return CmdGenerate(gen, out);
    if (*solve) return CmdSolve(sol, out);
    if (*bound) return CmdBound(bnd, out);
    if (*validate) return CmdValidate(val, out);
    if (*export_mps) return CmdExportMps(exp, out);
    if (*replay) return CmdReplay(rep, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DataError& e) {
    err << "invalid data: " << e.what() << "\n";
    return kExitInvalidData;
  } catch (const BackendFailure& e) {
    err << "backend failure: " << e.what() << "\n";
    return kExitBackend;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitBackend;
  }
  return kExitUsage;
}

}  // namespace chemo
