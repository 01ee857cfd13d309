#include "chemo/mps.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <unordered_map>

namespace chemo {
namespace {

constexpr const char* kObjectiveRow = "OBJ";

// Pads `field` to `width` but never truncates; always leaves a separator.
void Field(std::ostream& out, const std::string& field, int width) {
  out << field;
  const int pad = width - static_cast<int>(field.size());
  out << std::string(std::max(pad, 1), ' ');
}

void DataLine(std::ostream& out, const std::string& code, const std::string& name1,
              const std::string& name2, std::int64_t value) {
  // Columns 2-3 code, 5-12 name, 15-22 name, 25-36 number.
  out << ' ';
  Field(out, code, 3);
  Field(out, name1, 10);
  Field(out, name2, 10);
  out << value << '\n';
}

char RowType(Relation relation) {
  switch (relation) {
    case Relation::kLessEqual:
      return 'L';
    case Relation::kEqual:
      return 'E';
    case Relation::kGreaterEqual:
      return 'G';
  }
  return 'L';
}

std::vector<std::string> Tokens(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

// Parses an integer written either plainly or as an integral decimal.
std::optional<std::int64_t> ParseIntegral(const std::string& text) {
  std::int64_t value = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec == std::errc() && ptr == end) return value;
  double d = 0;
  auto [dptr, dec] = std::from_chars(text.data(), end, d);
  if (dec != std::errc() || dptr != end || !std::isfinite(d) || std::floor(d) != d ||
      std::abs(d) > 9e15) {
    return std::nullopt;
  }
  return static_cast<std::int64_t>(d);
}

}  // namespace

void WriteMps(const MilpModel& model, std::ostream& out) {
  const auto& vars = model.variables();
  const auto& rows = model.constraints();
  out << "NAME          CHEMO\n";
  out << "OBJSENSE\n    " << (model.sense() == Sense::kMaximize ? "MAX" : "MIN") << '\n';
  out << "ROWS\n";
  out << " N  " << kObjectiveRow << '\n';
  for (const Constraint& c : rows) out << ' ' << RowType(c.relation) << "  " << c.name << '\n';

  // Column-major coefficient lists.
  std::vector<std::vector<std::pair<int, std::int64_t>>> columns(vars.size());
  for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
    for (const Term& t : rows[r].terms) columns[t.var].push_back({r, t.coef});
  }
  std::vector<std::int64_t> cost(vars.size(), 0);
  for (const Term& t : model.objective()) cost[t.var] = t.coef;

  out << "COLUMNS\n";
  out << "    MARKER                 'MARKER'                 'INTORG'\n";
  for (int j = 0; j < static_cast<int>(vars.size()); ++j) {
    bool wrote = false;
    if (cost[j] != 0) {
      DataLine(out, "", vars[j].name, kObjectiveRow, cost[j]);
      wrote = true;
    }
    for (const auto& [r, a] : columns[j]) {
      DataLine(out, "", vars[j].name, rows[r].name, a);
      wrote = true;
    }
    if (!wrote) DataLine(out, "", vars[j].name, kObjectiveRow, 0);
  }
  out << "    MARKER                 'MARKER'                 'INTEND'\n";
  out << "RHS\n";
  for (const Constraint& c : rows) {
    if (c.rhs != 0) DataLine(out, "", "RHS", c.name, c.rhs);
  }
  out << "BOUNDS\n";
  for (const Variable& v : vars) {
    if (v.lower != 0) DataLine(out, "LO", "BND", v.name, v.lower);
    DataLine(out, "UP", "BND", v.name, v.upper);
  }
  out << "ENDATA\n";
}

void WriteMps(const MilpModel& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  WriteMps(model, out);
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

MilpModel ReadMps(std::istream& in) {
  enum class Section { kNone, kObjSense, kRows, kColumns, kRhs, kBounds, kEnd };
  Section section = Section::kNone;
  Sense sense = Sense::kMinimize;
  std::string objective_name;
  std::vector<std::pair<std::string, Relation>> row_defs;
  std::unordered_map<std::string, int> row_index;
  std::vector<std::string> col_names;
  std::unordered_map<std::string, int> col_index;
  std::vector<std::vector<Term>> row_terms;
  std::vector<Term> objective;
  std::vector<std::int64_t> rhs;
  std::vector<std::int64_t> lower, upper;
  std::vector<bool> upper_set;
  std::vector<bool> integer_col;
  bool in_integer_block = false;

  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string& what) { throw FileFormatError(what, line_no); };
  auto number = [&](const std::string& text) {
    auto v = ParseIntegral(text);
    if (!v) fail("non-integral number '" + text + "'");
    return *v;
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '*') continue;
    const auto tok = Tokens(line);
    if (tok.empty()) continue;
    if (line[0] != ' ' && line[0] != '\t') {
      const std::string& head = tok[0];
      if (head == "NAME") section = Section::kNone;
      else if (head == "OBJSENSE") {
        section = Section::kObjSense;
        if (tok.size() > 1) sense = tok[1] == "MAX" ? Sense::kMaximize : Sense::kMinimize;
      } else if (head == "ROWS") section = Section::kRows;
      else if (head == "COLUMNS") section = Section::kColumns;
      else if (head == "RHS") section = Section::kRhs;
      else if (head == "BOUNDS") section = Section::kBounds;
      else if (head == "ENDATA") section = Section::kEnd;
      else fail("unknown section " + head);
      continue;
    }
    switch (section) {
      case Section::kObjSense:
        if (tok[0] == "MAX" || tok[0] == "MAXIMIZE") sense = Sense::kMaximize;
        else if (tok[0] == "MIN" || tok[0] == "MINIMIZE") sense = Sense::kMinimize;
        else fail("bad OBJSENSE " + tok[0]);
        break;
      case Section::kRows: {
        if (tok.size() != 2) fail("ROWS line needs type and name");
        if (tok[0] == "N") {
          if (objective_name.empty()) objective_name = tok[1];
          break;
        }
        Relation rel;
        if (tok[0] == "L") rel = Relation::kLessEqual;
        else if (tok[0] == "E") rel = Relation::kEqual;
        else if (tok[0] == "G") rel = Relation::kGreaterEqual;
        else fail("bad row type " + tok[0]);
        if (!row_index.emplace(tok[1], static_cast<int>(row_defs.size())).second) {
          fail("duplicate row " + tok[1]);
        }
        row_defs.push_back({tok[1], rel});
        row_terms.emplace_back();
        rhs.push_back(0);
        break;
      }
      case Section::kColumns: {
        if (tok.size() >= 3 && tok[1] == "'MARKER'") {
          if (tok[2] == "'INTORG'") in_integer_block = true;
          else if (tok[2] == "'INTEND'") in_integer_block = false;
          else fail("bad marker " + tok[2]);
          break;
        }
        if (tok.size() != 3 && tok.size() != 5) fail("COLUMNS line needs 3 or 5 fields");
        auto [it, fresh] = col_index.emplace(tok[0], static_cast<int>(col_names.size()));
        if (fresh) {
          col_names.push_back(tok[0]);
          lower.push_back(0);
          upper.push_back(0);
          upper_set.push_back(false);
          integer_col.push_back(in_integer_block);
        }
        const int col = it->second;
        for (std::size_t f = 1; f + 1 < tok.size(); f += 2) {
          const std::int64_t value = number(tok[f + 1]);
          if (tok[f] == objective_name) {
            if (value != 0) objective.push_back({col, value});
            continue;
          }
          auto row = row_index.find(tok[f]);
          if (row == row_index.end()) fail("unknown row " + tok[f]);
          if (value != 0) row_terms[row->second].push_back({col, value});
        }
        break;
      }
      case Section::kRhs: {
        if (tok.size() != 3 && tok.size() != 5) fail("RHS line needs 3 or 5 fields");
        for (std::size_t f = 1; f + 1 < tok.size(); f += 2) {
          if (tok[f] == objective_name) continue;
          auto row = row_index.find(tok[f]);
          if (row == row_index.end()) fail("unknown row " + tok[f]);
          rhs[row->second] = number(tok[f + 1]);
        }
        break;
      }
      case Section::kBounds: {
        if (tok.size() < 3) fail("BOUNDS line too short");
        auto col = col_index.find(tok[2]);
        if (col == col_index.end()) fail("unknown column " + tok[2]);
        const int j = col->second;
        if (tok[0] == "BV") {
          lower[j] = 0;
          upper[j] = 1;
          upper_set[j] = true;
          break;
        }
        if (tok.size() != 4) fail("bound needs a value");
        const std::int64_t value = number(tok[3]);
        if (tok[0] == "UP") {
          upper[j] = value;
          upper_set[j] = true;
        } else if (tok[0] == "LO") {
          lower[j] = value;
        } else if (tok[0] == "FX") {
          lower[j] = upper[j] = value;
          upper_set[j] = true;
        } else {
          fail("unsupported bound type " + tok[0]);
        }
        break;
      }
      case Section::kNone:
      case Section::kEnd:
        fail("data outside a section");
    }
  }
  if (section != Section::kEnd) throw FileFormatError("missing ENDATA", line_no);

  MilpModel model;
  for (std::size_t j = 0; j < col_names.size(); ++j) {
    if (!upper_set[j]) {
      if (!integer_col[j]) {
        throw FileFormatError("column " + col_names[j] + " is continuous or unbounded", 0);
      }
      upper[j] = 1;  // integer marker without bounds defaults to binary
    }
    model.AddInteger(col_names[j], lower[j], upper[j]);
  }
  for (std::size_t r = 0; r < row_defs.size(); ++r) {
    model.AddConstraint(row_defs[r].first, std::move(row_terms[r]), row_defs[r].second, rhs[r]);
  }
  model.SetObjective(sense, std::move(objective));
  return model;
}

MilpModel ReadMps(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return ReadMps(in);
}

SolutionFile ReadSolutionFile(std::istream& in, const MilpModel& model) {
  SolutionFile out;
  out.values.resize(model.num_variables());
  for (int j = 0; j < model.num_variables(); ++j) out.values[j] = model.variable(j).lower;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) {
      const auto meta = Tokens(line.substr(hash + 1));
      if (meta.size() == 2) {
        try {
          if (meta[0] == "status") out.status = meta[1];
          else if (meta[0] == "objective") out.objective = std::stod(meta[1]);
          else if (meta[0] == "bound") out.bound = std::stod(meta[1]);
        } catch (const std::exception&) {
          throw FileFormatError("bad metadata value '" + meta[1] + "'", line_no);
        }
      }
      line.resize(hash);
    }
    const auto tok = Tokens(line);
    if (tok.empty()) continue;
    if (tok.size() != 2) throw FileFormatError("expected 'name value'", line_no);
    const auto var = model.FindVariable(tok[0]);
    if (!var) continue;
    const auto value = ParseIntegral(tok[1]);
    if (!value) {
      throw FileFormatError("non-integral value '" + tok[1] + "' for " + tok[0], line_no);
    }
    const Variable& v = model.variable(*var);
    if (*value < v.lower || *value > v.upper) {
      throw FileFormatError("value " + tok[1] + " outside the domain of " + tok[0], line_no);
    }
    out.values[*var] = *value;
  }
  return out;
}

SolutionFile ReadSolutionFile(const std::filesystem::path& path, const MilpModel& model) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return ReadSolutionFile(in, model);
}

std::vector<std::int64_t> ReadSolution(const std::filesystem::path& path,
                                       const MilpModel& model) {
  return ReadSolutionFile(path, model).values;
}

void WriteSolution(const MilpModel& model, const std::vector<std::int64_t>& values,
                   std::ostream& out) {
  for (int j = 0; j < model.num_variables(); ++j) {
    out << model.variable(j).name << ' ' << values[j] << '\n';
  }
}

}  // namespace chemo
