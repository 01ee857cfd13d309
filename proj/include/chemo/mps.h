#ifndef CHEMO_MPS_H_
#define CHEMO_MPS_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "chemo/model.h"

namespace chemo {

class FileFormatError : public std::runtime_error {
 public:
  FileFormatError(const std::string& what, int line)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Fixed-format MPS. Names keep their full length; fields are padded to the
// classic column positions and always separated by whitespace, so readers
// accepting free-format MPS parse the output too. Integer variables sit
// between MARKER INTORG/INTEND lines and carry explicit bounds.
void WriteMps(const MilpModel& model, std::ostream& out);
void WriteMps(const MilpModel& model, const std::filesystem::path& path);

// Reads what WriteMps produces (and ordinary integer-coefficient MPS).
// Non-integral numbers are rejected.
MilpModel ReadMps(std::istream& in);
MilpModel ReadMps(const std::filesystem::path& path);

struct SolutionFile {
  std::vector<std::int64_t> values;  // indexed like the model's variables
  std::optional<std::string> status;
  std::optional<double> objective;
  std::optional<double> bound;
};

// "name value" lines; '#' starts a comment, and "# status|objective|bound X"
// comments carry solver metadata. Unknown names are ignored; variables not
// mentioned take their lower bound. Binary values outside {0,1} and
// non-integral values for integer variables are errors.
SolutionFile ReadSolutionFile(std::istream& in, const MilpModel& model);
SolutionFile ReadSolutionFile(const std::filesystem::path& path, const MilpModel& model);
std::vector<std::int64_t> ReadSolution(const std::filesystem::path& path, const MilpModel& model);

void WriteSolution(const MilpModel& model, const std::vector<std::int64_t>& values,
                   std::ostream& out);

}  // namespace chemo

#endif  // CHEMO_MPS_H_
