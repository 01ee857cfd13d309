#ifndef CHEMO_ORACLE_H_
#define CHEMO_ORACLE_H_

#include <stdexcept>
#include <vector>

#include "chemo/instance.h"
#include "chemo/schedule.h"

namespace chemo {

// Lexicographic optimum of (max phi1, min phi2, max phi3) found by explicit
// enumeration of complete schedules (concrete rooms, chairs and beds).
struct LexicoOptimum {
  int v1 = 0;
  std::vector<int> v2;  // per day, of the returned schedule
  int phi3 = 0;
  CompleteSchedule schedule;
};

struct OracleLimits {
  int max_patients = 8;
  int max_slots = 16;
  int max_rooms = 2;
  int max_days = 3;
  int max_chairs = 4;
  int max_beds = 4;
};

class OracleSizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Throws OracleSizeError when the instance exceeds `limits`.
LexicoOptimum BruteForceLexico(const Instance& inst, const OracleLimits& limits = {});

}  // namespace chemo

#endif  // CHEMO_ORACLE_H_
