#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace compass {

// One row of a run trace.  NaN marks a column that does not apply to the
// algorithm (or was not requested); it serializes as an empty field.
struct trace_record {
  int k = 0;
  double F = 0.0;
  double Gnorm = 0.0;
  double potential = 0.0;
  double bound_linear = 0.0;
  double bound_sublinear = 0.0;
  std::int64_t wall_time_ns = -1;  // negative serializes as empty

  trace_record();
};

// CSV, format tag comment first, then the fixed header
// k,F,Gnorm,potential,bound_linear,bound_sublinear,wall_time_ns.
// Doubles carry round-trip precision so reruns compare bytewise.
void write_trace(std::ostream& os, const std::vector<trace_record>& rows);
void save_trace(const std::string& path, const std::vector<trace_record>& rows);
std::string trace_to_string(const std::vector<trace_record>& rows);

}  // namespace compass
