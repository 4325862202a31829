#include "compass/trace.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace compass {

trace_record::trace_record()
    : F(std::numeric_limits<double>::quiet_NaN()),
      Gnorm(std::numeric_limits<double>::quiet_NaN()),
      potential(std::numeric_limits<double>::quiet_NaN()),
      bound_linear(std::numeric_limits<double>::quiet_NaN()),
      bound_sublinear(std::numeric_limits<double>::quiet_NaN()) {}

namespace {

void put(std::ostream& os, double v) {
  if (!std::isfinite(v)) return;  // empty field
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  os << buf;
}

}  // namespace

void write_trace(std::ostream& os, const std::vector<trace_record>& rows) {
  os << "# trace_v1\n";
  os << "k,F,Gnorm,potential,bound_linear,bound_sublinear,wall_time_ns\n";
  for (const trace_record& r : rows) {
    os << r.k << ',';
    put(os, r.F);
    os << ',';
    put(os, r.Gnorm);
    os << ',';
    put(os, r.potential);
    os << ',';
    put(os, r.bound_linear);
    os << ',';
    put(os, r.bound_sublinear);
    os << ',';
    if (r.wall_time_ns >= 0) os << r.wall_time_ns;
    os << '\n';
  }
}

void save_trace(const std::string& path, const std::vector<trace_record>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open trace file: " + path);
  write_trace(out, rows);
}

std::string trace_to_string(const std::vector<trace_record>& rows) {
  std::ostringstream ss;
  write_trace(ss, rows);
  return ss.str();
}

}  // namespace compass
