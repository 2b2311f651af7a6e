#include "spou/report.hpp"

#include <cstdio>
#include <ostream>
#include <sstream>

namespace spou {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string to_keyvalue(const VerificationReport& r) {
  std::ostringstream os;
  os << "check = " << r.check_name << '\n';
  os << "max_deviation = " << fmt_double(r.max_deviation) << '\n';
  os << "argmax = [";
  for (size_t i = 0; i < r.argmax_point.size(); ++i)
    os << (i ? ", " : "") << fmt_double(r.argmax_point[i]);
  os << "]\n";
  os << "tolerance = " << fmt_double(r.tolerance) << '\n';
  os << "passed = " << (r.passed ? "true" : "false") << '\n';
  if (!r.route_notes.empty()) os << "route = " << r.route_notes << '\n';
  if (!r.grid_spec.empty()) os << "grid = " << r.grid_spec << '\n';
  os << "n_samples = " << r.n_samples << '\n';
  if (r.n_skipped) os << "n_skipped = " << r.n_skipped << '\n';
  os << "n_uncertified = " << r.n_uncertified << '\n';
  return os.str();
}

void write_samples_csv(std::ostream& os, const VerificationReport& r,
                       const std::string& value_column, bool with_n_terms, bool with_sq_sum) {
  const size_t d = r.rows.empty() ? 0 : r.rows.front().gamma.size();
  for (size_t i = 0; i < d; ++i) os << "gamma_" << i << ',';
  os << value_column << ",deviation";
  if (with_n_terms) os << ",n_terms";
  if (with_sq_sum) os << ",sq_sum";
  os << '\n';
  for (const auto& row : r.rows) {
    for (double g : row.gamma) os << fmt_double(g) << ',';
    os << fmt_double(row.sum) << ',' << fmt_double(row.deviation);
    if (with_n_terms) os << ',' << row.n_terms;
    if (with_sq_sum) os << ',' << fmt_double(row.sq_sum);
    os << '\n';
  }
}

}  // namespace spou
