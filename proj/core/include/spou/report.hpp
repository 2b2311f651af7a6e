#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace spou {

struct SampleRow {
  std::vector<double> gamma;
  double sum = 0.0;
  double deviation = 0.0;
  int n_terms = 0;
  double sq_sum = 0.0;
  bool certified = true;
};

struct VerificationReport {
  std::string check_name;
  double max_deviation = 0.0;
  std::vector<double> argmax_point;
  double tolerance = 0.0;
  bool passed = false;
  std::string route_notes;
  std::string grid_spec;
  size_t n_samples = 0;
  size_t n_skipped = 0;      // origin samples, noted and excluded
  size_t n_uncertified = 0;  // samples whose truncation lacked a certificate
  std::vector<SampleRow> rows;

  void finalize() { passed = max_deviation <= tolerance; }
};

// 17 significant digits: parses back to the identical double.
std::string fmt_double(double v);

std::string to_keyvalue(const VerificationReport& r);

// One row per sample: gamma components, the named value column, deviation,
// then n_terms and/or sq_sum.
void write_samples_csv(std::ostream& os, const VerificationReport& r,
                       const std::string& value_column, bool with_n_terms, bool with_sq_sum);

}  // namespace spou
