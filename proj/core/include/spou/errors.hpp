#pragma once

#include <stdexcept>
#include <string>

namespace spou {

// Invalid numeric input or a violated precondition (also used for refusals:
// the message names the precondition that failed).
struct input_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Parameter outside the supported range (order caps, index caps).
struct range_error : std::out_of_range {
  using std::out_of_range::out_of_range;
};

// Adaptive quadrature ran out of depth; carries the best estimate so callers
// can decide whether the error bound is acceptable.
struct quadrature_error : std::runtime_error {
  double best_estimate;
  double error_bound;
  quadrature_error(const std::string& msg, double best, double err)
      : std::runtime_error(msg), best_estimate(best), error_bound(err) {}
};

struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace spou
