#pragma once

#include <stdexcept>
#include <string>

namespace circlet {

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input files (CSV parse failures); message names the line.
struct format_error : error {
  using error::error;
};

// Structurally valid input that violates a metric-space invariant.
struct validation_error : error {
  using error::error;
};

// Caller passed an argument outside its documented range.
struct argument_error : error {
  using error::error;
};

// Raw-vector query against a source with no ambient geometry.
struct unsupported_query_error : error {
  using error::error;
};

// Query point lies outside every landmark ball.
struct not_covered_error : error {
  using error::error;
};

// No persistence pair satisfies max{birth, r_L} < death/2.
struct no_qualifying_class_error : error {
  using error::error;
};

// The centered-residue lift is not an integer cocycle for this prime.
struct lift_failure_error : error {
  using error::error;
};

// Iterative solver hit its iteration cap before reaching tolerance.
struct convergence_error : error {
  using error::error;
};

}  // namespace circlet
