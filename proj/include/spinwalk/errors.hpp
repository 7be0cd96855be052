#pragma once

#include <stdexcept>
#include <string>

namespace spinwalk {

// Bad user input (config file, CLI overrides, inconsistent parameters).
// The CLI maps this to exit code 2.
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Valid syntax but a parameter regime the numerics cannot handle.
// The CLI maps this (and all derived types) to exit code 3.
struct regime_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A denominator or linear system that the coupling choice makes singular.
struct singular_parameter_error : regime_error {
  using regime_error::regime_error;
};

// A parameter combination with no implemented closed form.
struct unsupported_parameter_error : regime_error {
  using regime_error::regime_error;
};

// Transfer-matrix machinery asked for outside the real-eigenvalue regime.
struct bulk_regime_error : regime_error {
  using regime_error::regime_error;
};

// Exponential-tail regression rejected the data.
struct fit_quality_error : regime_error {
  using regime_error::regime_error;
};

// A requested dense problem exceeds the configured dimension cap.
struct size_error : regime_error {
  using regime_error::regime_error;
};

}  // namespace spinwalk
