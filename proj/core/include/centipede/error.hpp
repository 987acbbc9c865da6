#pragma once

#include <stdexcept>
#include <string>

namespace centipede {

// Bad inputs: out-of-range parameters, malformed files, inconsistent
// datasets.  The CLI maps this to exit code 2.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Missing or unreadable files.  CLI exit code 1.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An iterative solver failed to reach tolerance.  Carries the best residual
// seen and the homotopy parameter reached.  CLI exit code 3.
struct ConvergenceError : std::runtime_error {
  double residual;
  double lambda_reached;
  ConvergenceError(const std::string& what, double res, double lam)
      : std::runtime_error(what), residual(res), lambda_reached(lam) {}
};

}  // namespace centipede
