#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace acgd {

// Base for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// X-projection over FreeSpace with eta + alpha = 0.
class UnboundedSubproblem : public Error {
 public:
  using Error::Error;
};

class NonFiniteInput : public Error {
 public:
  using Error::Error;
};

class SpanViolation : public Error {
 public:
  using Error::Error;
};

class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

// The linearized constraints of a descent step admit no point of X; detected
// when the dual iterate norm passes the divergence cap.
class InfeasibleStep : public Error {
 public:
  using Error::Error;
};

// Dual ascent hit its iteration cap. Carries the best iterate seen so callers
// may decide whether it is usable.
class ToleranceNotReached : public Error {
 public:
  ToleranceNotReached(const std::string& what, std::vector<double> best_x,
                      std::vector<double> best_lambda, double best_residual)
      : Error(what),
        best_x(std::move(best_x)),
        best_lambda(std::move(best_lambda)),
        best_residual(best_residual) {}

  std::vector<double> best_x;
  std::vector<double> best_lambda;
  double best_residual;
};

void require_same_dim(std::size_t expected, std::size_t got, const char* what);

}  // namespace acgd
