#pragma once

#include <stdexcept>
#include <string>

namespace ellmem {

// Odd: P(0) = 0, sine-type. Even: P'(0) = 0, cosine-type.
enum class Kind { Odd, Even };

inline const char* kind_name(Kind k) { return k == Kind::Odd ? "odd" : "even"; }

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Rejected arguments (exit code 2 in the CLI).
struct DomainError : Error {
  using Error::Error;
};

// Numerical failures (exit code 3 in the CLI).
struct NumericError : Error {
  using Error::Error;
};

struct DivergenceError : NumericError {
  using NumericError::NumericError;
};

struct BracketError : NumericError {
  using NumericError::NumericError;
};

struct ConvergenceError : NumericError {
  using NumericError::NumericError;
};

void require_finite(double v, const char* what);

}  // namespace ellmem
