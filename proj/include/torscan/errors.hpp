#pragma once

#include <stdexcept>
#include <string>

namespace torscan {

// Base class for every error thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DuplicateVertexInSimplex : Error {
  using Error::Error;
};

struct VertexIdOutOfRange : Error {
  using Error::Error;
};

// Facet-file parse failure; carries the 1-based line number.
struct SyntaxError : Error {
  int line;
  SyntaxError(int line_no, const std::string& what)
      : Error("line " + std::to_string(line_no) + ": " + what), line(line_no) {}
};

struct EmptyComplex : Error {
  using Error::Error;
};

struct UnsupportedSpace : Error {
  using Error::Error;
};

struct DimensionOutOfRange : Error {
  using Error::Error;
};

struct NotPrime : Error {
  using Error::Error;
};

struct NotSymmetric : Error {
  using Error::Error;
};

struct Overflow : Error {
  using Error::Error;
};

struct InvalidThreshold : Error {
  using Error::Error;
};

struct NormTooLarge : Error {
  using Error::Error;
};

struct ZeroVector : Error {
  using Error::Error;
};

// Scaled overlap landed within 1e-9 of a half-integer: the additive error
// budget was violated and rounding can no longer be trusted.
struct AmbiguousRounding : Error {
  using Error::Error;
};

struct NoiseBudgetExceeded : Error {
  using Error::Error;
};

struct EvenPrimeUnsupported : Error {
  using Error::Error;
};

struct OutsideValidityRegion : Error {
  using Error::Error;
};

struct UsageError : Error {
  using Error::Error;
};

}  // namespace torscan
