#pragma once

#include <stdexcept>
#include <string>

namespace ivory {

/// Base class for all domain errors raised by the library.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct DimensionMismatch : Error {
  using Error::Error;
};
struct DegenerateBasis : Error {
  using Error::Error;
};
struct NotInvariant : Error {
  using Error::Error;
};
struct SqrtDomain : Error {
  using Error::Error;
};
struct IsotropicPoint : Error {
  using Error::Error;
};
struct SingularQuadric : Error {
  using Error::Error;
};
struct ZeroGradient : Error {
  using Error::Error;
};
struct UnsupportedDimension : Error {
  using Error::Error;
};
struct SingularParameter : Error {
  using Error::Error;
};
struct NotAnIntersectionPoint : Error {
  using Error::Error;
};
struct IdenticalQuadrics : Error {
  using Error::Error;
};
struct DegenerateInput : Error {
  using Error::Error;
};
struct NotPQuadric : Error {
  using Error::Error;
};
struct OutOfDomain : Error {
  using Error::Error;
};
struct SingularForm : Error {
  using Error::Error;
};
struct NotOnQuadric : Error {
  using Error::Error;
};
struct NotOnBothQuadrics : Error {
  using Error::Error;
};
struct ChartFailure : Error {
  using Error::Error;
};
struct DegenerateParameter : Error {
  using Error::Error;
};
struct ConfigError : Error {
  using Error::Error;
};
struct IOFailure : Error {
  using Error::Error;
};

}  // namespace ivory
