#pragma once

#include <stdexcept>
#include <string>

namespace steinrmt {

/// Raised when an input exceeds a configured degree cap.
class DegreeCapExceeded : public std::domain_error {
 public:
  DegreeCapExceeded(int degree, int cap)
      : std::domain_error("degree " + std::to_string(degree) +
                          " exceeds cap " + std::to_string(cap)),
        degree_(degree),
        cap_(cap) {}
  int degree() const noexcept { return degree_; }
  int cap() const noexcept { return cap_; }

 private:
  int degree_;
  int cap_;
};

/// Operands of a binary trace-polynomial operation use different scalings.
class ScaleMismatch : public std::invalid_argument {
 public:
  ScaleMismatch() : std::invalid_argument("trace polynomials use different scale modes") {}
};

/// The symbolic calculus and the Wick oracle exist only for the GUE.
class UnsupportedEnsemble : public std::invalid_argument {
 public:
  explicit UnsupportedEnsemble(const std::string& what)
      : std::invalid_argument(what) {}
};

class DimensionMismatch : public std::invalid_argument {
 public:
  explicit DimensionMismatch(const std::string& what)
      : std::invalid_argument(what) {}
};

class ParseError : public std::invalid_argument {
 public:
  explicit ParseError(const std::string& what) : std::invalid_argument(what) {}
};

/// Invalid experiment configuration (maps to CLI exit code 1).
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace steinrmt
