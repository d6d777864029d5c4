#pragma once

#include <stdexcept>
#include <string>

namespace qstoch {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shapes or dimensions of the operands do not fit together.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A value violates the invariants of its type (Hermiticity, trace, positivity, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A matrix that must be invertible (or positive definite) is not.
class SingularityError : public Error {
 public:
  using Error::Error;
};

/// A catalog constructor was handed inputs that do not produce the requested family.
class ConstructionError : public Error {
 public:
  using Error::Error;
};

/// Randomized generation gave up after its retry budget.
class GenerationError : public Error {
 public:
  using Error::Error;
};

/// Star composition across different POVM families, or an F_T with the wrong T.
class CompositionError : public Error {
 public:
  using Error::Error;
};

/// Adjoint requested for a channel that is not unital or not square.
class AdjointUndefinedError : public Error {
 public:
  using Error::Error;
};

/// Reconstruction from a nonminimal family without opting into the generalized inverse.
class AmbiguityError : public Error {
 public:
  using Error::Error;
};

/// Quasi-POVM extraction from a map that is not affine on density matrices.
class ExtractionError : public Error {
 public:
  using Error::Error;
};

/// A JSON document does not match the expected schema. `path()` points at the offending node.
class SchemaError : public Error {
 public:
  SchemaError(std::string path, const std::string& what)
      : Error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace qstoch
