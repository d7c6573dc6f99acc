#pragma once

#include <stdexcept>
#include <string>

namespace qsurvey {

// All library failures derive from Error so callers can catch one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// Operator kind precondition violated (e.g. non-Hermitian generator).
class KindError : public Error {
 public:
  using Error::Error;
};

class RepresentationError : public Error {
 public:
  using Error::Error;
};

class QuadratureError : public Error {
 public:
  using Error::Error;
};

// Fock cutoff too small for the requested accuracy.
class CutoffError : public Error {
 public:
  CutoffError(const std::string& what, int minimal_n_max)
      : Error(what), minimal_n_max_(minimal_n_max) {}
  explicit CutoffError(const std::string& what) : Error(what) {}

  /// Smallest n_max that would have satisfied the request, or -1 if unknown.
  int minimal_n_max() const noexcept { return minimal_n_max_; }

 private:
  int minimal_n_max_ = -1;
};

class CoverageError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

class IOError : public Error {
 public:
  using Error::Error;
};

}  // namespace qsurvey
