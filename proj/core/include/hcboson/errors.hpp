#pragma once

#include <stdexcept>
#include <string>

namespace hcb {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parameters lie outside the regime where the requested quantity exists
/// (e.g. t >= 0, where the gap equation has no non-trivial solution).
class InvalidRegime : public Error {
 public:
  using Error::Error;
};

/// A closed-form condition such as 2U < -t does not hold.
class ConditionViolated : public Error {
 public:
  using Error::Error;
};

/// Closed-form eigenvectors requested where the spectrum is degenerate.
class DegenerateSpectrum : public Error {
 public:
  using Error::Error;
};

/// The parameter point sits exactly on a phase boundary the analysis leaves open.
class DegenerateBoundary : public Error {
 public:
  using Error::Error;
};

/// Requested lattice exceeds the dense-diagonalization cap.
class DimensionCap : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace hcb
