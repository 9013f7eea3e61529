#pragma once

#include <stdexcept>
#include <string>

namespace ifem {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Newton projection onto the interface did not reach the tolerance.
class NoConvergence : public Error {
 public:
  using Error::Error;
};

/// The background grid is too coarse to resolve the interface.
class UnresolvedInterface : public Error {
 public:
  using Error::Error;
};

/// A triangle has non-interface vertices on both sides of the interface.
class AmbiguousElement : public Error {
 public:
  using Error::Error;
};

class DegenerateTriangle : public Error {
 public:
  using Error::Error;
};

/// Least-squares sampling set is not unisolvent for quadratics.
class RankDeficient : public Error {
 public:
  using Error::Error;
};

/// Patch growth ran out of mesh before reaching a unisolvent sampling set.
class PatchExhausted : public Error {
 public:
  using Error::Error;
};

/// Conjugate gradients hit the iteration cap.
class MaxIterations : public Error {
 public:
  using Error::Error;
};

class DivisionByZero : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace ifem
