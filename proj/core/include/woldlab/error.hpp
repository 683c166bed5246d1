#pragma once

#include <stdexcept>
#include <string>

namespace woldlab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Set enumeration exceeded the configured vertex cap.
class ResourceLimitError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

/// A tree description violates a structural requirement (self-loop, two
/// parents, a leaf or root inside the declared region).
class TreeStructureError : public Error {
 public:
  using Error::Error;
};

/// A query left the region where a kernel or weight table is defined.
class OutOfRegionError : public Error {
 public:
  using Error::Error;
};

/// Numerical domain violation: nonpositive weight, degenerate norm.
class DomainError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace woldlab
