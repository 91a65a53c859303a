#pragma once

#include <stdexcept>
#include <string>

namespace graphdim {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite data or a malformed argument to a numeric kernel.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A parameter outside its documented domain (K too large, alpha out of range, ...).
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// All points of a neighborhood coincide, so no chart can be built.
class DegenerateNeighborhood : public Error {
 public:
  using Error::Error;
};

/// No neighborhood produced a usable local estimate.
class EstimationFailed : public Error {
 public:
  using Error::Error;
};

/// Unsupported manifold kind / dimension combination.
class InvalidSpec : public Error {
 public:
  using Error::Error;
};

/// Malformed input file; the message carries the row/column location.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// File system failure; the message carries the path.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace graphdim
