#pragma once

#include <stdexcept>
#include <string>

namespace hypgeo {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad ids, duplicate edges, non-positive lengths, bad parameters.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A pair of vertices has no connecting path.
class DisconnectedError : public Error {
 public:
  DisconnectedError(std::string from, std::string to)
      : Error("graph is disconnected: no path from '" + from + "' to '" + to + "'"),
        from_(std::move(from)),
        to_(std::move(to)) {}

  const std::string& from() const { return from_; }
  const std::string& to() const { return to_; }

 private:
  std::string from_;
  std::string to_;
};

/// An operation needs a boundary but the space has none.
class CompleteSpaceError : public Error {
 public:
  CompleteSpaceError() : Error("space is complete") {}
};

/// Tail values along a marked ray did not settle within the allowed width.
class RayTooShallow : public Error {
 public:
  RayTooShallow(const std::string& ray, double width, double allowed, std::size_t suggested_depth)
      : Error("ray too shallow: '" + ray + "' tail oscillates by " + std::to_string(width) +
              " (allowed " + std::to_string(allowed) + "); suggested depth >= " +
              std::to_string(suggested_depth)),
        suggested_depth_(suggested_depth) {}

  std::size_t suggested_depth() const { return suggested_depth_; }

 private:
  std::size_t suggested_depth_;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace hypgeo
