#pragma once

#include <stdexcept>
#include <string>

namespace slicewalk {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A precondition on an argument does not hold.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A retry budget (rejection sampling, greedy restarts, iteration cap) ran out.
class BudgetExhausted : public Error {
 public:
  using Error::Error;
};

// An enumeration or dense-size cap would be exceeded.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

// A face has no extension to a facet, or a link has no usable vertices.
class EmptyLink : public Error {
 public:
  using Error::Error;
};

// A numerical routine did not converge.
class NotConverged : public Error {
 public:
  using Error::Error;
};

}  // namespace slicewalk
