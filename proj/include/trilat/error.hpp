#pragma once

#include <stdexcept>
#include <string>

namespace trilat {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A squared-distance tuple that no real point set realizes in the requested dimension.
class NotRealizable : public Error {
 public:
  using Error::Error;
};

// The realized point set has an affine span of dimension < d.
class Degenerate : public Error {
 public:
  using Error::Error;
};

class AnchorsDegenerate : public Error {
 public:
  using Error::Error;
};

class SearchBudgetExceeded : public Error {
 public:
  using Error::Error;
};

class ReductionFailure : public Error {
 public:
  using Error::Error;
};

class NoBaseFound : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace trilat
