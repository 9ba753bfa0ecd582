#pragma once

#include <stdexcept>
#include <string>

namespace hatepipe {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller passed an argument outside the operation's domain.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Input data or configuration violates a documented invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A required file (stopwords, lexicon, embeddings, dataset) is missing or unreadable.
class ResourceError : public Error {
 public:
  using Error::Error;
};

// Malformed file contents.
class ParseError : public Error {
 public:
  using Error::Error;
};

class VersionError : public ParseError {
 public:
  using ParseError::ParseError;
};

// Feature width of the data does not match a fitted model.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Numerical failure during training (e.g. NaN loss).
class TrainingError : public Error {
 public:
  using Error::Error;
};

}  // namespace hatepipe
