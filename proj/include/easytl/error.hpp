#pragma once

#include <stdexcept>
#include <string>

namespace easytl {

// Base of every error thrown by the library. Callers that only care about
// "something went wrong" catch this; the CLI dispatches on the subclasses.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInputError : public Error {
 public:
  using Error::Error;
};

// The coverage constraints cannot be met (fewer targets than classes).
class InfeasibleError : public Error {
 public:
  InfeasibleError(const std::string& what, std::size_t num_targets,
                  std::size_t num_classes)
      : Error(what), num_targets_(num_targets), num_classes_(num_classes) {}

  std::size_t num_targets() const { return num_targets_; }
  std::size_t num_classes() const { return num_classes_; }

 private:
  std::size_t num_targets_;
  std::size_t num_classes_;
};

class MissingClassError : public Error {
 public:
  MissingClassError(const std::string& what, int missing_class)
      : Error(what), missing_class_(missing_class) {}

  int missing_class() const { return missing_class_; }

 private:
  int missing_class_;
};

// An object was used in a state that does not permit the call.
class StateError : public Error {
 public:
  using Error::Error;
};

class CapacityError : public Error {
 public:
  using Error::Error;
};

// Malformed input file. line and column are 1-based; 0 means "not applicable".
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0,
             std::size_t column = 0)
      : Error(what), line_(line), column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace easytl
