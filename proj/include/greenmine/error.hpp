#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace greenmine {

// Base class for every failure the toolkit reports.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text. line is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class ProcessError : public Error {
 public:
  using Error::Error;
};

class UnknownRevisionError : public Error {
 public:
  explicit UnknownRevisionError(const std::string& revision)
      : Error("unknown revision: " + revision), revision_(revision) {}

  const std::string& revision() const { return revision_; }

 private:
  std::string revision_;
};

class EmptyCorpusError : public Error {
 public:
  using Error::Error;
};

class EmptyTextError : public Error {
 public:
  using Error::Error;
};

// Correlation or z-score requested on input with zero variance.
class UndefinedStatisticError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace greenmine
