#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fsv {

/// Byte range into an input text; every parse diagnostic carries one.
struct SourceSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An operation table indexes outside the carrier, or has the wrong shape.
class MalformedTables : public Error {
 public:
  using Error::Error;
};

/// Elements of two different algebras were combined in one operation.
class MixedAlgebras : public Error {
 public:
  using Error::Error;
};

class UnknownElement : public Error {
 public:
  using Error::Error;
};

/// Projected universe size exceeds the configured ceiling.
class UniverseTooLarge : public Error {
 public:
  using Error::Error;
};

/// A negation assignment violates the admissibility constraints.
class InvalidNegationChoice : public Error {
 public:
  using Error::Error;
};

/// The requested negation policy cannot run on the given structure.
class PolicyInadmissible : public Error {
 public:
  using Error::Error;
};

/// Structure fails its defining conditions and may not enter the evaluator.
class InvalidStructure : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::string message, SourceSpan span, std::string expected = {})
      : Error(std::move(message)), span_(span), expected_(std::move(expected)) {}
  SourceSpan span() const { return span_; }
  const std::string& expected() const { return expected_; }

 private:
  SourceSpan span_;
  std::string expected_;
};

/// A variable is unbound at an evaluation site.
class ScopeError : public Error {
 public:
  ScopeError(std::string message, SourceSpan span) : Error(std::move(message)), span_(span) {}
  SourceSpan span() const { return span_; }

 private:
  SourceSpan span_;
};

}  // namespace fsv
