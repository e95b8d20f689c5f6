#pragma once

#include <stdexcept>
#include <string>

namespace ctfb {

// Base of every error thrown by the core library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// |g_i(x,t)| fell below the plant's controllability floor.
class ControllabilityLoss : public Error {
 public:
  ControllabilityLoss(const std::string& what, double time)
      : Error(what), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

// A derivative or state component became NaN or infinite.
class NonFinite : public Error {
 public:
  NonFinite(const std::string& what, double time) : Error(what), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

// Malformed scenario or trace file. line() is 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// A well-formed value that violates a documented constraint.
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace ctfb
