#pragma once

#include <stdexcept>
#include <string>

namespace carlitz {

/// Base class of every error raised by the library. `code()` is a stable
/// machine-readable reason string (used verbatim in CLI JSON output).
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

/// Mismatched field configurations, out-of-range indices, bad arguments.
class ParameterError : public Error {
 public:
  explicit ParameterError(const std::string& what) : Error("parameter", what) {}
};

/// A value is indistinguishable from zero at its tracked precision.
class PrecisionError : public Error {
 public:
  explicit PrecisionError(const std::string& what) : Error("precision", what) {}
};

/// A mathematical refusal: inadmissible parameters, violated side conditions,
/// inconsistent data. The code names the reason.
class RefusalError : public Error {
 public:
  RefusalError(std::string code, const std::string& what) : Error(std::move(code), what) {}
};

/// Malformed text input. `begin`/`end` is the offending source span.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& what, std::size_t begin, std::size_t end)
      : Error("syntax", what + " at " + std::to_string(begin) + ".." + std::to_string(end)),
        begin_(begin),
        end_(end) {}
  std::size_t begin() const noexcept { return begin_; }
  std::size_t end() const noexcept { return end_; }

 private:
  std::size_t begin_;
  std::size_t end_;
};

}  // namespace carlitz
