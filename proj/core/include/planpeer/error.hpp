#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace planpeer {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text. `line()` is 1-based, 0 when not applicable.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what, std::size_t line = 0, std::string raw = {})
      : Error(line ? what + " (line " + std::to_string(line) + ")" : what),
        line_(line),
        raw_(std::move(raw)) {}

  std::size_t line() const noexcept { return line_; }
  /// Unparsed source text, kept for audit.
  const std::string& raw() const noexcept { return raw_; }

 private:
  std::size_t line_;
  std::string raw_;
};

class EmptyDocumentError : public Error {
 public:
  using Error::Error;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class LookupError : public Error {
 public:
  using Error::Error;
};

class ConflictError : public Error {
 public:
  using Error::Error;
};

/// A remote or mock model provider failed. Carries the input indices that
/// could not be served, when the call was batched.
class ProviderError : public Error {
 public:
  explicit ProviderError(const std::string& what, std::vector<std::size_t> failed = {})
      : Error(what), failed_(std::move(failed)) {}

  const std::vector<std::size_t>& failed_indices() const noexcept { return failed_; }

 private:
  std::vector<std::size_t> failed_;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what + " (residual " + std::to_string(residual) + ")"), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class TaxonomyShapeError : public Error {
 public:
  using Error::Error;
};

class EmptyPeersError : public Error {
 public:
  using Error::Error;
};

/// Snapshot publication refused; `missing()` names each absent artifact.
class PublishError : public Error {
 public:
  explicit PublishError(std::vector<std::string> missing)
      : Error(describe(missing)), missing_(std::move(missing)) {}

  const std::vector<std::string>& missing() const noexcept { return missing_; }

 private:
  static std::string describe(const std::vector<std::string>& missing) {
    std::string s = "snapshot incomplete, missing:";
    for (const auto& m : missing) s += " " + m;
    return s;
  }

  std::vector<std::string> missing_;
};

}  // namespace planpeer
