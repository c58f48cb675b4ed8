#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace biasaudit {

/// Coarse classification used by the CLI to pick an exit code.
enum class ErrorCategory {
  Usage,       // bad parameters or flags
  Data,        // malformed input, missing tokens, dimension mismatch
  Degenerate,  // numerically undefined score
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& what) : Error(ErrorCategory::Data, what) {}
};

/// A vector with zero Euclidean norm was passed where a direction is needed.
class DegenerateVectorError : public Error {
 public:
  explicit DegenerateVectorError(const std::string& what) : Error(ErrorCategory::Data, what) {}
};

class EmptyInputError : public Error {
 public:
  explicit EmptyInputError(const std::string& what) : Error(ErrorCategory::Data, what) {}
};

class InvalidParameterError : public Error {
 public:
  explicit InvalidParameterError(const std::string& what) : Error(ErrorCategory::Usage, what) {}
};

/// Input is well formed but the requested quantity is undefined on it
/// (all-zero PCA samples, identical pair members, ...).
class DegenerateInputError : public Error {
 public:
  explicit DegenerateInputError(const std::string& what)
      : Error(ErrorCategory::Degenerate, what) {}
};

/// A side condition of a closed-form construction does not hold.
class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& what) : Error(ErrorCategory::Degenerate, what) {}
};

/// The effect size denominator vanished: every target has the same
/// association difference. Carries the offending values.
class DegenerateDenominatorError : public Error {
 public:
  DegenerateDenominatorError(const std::string& what, std::vector<double> values)
      : Error(ErrorCategory::Degenerate, what), values_(std::move(values)) {}

  const std::vector<double>& values() const noexcept { return values_; }

 private:
  std::vector<double> values_;
};

class MissingTokenError : public Error {
 public:
  explicit MissingTokenError(const std::string& token)
      : Error(ErrorCategory::Data, "token not found in embeddings: '" + token + "'"),
        token_(token) {}

  const std::string& token() const noexcept { return token_; }

 private:
  std::string token_;
};

/// Malformed embedding or wordlist file. `line` is 1-based, 0 when unknown.
class LoadError : public Error {
 public:
  LoadError(const std::string& what, std::size_t line)
      : Error(ErrorCategory::Data,
              line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace biasaudit
