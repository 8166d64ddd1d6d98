#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace xgr {

// Every error raised by the library derives from Error. The category decides
// the process exit code used by the command-line tool.
enum class ErrorCategory {
  kUsage = 1,
  kParse = 2,
  kPlanner = 3,
  kEvaluation = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message)
      : std::runtime_error(message), category_(category) {}

  ErrorCategory category() const { return category_; }

 private:
  ErrorCategory category_;
};

// Malformed input text. Line and column are 1-based; 0 means unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line = 0,
             std::size_t column = 0);

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

  // The same error with "<file>: " in front of the message.
  ParseError InFile(const std::string& file) const;

 private:
  struct Preformatted {};
  ParseError(Preformatted, const std::string& text, std::size_t line, std::size_t column)
      : Error(ErrorCategory::kParse, text), line_(line), column_(column) {}

  std::size_t line_;
  std::size_t column_;
};

// A fact, state or action that belongs to a different fact universe.
class DomainMismatchError : public Error {
 public:
  explicit DomainMismatchError(const std::string& message)
      : Error(ErrorCategory::kUsage, message) {}
};

class NotApplicableError : public Error {
 public:
  explicit NotApplicableError(const std::string& message)
      : Error(ErrorCategory::kUsage, message) {}
};

class PlannerError : public Error {
 public:
  explicit PlannerError(const std::string& message)
      : Error(ErrorCategory::kPlanner, message) {}
};

class UnsolvableError : public PlannerError {
 public:
  using PlannerError::PlannerError;
};

class BudgetExhaustedError : public PlannerError {
 public:
  using PlannerError::PlannerError;
};

// A why/why-not question asked about a goal outside the relevant partition.
class QuestionNotApplicableError : public Error {
 public:
  explicit QuestionNotApplicableError(const std::string& message)
      : Error(ErrorCategory::kUsage, message) {}
};

class EvaluationError : public Error {
 public:
  explicit EvaluationError(const std::string& message)
      : Error(ErrorCategory::kEvaluation, message) {}
};

class InvalidArgumentError : public Error {
 public:
  explicit InvalidArgumentError(const std::string& message)
      : Error(ErrorCategory::kUsage, message) {}
};

}  // namespace xgr
