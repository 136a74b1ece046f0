#ifndef EPINARR_ERRORS_HPP
#define EPINARR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace epinarr {

/// Base of every error this library throws on purpose.
struct ToolError : std::runtime_error {
  explicit ToolError(const std::string& what) : std::runtime_error(what) {}
};

/// Syntax error in Bio-PEPA text. line/column are 1-based and point at the
/// start of the offending token (or just past the end of input).
struct ParseError : ToolError {
  int line;
  int column;
  std::string expected;  // may be empty

  ParseError(int line, int column, const std::string& message,
             std::string expected = {})
      : ToolError("parse error at " + std::to_string(line) + ":" +
                  std::to_string(column) + ": " + message +
                  (expected.empty() ? "" : " (expected " + expected + ")")),
        line(line),
        column(column),
        expected(std::move(expected)) {}
};

/// Malformed XML.
struct XmlError : ToolError {
  int line;
  int column;

  XmlError(int line, int column, const std::string& message)
      : ToolError("XML error at " + std::to_string(line) + ":" +
                  std::to_string(column) + ": " + message),
        line(line),
        column(column) {}
};

/// Well-formed XML that does not match the expected SBML shape. path is an
/// XPath-like locator of the offending node.
struct SchemaError : ToolError {
  std::string path;

  SchemaError(std::string path_, const std::string& message)
      : ToolError("schema error at " + path_ + ": " + message),
        path(std::move(path_)) {}
};

/// A reference inside an SBML document that does not resolve.
struct UnresolvedReference : ToolError {
  std::string name;

  explicit UnresolvedReference(std::string name_, const std::string& context = {})
      : ToolError("unresolved reference \"" + name_ + "\"" +
                  (context.empty() ? "" : " (" + context + ")")),
        name(std::move(name_)) {}
};

/// MathML element outside the supported content subset.
struct UnsupportedMathml : ToolError {
  std::string element;

  explicit UnsupportedMathml(std::string element_)
      : ToolError("unsupported MathML element <" + element_ + ">"),
        element(std::move(element_)) {}
};

/// Expression evaluation failures.
struct EvalError : ToolError {
  using ToolError::ToolError;
};

struct UnboundSymbol : EvalError {
  std::string name;

  explicit UnboundSymbol(std::string name_)
      : EvalError("unbound symbol \"" + name_ + "\""), name(std::move(name_)) {}
};

struct DivisionByZero : EvalError {
  DivisionByZero() : EvalError("division by zero") {}
};

struct NonFiniteResult : EvalError {
  NonFiniteResult() : EvalError("expression result is not finite") {}
};

/// A prefix action with no functional rate behind it.
struct UnknownAction : ToolError {
  std::string action;

  explicit UnknownAction(std::string action_)
      : ToolError("action \"" + action_ + "\" has no functional rate"),
        action(std::move(action_)) {}
};

/// An operation whose precondition is a clean validation report was handed
/// a model with validation errors.
struct ValidationFailed : ToolError {
  explicit ValidationFailed(const std::string& message)
      : ToolError("validation failed: " + message) {}
};

/// ODE state left the representable range.
struct NumericalBlowup : ToolError {
  double time;

  explicit NumericalBlowup(double t, const std::string& detail)
      : ToolError("numerical blowup at t=" + std::to_string(t) + ": " + detail),
        time(t) {}
};

/// SSA requires integer initial amounts.
struct NonIntegerInitialAmount : ToolError {
  std::string species;

  explicit NonIntegerInitialAmount(std::string species_)
      : ToolError("species \"" + species_ +
                  "\" has a non-integer initial amount"),
        species(std::move(species_)) {}
};

/// A simulation configuration that violates its own invariants
/// (dt <= outputEvery <= tEnd and friends).
struct ConfigError : ToolError {
  using ToolError::ToolError;
};

/// File system failure, with the path that failed.
struct IoError : ToolError {
  std::string path;

  IoError(std::string path_, const std::string& message)
      : ToolError(path_ + ": " + message), path(std::move(path_)) {}
};

}  // namespace epinarr

#endif
