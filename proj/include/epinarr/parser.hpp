#ifndef EPINARR_PARSER_HPP
#define EPINARR_PARSER_HPP

#include <string>

#include "epinarr/errors.hpp"
#include "epinarr/expr.hpp"
#include "epinarr/model.hpp"

namespace epinarr {

/// Parses the textual Bio-PEPA dialect (see docs/grammar.md) into a Model.
/// Comments (// to end of line) and whitespace are insignificant; \n and
/// \r\n both end a line. Throws ParseError.
Model parse_model(const std::string& source);

/// Parses a standalone arithmetic expression. Precedence ^ > unary - >
/// * / > + -, ^ right-associative, the rest left-associative.
ExprPtr parse_expr(const std::string& source);

}  // namespace epinarr

#endif
