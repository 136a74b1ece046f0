#ifndef EPINARR_NUMFMT_HPP
#define EPINARR_NUMFMT_HPP

#include <string>

namespace epinarr {

/// Shortest decimal string that parses back to exactly the same double.
/// Fixed notation is used while the decimal exponent lies in [-4, 16),
/// scientific otherwise, so values like 100000.0 print as "100000" and
/// 0.0005 prints as "0.0005" rather than "5e-04". Integral values carry
/// no trailing ".0".
std::string format_double(double value);

/// format_double, but guaranteed to look like a real number: integral
/// results get a trailing ".0" (SBML attributes print 100000.0, not 100000).
std::string format_sbml_double(double value);

/// Locale-independent strtod over the full string. Returns false if the
/// string is not a complete floating-point literal.
bool parse_double(const std::string& text, double& out);

}  // namespace epinarr

#endif
