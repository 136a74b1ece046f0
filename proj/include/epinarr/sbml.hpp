#ifndef EPINARR_SBML_HPP
#define EPINARR_SBML_HPP

#include <string>
#include <vector>

#include "epinarr/expr.hpp"
#include "epinarr/model.hpp"
#include "epinarr/xml.hpp"

namespace epinarr {

/// Serializes a validated model to SBML Level 2 Version 3. Byte-stable:
/// the same model always produces identical bytes. Kinetic-law species
/// symbols are written as global ids; compartment sizes are written as
/// their evaluated numeric value. Throws ValidationFailed when the model
/// has validation errors.
std::string export_sbml(const Model& model);

/// Human-readable notes about information the SBML encoding cannot carry
/// (activator/inhibitor roles come back as generic modifiers). Empty when
/// the export round-trips losslessly.
std::vector<std::string> export_warnings(const Model& model);

/// Reads an SBML Level 2 document produced by export_sbml or by a
/// compatible tool. Local kinetic-law parameters are renamed to
/// "<reaction>_<name>" and hoisted into the global parameter list.
/// Throws XmlError, SchemaError, UnresolvedReference.
Model import_sbml(const std::string& xml);

/// Content-MathML encoding of an expression, with associative +/* chains
/// along the left spine flattened to n-ary apply forms.
std::string expr_to_mathml(const ExprPtr& expr);

/// Inverse of expr_to_mathml on the supported subset; n-ary plus/times
/// fold left-associatively. Accepts a fragment rooted at <math> or at an
/// operand element. Throws UnsupportedMathml for anything else.
ExprPtr mathml_to_expr(const std::string& xml);
ExprPtr mathml_to_expr(const XmlNode& node);

}  // namespace epinarr

#endif
