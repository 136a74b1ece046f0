#include "epinarr/render.hpp"

#include "epinarr/numfmt.hpp"

namespace epinarr {

namespace {

const char* role_token(Role role) {
  switch (role) {
    case Role::Reactant: return "<<";
    case Role::Product: return ">>";
    case Role::Activator: return "(+)";
    case Role::Inhibitor: return "(-)";
    case Role::GenericModifier: return "(.)";
  }
  return "?";
}

}  // namespace

std::string render_model(const Model& model) {
  std::string out;

  out += "model " + model.name + ";\n";

  if (!model.locations.empty()) out += "\n";
  for (const auto& loc : model.locations) {
    out += "location " + loc.name;
    if (loc.parent) out += " in " + *loc.parent;
    out += " : size = " + expr_to_infix(loc.size) + ", type = ";
    out += loc.kind == LocationKind::Compartment ? "compartment" : "membrane";
    out += ";\n";
  }

  if (!model.parameters.empty()) out += "\n";
  for (const auto& p : model.parameters)
    out += p.name + " = " + format_double(p.value) + ";\n";

  if (!model.functionalRates.empty()) out += "\n";
  for (const auto& r : model.functionalRates)
    out += r.action + " = " + expr_to_infix(r.law) + ";\n";

  if (!model.speciesComponents.empty()) out += "\n";
  for (const auto& comp : model.speciesComponents) {
    out += comp.name + " =";
    if (comp.prefixes.empty()) out += " ()";
    bool first = true;
    for (const auto& p : comp.prefixes) {
      out += first ? " " : " + ";
      first = false;
      out += "(" + p.action + "," + std::to_string(p.stoichiometry) + ") ";
      out += role_token(p.role);
      out += " " + comp.name;
    }
    out += ";\n";
  }

  if (!model.events.empty()) out += "\n";
  for (const auto& ev : model.events) {
    out += "event " + ev.name + " at " + format_double(ev.triggerTime) + " { ";
    bool first = true;
    for (const auto& a : ev.assignments) {
      if (!first) out += ", ";
      first = false;
      out += a.target + " = " + expr_to_infix(a.value);
    }
    out += " }\n";
  }

  if (!model.systemEquation.empty()) out += "\n";
  bool first = true;
  for (const auto& inst : model.systemEquation) {
    out += first ? "" : "<*> ";
    first = false;
    out += inst.species;
    if (inst.location) out += "@" + *inst.location;
    if (inst.amountExplicit)
      out += "[" + format_double(inst.initialAmount) + "]";
    out += "\n";
  }

  return out;
}

}  // namespace epinarr
