#include "epinarr/sbml.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "epinarr/analysis.hpp"
#include "epinarr/errors.hpp"
#include "epinarr/numfmt.hpp"

namespace epinarr {

namespace {

constexpr const char* kSbmlNamespacePrefix = "http://www.sbml.org/sbml/level2";
constexpr const char* kSbmlNamespace =
    "http://www.sbml.org/sbml/level2/version3";
constexpr const char* kMathmlNamespace = "http://www.w3.org/1998/Math/MathML";

// ---------------------------------------------------------------- export

// Left-spine flattening only, so import's left fold is an exact inverse.
void flatten_left(const ExprPtr& e, Expr::Op op, std::vector<ExprPtr>& out) {
  if (e->op == op) {
    flatten_left(e->lhs, op, out);
    out.push_back(e->rhs);
  } else {
    out.push_back(e);
  }
}

void emit_mathml(const ExprPtr& e, std::string& out) {
  switch (e->op) {
    case Expr::Op::Number:
      out += "<cn>" + format_double(e->number) + "</cn>";
      return;
    case Expr::Op::Symbol:
      out += "<ci>" + xml_escape(e->symbol) + "</ci>";
      return;
    case Expr::Op::Add:
    case Expr::Op::Mul: {
      std::vector<ExprPtr> operands;
      flatten_left(e, e->op, operands);
      out += e->op == Expr::Op::Add ? "<apply><plus/>" : "<apply><times/>";
      for (const auto& o : operands) emit_mathml(o, out);
      out += "</apply>";
      return;
    }
    case Expr::Op::Sub:
    case Expr::Op::Div:
    case Expr::Op::Pow: {
      out += "<apply>";
      out += e->op == Expr::Op::Sub   ? "<minus/>"
             : e->op == Expr::Op::Div ? "<divide/>"
                                      : "<power/>";
      emit_mathml(e->lhs, out);
      emit_mathml(e->rhs, out);
      out += "</apply>";
      return;
    }
  }
}

// Rewrites every symbol that resolves to a species into its global id.
ExprPtr rewrite_species_symbols(const ExprPtr& e, const Model& model,
                                const SymbolScope& scope) {
  switch (e->op) {
    case Expr::Op::Number:
      return e;
    case Expr::Op::Symbol: {
      auto it = scope.species.find(e->symbol);
      if (it != scope.species.end()) {
        const std::string id = model.systemEquation[it->second].global_id();
        if (id != e->symbol) return Expr::make_symbol(id);
      }
      return e;
    }
    default: {
      ExprPtr lhs = rewrite_species_symbols(e->lhs, model, scope);
      ExprPtr rhs = rewrite_species_symbols(e->rhs, model, scope);
      if (lhs == e->lhs && rhs == e->rhs) return e;
      return Expr::make_binary(e->op, std::move(lhs), std::move(rhs));
    }
  }
}

const char* kind_id(LocationKind kind) {
  return kind == LocationKind::Compartment ? "Compartment" : "Membrane";
}

struct Attr {
  const char* key;
  std::string value;
};

void open_tag(std::string& out, int indent, const char* name,
              const std::vector<Attr>& attrs, bool selfClose) {
  out.append(static_cast<size_t>(indent), ' ');
  out.push_back('<');
  out += name;
  for (const auto& a : attrs) {
    out.push_back(' ');
    out += a.key;
    out += "=\"";
    out += xml_escape(a.value);
    out += "\"";
  }
  out += selfClose ? "/>\n" : ">\n";
}

void close_tag(std::string& out, int indent, const char* name) {
  out.append(static_cast<size_t>(indent), ' ');
  out += "</";
  out += name;
  out += ">\n";
}

void emit_math_element(std::string& out, int indent, const ExprPtr& expr) {
  out.append(static_cast<size_t>(indent), ' ');
  out += "<math xmlns=\"";
  out += kMathmlNamespace;
  out += "\">\n";
  out.append(static_cast<size_t>(indent + 2), ' ');
  emit_mathml(expr, out);
  out += "\n";
  close_tag(out, indent, "math");
}

}  // namespace

std::string expr_to_mathml(const ExprPtr& expr) {
  std::string out;
  emit_mathml(expr, out);
  return out;
}

std::vector<std::string> export_warnings(const Model& model) {
  std::vector<std::string> out;
  for (const auto& comp : model.speciesComponents) {
    for (const auto& p : comp.prefixes) {
      if (p.role == Role::Activator || p.role == Role::Inhibitor) {
        out.push_back("species " + comp.name + " is an " +
                      role_name(p.role) + " of " + p.action +
                      "; SBML stores it as a generic modifier, so the role "
                      "will not survive a round trip");
      }
    }
  }
  return out;
}

std::string export_sbml(const Model& model) {
  {
    const auto issues = validate(model);
    if (has_errors(issues)) {
      std::string what;
      for (const auto& i : issues) {
        if (i.severity != Severity::Error) continue;
        if (!what.empty()) what += "; ";
        what += i.detail;
      }
      throw ValidationFailed(what);
    }
  }

  const SymbolScope scope = make_symbol_scope(model);
  const auto reactions = derive_reactions(model);

  // "world" must be declared whenever something sits inside it.
  bool needWorld = false;
  for (const auto& loc : model.locations)
    if (loc.parent && *loc.parent == "world") needWorld = true;
  for (const auto& inst : model.systemEquation)
    if (!inst.location) needWorld = true;

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<sbml version=\"3\" level=\"2\" xmlns=\"";
  out += kSbmlNamespace;
  out += "\">\n";
  open_tag(out, 2, "model", {{"id", model.name}}, false);

  // listOfCompartmentTypes: the kinds actually used, fixed order.
  std::set<LocationKind> kinds;
  for (const auto& loc : model.locations) kinds.insert(loc.kind);
  if (!kinds.empty()) {
    open_tag(out, 4, "listOfCompartmentTypes", {}, false);
    for (LocationKind k : {LocationKind::Compartment, LocationKind::Membrane})
      if (kinds.count(k))
        open_tag(out, 6, "compartmentType", {{"id", kind_id(k)}}, true);
    close_tag(out, 4, "listOfCompartmentTypes");
  }

  if (needWorld || !model.locations.empty()) {
    open_tag(out, 4, "listOfCompartments", {}, false);
    if (needWorld)
      open_tag(out, 6, "compartment", {{"id", "world"}, {"size", "1.0"}},
               true);
    for (const auto& loc : model.locations) {
      const double size = eval_expr(loc.size, scope.constants);
      std::vector<Attr> attrs{{"id", loc.name}};
      if (loc.parent) attrs.push_back({"outside", *loc.parent});
      attrs.push_back({"size", format_sbml_double(size)});
      attrs.push_back({"compartmentType", kind_id(loc.kind)});
      open_tag(out, 6, "compartment", attrs, true);
    }
    close_tag(out, 4, "listOfCompartments");
  }

  if (!model.systemEquation.empty()) {
    open_tag(out, 4, "listOfSpecies", {}, false);
    for (const auto& inst : model.systemEquation) {
      std::vector<Attr> attrs{{"id", inst.global_id()},
                              {"hasOnlySubstanceUnits", "true"},
                              {"substanceUnits", "item"},
                              {"compartment",
                               inst.location ? *inst.location : "world"},
                              {"name", inst.species}};
      if (inst.amountExplicit)
        attrs.push_back(
            {"initialAmount", format_sbml_double(inst.initialAmount)});
      open_tag(out, 6, "species", attrs, true);
    }
    close_tag(out, 4, "listOfSpecies");
  }

  if (!model.parameters.empty()) {
    open_tag(out, 4, "listOfParameters", {}, false);
    for (const auto& p : model.parameters)
      open_tag(out, 6, "parameter",
               {{"id", p.name}, {"value", format_sbml_double(p.value)}}, true);
    close_tag(out, 4, "listOfParameters");
  }

  if (!reactions.empty()) {
    open_tag(out, 4, "listOfReactions", {}, false);
    for (const auto& r : reactions) {
      open_tag(out, 6, "reaction", {{"id", r.id}, {"reversible", "false"}},
               false);
      if (!r.reactants.empty()) {
        open_tag(out, 8, "listOfReactants", {}, false);
        for (const auto& [id, k] : r.reactants)
          open_tag(out, 10, "speciesReference",
                   {{"species", id}, {"stoichiometry", std::to_string(k)}},
                   true);
        close_tag(out, 8, "listOfReactants");
      }
      if (!r.products.empty()) {
        open_tag(out, 8, "listOfProducts", {}, false);
        for (const auto& [id, k] : r.products)
          open_tag(out, 10, "speciesReference",
                   {{"species", id}, {"stoichiometry", std::to_string(k)}},
                   true);
        close_tag(out, 8, "listOfProducts");
      }
      if (!r.modifiers.empty()) {
        open_tag(out, 8, "listOfModifiers", {}, false);
        for (const auto& id : r.modifiers)
          open_tag(out, 10, "modifierSpeciesReference", {{"species", id}},
                   true);
        close_tag(out, 8, "listOfModifiers");
      }
      open_tag(out, 8, "kineticLaw", {}, false);
      emit_math_element(out, 10,
                        rewrite_species_symbols(r.kineticLaw, model, scope));
      close_tag(out, 8, "kineticLaw");
      close_tag(out, 6, "reaction");
    }
    close_tag(out, 4, "listOfReactions");
  }

  if (!model.events.empty()) {
    open_tag(out, 4, "listOfEvents", {}, false);
    for (const auto& ev : model.events) {
      open_tag(out, 6, "event", {{"id", ev.name}}, false);
      open_tag(out, 8, "trigger", {}, false);
      out.append(10, ' ');
      out += "<math xmlns=\"";
      out += kMathmlNamespace;
      out += "\">\n";
      out.append(12, ' ');
      out += "<apply><geq/><ci>t</ci><cn>" + format_double(ev.triggerTime) +
             "</cn></apply>\n";
      close_tag(out, 10, "math");
      close_tag(out, 8, "trigger");
      open_tag(out, 8, "listOfEventAssignments", {}, false);
      for (const auto& a : ev.assignments) {
        open_tag(out, 10, "eventAssignment", {{"variable", a.target}}, false);
        emit_math_element(out, 12,
                          rewrite_species_symbols(a.value, model, scope));
        close_tag(out, 10, "eventAssignment");
      }
      close_tag(out, 8, "listOfEventAssignments");
      close_tag(out, 6, "event");
    }
    close_tag(out, 4, "listOfEvents");
  }

  close_tag(out, 2, "model");
  out += "</sbml>\n";
  return out;
}

// ---------------------------------------------------------------- import

namespace {

std::string trimmed(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

ExprPtr mathml_node_to_expr(const XmlNode& node) {
  if (node.name == "math") {
    if (node.children.size() != 1)
      throw SchemaError("math", "expected exactly one operand inside <math>");
    return mathml_node_to_expr(node.children[0]);
  }
  if (node.name == "ci") {
    std::string name = trimmed(node.text);
    if (name.empty()) throw SchemaError("ci", "empty <ci> symbol");
    return Expr::make_symbol(std::move(name));
  }
  if (node.name == "cn") {
    if (!node.children.empty())
      throw UnsupportedMathml(node.children[0].name);
    double value = 0.0;
    if (!parse_double(trimmed(node.text), value))
      throw SchemaError("cn", "cannot parse number \"" + trimmed(node.text) +
                                  "\"");
    return Expr::make_number(value);
  }
  if (node.name != "apply") throw UnsupportedMathml(node.name);

  if (node.children.empty())
    throw SchemaError("apply", "empty <apply> element");
  const std::string& op = node.children[0].name;
  std::vector<ExprPtr> operands;
  for (size_t i = 1; i < node.children.size(); ++i)
    operands.push_back(mathml_node_to_expr(node.children[i]));

  if (op == "plus" || op == "times") {
    if (operands.size() < 2)
      throw SchemaError("apply", "<" + op + "> takes at least two operands");
    Expr::Op kind = op == "plus" ? Expr::Op::Add : Expr::Op::Mul;
    ExprPtr acc = operands[0];
    for (size_t i = 1; i < operands.size(); ++i)
      acc = Expr::make_binary(kind, std::move(acc), operands[i]);
    return acc;
  }
  if (op == "minus") {
    if (operands.size() == 1) return Expr::negate(operands[0]);
    if (operands.size() == 2)
      return Expr::make_binary(Expr::Op::Sub, operands[0], operands[1]);
    throw SchemaError("apply", "<minus> takes one or two operands");
  }
  if (op == "divide" || op == "power") {
    if (operands.size() != 2)
      throw SchemaError("apply", "<" + op + "> takes exactly two operands");
    return Expr::make_binary(
        op == "divide" ? Expr::Op::Div : Expr::Op::Pow, operands[0],
        operands[1]);
  }
  throw UnsupportedMathml(op);
}

class SbmlImporter {
 public:
  explicit SbmlImporter(const XmlNode& root) : root_(root) {}

  Model run() {
    if (root_.name != "sbml")
      throw SchemaError("/", "root element is <" + root_.name +
                                 ">, expected <sbml>");
    const std::string* ns = root_.attribute("xmlns");
    if (!ns || ns->rfind(kSbmlNamespacePrefix, 0) != 0)
      throw SchemaError("/sbml", "missing or non-Level-2 xmlns namespace");
    const std::string* level = root_.attribute("level");
    if (!level || *level != "2")
      throw SchemaError("/sbml/@level", "expected level=\"2\"");

    const XmlNode* modelNode = root_.child("model");
    if (!modelNode) throw SchemaError("/sbml", "missing <model> element");
    const std::string* id = modelNode->attribute("id");
    model_.name = id ? *id : "model";

    read_compartments(modelNode->child("listOfCompartments"));
    read_species(modelNode->child("listOfSpecies"));
    read_parameters(modelNode->child("listOfParameters"));
    read_reactions(modelNode->child("listOfReactions"));
    read_events(modelNode->child("listOfEvents"));
    check_consistency();
    return std::move(model_);
  }

 private:
  [[noreturn]] void fail(const std::string& path, const std::string& msg) {
    throw SchemaError("/sbml/model/" + path, msg);
  }

  std::string require_attr(const XmlNode& node, const std::string& path,
                           const char* key) {
    const std::string* v = node.attribute(key);
    if (!v) fail(path + "/@" + key, "missing required attribute");
    return *v;
  }

  double require_number(const XmlNode& node, const std::string& path,
                        const char* key) {
    std::string raw = require_attr(node, path, key);
    double v = 0.0;
    if (!parse_double(raw, v))
      fail(path + "/@" + key, "cannot parse number \"" + raw + "\"");
    return v;
  }

  void read_compartments(const XmlNode* list) {
    if (!list) return;
    int index = 0;
    for (const XmlNode* c : list->children_named("compartment")) {
      ++index;
      const std::string path =
          "listOfCompartments/compartment[" + std::to_string(index) + "]";
      std::string id = require_attr(*c, path, "id");
      if (id == "world") continue;  // root context, never materialized
      Location loc;
      loc.name = id;
      if (const std::string* outside = c->attribute("outside"))
        loc.parent = *outside;
      double size = 1.0;
      if (c->attribute("size")) size = require_number(*c, path, "size");
      loc.size = Expr::make_number(size);
      if (const std::string* kind = c->attribute("compartmentType")) {
        if (*kind == "Compartment") {
          loc.kind = LocationKind::Compartment;
        } else if (*kind == "Membrane") {
          loc.kind = LocationKind::Membrane;
        } else {
          fail(path + "/@compartmentType",
               "unknown compartment type \"" + *kind + "\"");
        }
      }
      model_.locations.push_back(std::move(loc));
    }
    // Parents must resolve within the document.
    for (const auto& loc : model_.locations) {
      if (loc.parent && *loc.parent != "world" &&
          !model_.find_location(*loc.parent))
        throw UnresolvedReference(*loc.parent,
                                  "compartment " + loc.name +
                                      " declares outside=\"" + *loc.parent +
                                      "\"");
    }
  }

  void read_species(const XmlNode* list) {
    if (!list) return;
    int index = 0;
    for (const XmlNode* s : list->children_named("species")) {
      ++index;
      const std::string path =
          "listOfSpecies/species[" + std::to_string(index) + "]";
      std::string id = require_attr(*s, path, "id");
      std::string compartment = require_attr(*s, path, "compartment");

      SpeciesInstance inst;
      if (compartment == "world") {
        inst.location.reset();
      } else if (model_.find_location(compartment)) {
        inst.location = compartment;
      } else {
        throw UnresolvedReference(compartment, "species " + id +
                                                   " references compartment "
                                                   "\"" +
                                                   compartment + "\"");
      }

      if (const std::string* name = s->attribute("name")) {
        inst.species = *name;
      } else if (!inst.location) {
        inst.species = id;
      } else {
        const std::string suffix = "_" + compartment;
        if (id.size() <= suffix.size() ||
            id.compare(id.size() - suffix.size(), suffix.size(), suffix) != 0)
          fail(path, "species id \"" + id +
                         "\" does not follow the <name>_<compartment> "
                         "pattern and carries no name attribute");
        inst.species = id.substr(0, id.size() - suffix.size());
      }
      if (inst.global_id() != id)
        fail(path, "species id \"" + id + "\" does not match name \"" +
                       inst.species + "\" in compartment \"" + compartment +
                       "\"");

      if (s->attribute("initialAmount")) {
        inst.initialAmount = require_number(*s, path, "initialAmount");
        inst.amountExplicit = true;
      }
      if (speciesIds_.count(id)) fail(path, "duplicate species id \"" + id + "\"");
      speciesIds_.insert(id);

      if (!model_.find_component(inst.species))
        model_.speciesComponents.push_back({inst.species, {}});
      model_.systemEquation.push_back(std::move(inst));
    }
  }

  void read_parameters(const XmlNode* list) {
    if (!list) return;
    int index = 0;
    for (const XmlNode* p : list->children_named("parameter")) {
      ++index;
      const std::string path =
          "listOfParameters/parameter[" + std::to_string(index) + "]";
      Parameter param;
      param.name = require_attr(*p, path, "id");
      param.value = require_number(*p, path, "value");
      if (model_.find_parameter(param.name))
        fail(path, "duplicate parameter id \"" + param.name + "\"");
      model_.parameters.push_back(std::move(param));
    }
  }

  // Renames reaction-local parameters to "<reaction>_<name>", hoists them
  // into the global list, and rewrites the kinetic law to match.
  ExprPtr rename_local_symbols(const ExprPtr& e,
                               const std::map<std::string, std::string>& table) {
    switch (e->op) {
      case Expr::Op::Number:
        return e;
      case Expr::Op::Symbol: {
        auto it = table.find(e->symbol);
        return it == table.end() ? e : Expr::make_symbol(it->second);
      }
      default:
        return Expr::make_binary(e->op, rename_local_symbols(e->lhs, table),
                                 rename_local_symbols(e->rhs, table));
    }
  }

  void add_prefix(const std::string& path, const std::string& action,
                  const std::string& speciesId, int stoichiometry, Role role) {
    const SpeciesInstance* inst = model_.find_instance(speciesId);
    if (!inst)
      throw UnresolvedReference(speciesId, "reaction " + action +
                                               " references species \"" +
                                               speciesId + "\"");
    SpeciesComponent* comp = nullptr;
    for (auto& c : model_.speciesComponents)
      if (c.name == inst->species) comp = &c;
    for (const auto& p : comp->prefixes) {
      if (p.action != action) continue;
      if (p.role == role && p.stoichiometry == stoichiometry)
        return;  // another instance of the same component; same prefix
      fail(path, "species " + inst->species + " takes part in reaction " +
                     action +
                     " with conflicting roles or stoichiometries; not "
                     "expressible as a species component");
    }
    comp->prefixes.push_back({action, stoichiometry, role});
  }

  int read_stoichiometry(const XmlNode& ref, const std::string& path) {
    if (!ref.attribute("stoichiometry")) return 1;
    double v = require_number(ref, path, "stoichiometry");
    if (v < 1.0 || v != std::floor(v))
      fail(path + "/@stoichiometry",
           "stoichiometry " + format_double(v) +
               " is not a positive integer; not expressible");
    return static_cast<int>(v);
  }

  void read_reactions(const XmlNode* list) {
    if (!list) return;
    int index = 0;
    for (const XmlNode* r : list->children_named("reaction")) {
      ++index;
      const std::string path =
          "listOfReactions/reaction[" + std::to_string(index) + "]";
      std::string id = require_attr(*r, path, "id");
      if (model_.find_rate(id)) fail(path, "duplicate reaction id \"" + id + "\"");

      const XmlNode* law = r->child("kineticLaw");
      if (!law) fail(path, "missing <kineticLaw>");
      const XmlNode* math = law->child("math");
      if (!math) fail(path + "/kineticLaw", "missing <math>");
      ExprPtr expr = mathml_node_to_expr(*math);

      // Local parameters, if any.
      if (const XmlNode* locals = law->child("listOfParameters")) {
        std::map<std::string, std::string> renames;
        int pi = 0;
        for (const XmlNode* p : locals->children_named("parameter")) {
          ++pi;
          const std::string ppath =
              path + "/kineticLaw/listOfParameters/parameter[" +
              std::to_string(pi) + "]";
          std::string name = require_attr(*p, ppath, "id");
          double value = require_number(*p, ppath, "value");
          std::string renamed = id + "_" + name;
          if (model_.find_parameter(renamed))
            fail(ppath, "renamed local parameter \"" + renamed +
                            "\" collides with an existing parameter");
          Parameter param;
          param.name = renamed;
          param.value = value;
          param.origin = {true, id};
          model_.parameters.push_back(std::move(param));
          renames[name] = renamed;
        }
        expr = rename_local_symbols(expr, renames);
      }

      auto read_side = [&](const char* listName, Role role, char tag) {
        const XmlNode* side = r->child(listName);
        if (!side) return;
        // Repeated references to one species sum their stoichiometry.
        std::vector<std::pair<std::string, int>> refs;
        int ri = 0;
        const char* refName = role == Role::GenericModifier
                                  ? "modifierSpeciesReference"
                                  : "speciesReference";
        for (const XmlNode* ref : side->children_named(refName)) {
          ++ri;
          const std::string rpath = path + "/" + listName + "/" + refName +
                                    "[" + std::to_string(ri) + "]";
          std::string species = require_attr(*ref, rpath, "species");
          int k = role == Role::GenericModifier ? 1
                                                : read_stoichiometry(*ref, rpath);
          bool merged = false;
          for (auto& [existing, total] : refs) {
            if (existing == species) {
              total += k;
              merged = true;
            }
          }
          if (!merged) refs.emplace_back(std::move(species), k);
        }
        for (const auto& [species, k] : refs) {
          add_prefix(path, id, species, k, role);
          documentParticipants_[id].insert(std::string(1, tag) + ":" + species);
        }
      };
      read_side("listOfReactants", Role::Reactant, 'r');
      read_side("listOfProducts", Role::Product, 'p');
      read_side("listOfModifiers", Role::GenericModifier, 'm');

      model_.functionalRates.push_back({id, std::move(expr)});
    }
  }

  void read_events(const XmlNode* list) {
    if (!list) return;
    int index = 0;
    for (const XmlNode* e : list->children_named("event")) {
      ++index;
      const std::string path = "listOfEvents/event[" + std::to_string(index) + "]";
      Event ev;
      ev.name = require_attr(*e, path, "id");

      const XmlNode* trigger = e->child("trigger");
      if (!trigger) fail(path, "missing <trigger>");
      const XmlNode* math = trigger->child("math");
      if (!math || math->children.size() != 1)
        fail(path + "/trigger", "expected <math> with a single <apply>");
      const XmlNode& apply = math->children[0];
      // The only accepted trigger shape: t >= <time>.
      bool ok = apply.name == "apply" && apply.children.size() == 3 &&
                apply.children[0].name == "geq" &&
                apply.children[1].name == "ci" &&
                trimmed(apply.children[1].text) == "t" &&
                apply.children[2].name == "cn";
      if (!ok)
        fail(path + "/trigger",
             "trigger must be the time condition t >= <number>");
      double t = 0.0;
      if (!parse_double(trimmed(apply.children[2].text), t))
        fail(path + "/trigger", "cannot parse trigger time");
      ev.triggerTime = t;

      const XmlNode* assignments = e->child("listOfEventAssignments");
      if (assignments) {
        int ai = 0;
        for (const XmlNode* a : assignments->children_named("eventAssignment")) {
          ++ai;
          const std::string apath = path + "/listOfEventAssignments/"
                                           "eventAssignment[" +
                                    std::to_string(ai) + "]";
          EventAssignment assignment;
          assignment.target = require_attr(*a, apath, "variable");
          const XmlNode* amath = a->child("math");
          if (!amath) fail(apath, "missing <math>");
          assignment.value = mathml_node_to_expr(*amath);
          ev.assignments.push_back(std::move(assignment));
        }
      }
      model_.events.push_back(std::move(ev));
    }
  }

  // The component representation implies that every instance of a species
  // joins every reaction its component names. A document whose reactions
  // pick out individual instances asymmetrically cannot be expressed, so
  // re-derive and compare.
  void check_consistency() {
    const auto derived = derive_reactions(model_);
    std::map<std::string, const Reaction*> byId;
    for (const auto& r : derived) byId[r.id] = &r;

    // The prefixes were created instance-by-instance from the document, so
    // any mismatch against the re-derived view means the document picked
    // out individual instances of a shared component asymmetrically.
    for (const auto& rate : model_.functionalRates) {
      auto it = byId.find(rate.action);
      const auto& fromDocument = documentParticipants_[rate.action];
      if (it == byId.end()) {
        if (!fromDocument.empty())
          throw SchemaError("/sbml/model/listOfReactions",
                            "reaction " + rate.action + " is inconsistent");
        continue;  // a reaction with no participants at all
      }
      std::set<std::string> participants;
      for (const auto& [id, k] : it->second->reactants)
        participants.insert("r:" + id);
      for (const auto& [id, k] : it->second->products)
        participants.insert("p:" + id);
      for (const auto& id : it->second->modifiers)
        participants.insert("m:" + id);
      if (participants != fromDocument) {
        throw SchemaError(
            "/sbml/model/listOfReactions",
            "reaction " + rate.action +
                " references only some instances of a species component; "
                "not expressible as a location-free Bio-PEPA model");
      }
    }
  }

  const XmlNode& root_;
  Model model_;
  std::set<std::string> speciesIds_;
  std::map<std::string, std::set<std::string>> documentParticipants_;
};

}  // namespace

ExprPtr mathml_to_expr(const XmlNode& node) { return mathml_node_to_expr(node); }

ExprPtr mathml_to_expr(const std::string& xml) {
  return mathml_node_to_expr(parse_xml(xml));
}

Model import_sbml(const std::string& xml) {
  XmlNode root = parse_xml(xml);
  SbmlImporter importer(root);
  return importer.run();
}

}  // namespace epinarr
