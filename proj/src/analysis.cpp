#include "epinarr/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <json.hpp>

#include "epinarr/errors.hpp"
#include "epinarr/numfmt.hpp"

namespace epinarr {

const char* severity_name(Severity s) {
  return s == Severity::Error ? "error" : "warning";
}

const char* issue_kind_name(IssueKind k) {
  switch (k) {
    case IssueKind::UndefinedSpecies: return "UndefinedSpecies";
    case IssueKind::UndefinedLocation: return "UndefinedLocation";
    case IssueKind::UndefinedParameterOrSymbol:
      return "UndefinedParameterOrSymbol";
    case IssueKind::UnknownAction: return "UnknownAction";
    case IssueKind::OrphanSpecies: return "OrphanSpecies";
    case IssueKind::UninitializedSpecies: return "UninitializedSpecies";
    case IssueKind::DuplicateDefinition: return "DuplicateDefinition";
    case IssueKind::NonPositiveSize: return "NonPositiveSize";
  }
  return "?";
}

bool has_errors(const std::vector<Issue>& issues) {
  return std::any_of(issues.begin(), issues.end(), [](const Issue& i) {
    return i.severity == Severity::Error;
  });
}

namespace {

// Does this unresolved symbol look like a species reference? Either a bare
// component name or "<component>_<location>" over declared names.
bool species_shaped(const Model& model, const std::string& symbol) {
  if (model.find_component(symbol)) return true;
  for (const auto& comp : model.speciesComponents) {
    for (const auto& loc : model.locations) {
      if (symbol == species_global_id(comp.name, loc.name)) return true;
    }
  }
  return false;
}

void classify_unresolved(const Model& model, const std::string& symbol,
                         const std::string& context,
                         std::vector<Issue>& out) {
  if (species_shaped(model, symbol)) {
    out.push_back({Severity::Error, IssueKind::UndefinedSpecies, symbol,
                   context + " refers to species " + symbol +
                       ", which is not defined."});
  } else {
    out.push_back({Severity::Error, IssueKind::UndefinedParameterOrSymbol,
                   symbol,
                   context + " refers to " + symbol +
                       ", which resolves to nothing."});
  }
}

template <typename T, typename NameOf>
void report_duplicates(const std::vector<T>& items, NameOf name_of,
                       const char* what, std::vector<Issue>& out) {
  std::set<std::string> seen;
  for (const auto& item : items) {
    std::string name = name_of(item);
    if (!seen.insert(name).second) {
      out.push_back({Severity::Error, IssueKind::DuplicateDefinition, name,
                     std::string("The ") + what + " " + name +
                         " is defined more than once."});
    }
  }
}

// Distinct prefix actions backed by a functional rate; equals the length
// of derive_reactions when that call would succeed.
std::vector<std::string> derivable_actions(const Model& model) {
  std::set<std::string> used;
  for (const auto& comp : model.speciesComponents)
    for (const auto& p : comp.prefixes) used.insert(p.action);
  std::vector<std::string> out;
  for (const auto& rate : model.functionalRates)
    if (used.count(rate.action)) out.push_back(rate.action);
  return out;
}

}  // namespace

std::vector<Issue> validate(const Model& model) {
  std::vector<Issue> issues;
  const SymbolScope scope = make_symbol_scope(model);

  // Duplicate definitions.
  report_duplicates(
      model.locations, [](const Location& l) { return l.name; }, "location",
      issues);
  report_duplicates(
      model.speciesComponents,
      [](const SpeciesComponent& c) { return c.name; }, "species component",
      issues);
  report_duplicates(
      model.events, [](const Event& e) { return e.name; }, "event", issues);
  report_duplicates(
      model.systemEquation,
      [](const SpeciesInstance& s) { return s.global_id(); },
      "species instance", issues);
  {
    // Parameters and functional rates share one namespace.
    std::set<std::string> seen;
    for (const auto& p : model.parameters)
      if (!seen.insert(p.name).second)
        issues.push_back({Severity::Error, IssueKind::DuplicateDefinition,
                          p.name,
                          "The parameter " + p.name +
                              " is defined more than once."});
    for (const auto& r : model.functionalRates)
      if (!seen.insert(r.action).second)
        issues.push_back(
            {Severity::Error, IssueKind::DuplicateDefinition, r.action,
             "The name " + r.action +
                 " is defined as both a parameter and a functional rate, or "
                 "more than once."});
  }

  // Location references and sizes.
  Env paramEnv;
  for (const auto& p : model.parameters) paramEnv[p.name] = p.value;
  for (const auto& loc : model.locations) {
    if (loc.parent && *loc.parent != "world" &&
        !model.find_location(*loc.parent)) {
      issues.push_back({Severity::Error, IssueKind::UndefinedLocation,
                        *loc.parent,
                        "The compartment " + loc.name + " sits inside " +
                            *loc.parent + ", which is not defined."});
    }
    try {
      double size = eval_expr(loc.size, paramEnv);
      if (!(size > 0.0) || !std::isfinite(size)) {
        issues.push_back({Severity::Error, IssueKind::NonPositiveSize,
                          loc.name,
                          "The size of compartment " + loc.name +
                              " evaluates to " + format_double(size) +
                              ", which is not positive."});
      }
    } catch (const UnboundSymbol& e) {
      classify_unresolved(model, e.name,
                          "The size of compartment " + loc.name, issues);
    } catch (const EvalError&) {
      issues.push_back({Severity::Error, IssueKind::NonPositiveSize, loc.name,
                        "The size of compartment " + loc.name +
                            " cannot be evaluated."});
    }
  }

  // System-equation references.
  for (const auto& inst : model.systemEquation) {
    if (!model.find_component(inst.species)) {
      issues.push_back({Severity::Error, IssueKind::UndefinedSpecies,
                        inst.species,
                        "The system equation instantiates species " +
                            inst.species + ", which is not defined."});
    }
    if (inst.location && !model.find_location(*inst.location)) {
      issues.push_back({Severity::Error, IssueKind::UndefinedLocation,
                        *inst.location,
                        "The species instance " + inst.global_id() +
                            " lives in " + *inst.location +
                            ", which is not defined."});
    }
  }

  // Prefix actions need functional rates.
  for (const auto& comp : model.speciesComponents) {
    for (const auto& p : comp.prefixes) {
      if (!model.find_rate(p.action)) {
        issues.push_back({Severity::Error, IssueKind::UnknownAction, p.action,
                          "Species " + comp.name + " takes part in action " +
                              p.action +
                              ", which has no functional rate."});
      }
    }
  }

  // Kinetic-law symbols, one issue per (reaction, symbol).
  for (const auto& rate : model.functionalRates) {
    for (const auto& symbol : free_symbols(rate.law)) {
      if (!scope.resolves(symbol))
        classify_unresolved(model, symbol, "The reaction " + rate.action,
                            issues);
    }
  }

  // Events: targets and assignment expressions.
  for (const auto& ev : model.events) {
    for (const auto& a : ev.assignments) {
      const bool targetOk =
          model.find_parameter(a.target) || model.find_instance(a.target);
      if (!targetOk) {
        if (species_shaped(model, a.target)) {
          issues.push_back({Severity::Error, IssueKind::UndefinedSpecies,
                            a.target,
                            "The event " + ev.name + " assigns to species " +
                                a.target + ", which is not defined."});
        } else {
          issues.push_back(
              {Severity::Error, IssueKind::UndefinedParameterOrSymbol,
               a.target,
               "The event " + ev.name + " assigns to " + a.target +
                   ", which is neither a parameter nor a species instance."});
        }
      }
      for (const auto& symbol : free_symbols(a.value)) {
        if (!scope.resolves(symbol))
          classify_unresolved(model, symbol, "The event " + ev.name, issues);
      }
    }
  }

  // Warnings: components never instanced, instances no reaction touches.
  {
    std::set<std::string> instanced;
    for (const auto& inst : model.systemEquation) instanced.insert(inst.species);
    for (const auto& comp : model.speciesComponents) {
      if (!instanced.count(comp.name)) {
        issues.push_back({Severity::Warning, IssueKind::UninitializedSpecies,
                          comp.name,
                          "Species " + comp.name +
                              " is never instanced in the system equation."});
      }
    }
    for (const auto& inst : model.systemEquation) {
      const SpeciesComponent* comp = model.find_component(inst.species);
      if (comp && comp->prefixes.empty()) {
        issues.push_back({Severity::Warning, IssueKind::OrphanSpecies,
                          inst.global_id(),
                          "The species instance " + inst.global_id() +
                              " takes part in no reaction."});
      }
    }
  }

  std::sort(issues.begin(), issues.end(), [](const Issue& a, const Issue& b) {
    if (a.severity != b.severity) return a.severity < b.severity;
    if (a.kind != b.kind) return a.kind < b.kind;
    if (a.subject != b.subject) return a.subject < b.subject;
    return a.detail < b.detail;
  });
  return issues;
}

SummaryCounts summarize(const Model& model) {
  SummaryCounts c;
  std::set<LocationKind> kinds;
  for (const auto& loc : model.locations) kinds.insert(loc.kind);
  c.nb_CompartmentTypes = static_cast<long>(kinds.size());
  c.nb_Compartments = static_cast<long>(model.locations.size());
  c.nb_Species = static_cast<long>(model.systemEquation.size());
  c.nb_Parameters = static_cast<long>(model.parameters.size());
  c.nb_InitialAssignments = static_cast<long>(
      std::count_if(model.systemEquation.begin(), model.systemEquation.end(),
                    [](const SpeciesInstance& s) { return s.amountExplicit; }));
  c.nb_Reactions = static_cast<long>(derivable_actions(model).size());
  return c;
}

DiffReport diff_models(const Model& reference, const Model& candidate,
                       double tolerance) {
  DiffReport report;

  auto species_ids = [](const Model& m) {
    std::set<std::string> out;
    for (const auto& inst : m.systemEquation) out.insert(inst.global_id());
    return out;
  };
  const auto refSpecies = species_ids(reference);
  const auto candSpecies = species_ids(candidate);
  std::set_difference(refSpecies.begin(), refSpecies.end(),
                      candSpecies.begin(), candSpecies.end(),
                      std::back_inserter(report.missingSpecies));
  std::set_difference(candSpecies.begin(), candSpecies.end(),
                      refSpecies.begin(), refSpecies.end(),
                      std::back_inserter(report.extraSpecies));

  const auto refActions = derivable_actions(reference);
  const auto candActions = derivable_actions(candidate);
  const std::set<std::string> refSet(refActions.begin(), refActions.end());
  const std::set<std::string> candSet(candActions.begin(), candActions.end());
  std::set_difference(refSet.begin(), refSet.end(), candSet.begin(),
                      candSet.end(),
                      std::back_inserter(report.missingReactions));
  std::set_difference(candSet.begin(), candSet.end(), refSet.begin(),
                      refSet.end(), std::back_inserter(report.extraReactions));

  for (const auto& action : refSet) {
    if (!candSet.count(action)) continue;
    const FunctionalRate* a = reference.find_rate(action);
    const FunctionalRate* b = candidate.find_rate(action);
    if (a && b && expr_canonical_key(a->law) != expr_canonical_key(b->law))
      report.changedKineticLaws.push_back(action);
  }
  std::sort(report.changedKineticLaws.begin(), report.changedKineticLaws.end());

  for (const auto& p : reference.parameters) {
    const Parameter* q = candidate.find_parameter(p.name);
    if (!q) continue;
    const double diff = std::fabs(p.value - q->value);
    const double scale = std::max(std::fabs(p.value), std::fabs(q->value));
    const bool equal = tolerance > 0.0 ? diff <= tolerance * scale
                                       : p.value == q->value;
    if (!equal)
      report.changedParameters.push_back({p.name, p.value, q->value});
  }
  std::sort(report.changedParameters.begin(), report.changedParameters.end(),
            [](const auto& a, const auto& b) { return a.name < b.name; });

  return report;
}

std::string summary_to_text(const SummaryCounts& c) {
  std::string out;
  out += "nb_FunctionDefinitions : " + std::to_string(c.nb_FunctionDefinitions) + "\n";
  out += "nb_CompartmentTypes : " + std::to_string(c.nb_CompartmentTypes) + "\n";
  out += "nb_Compartments : " + std::to_string(c.nb_Compartments) + "\n";
  out += "nb_Species : " + std::to_string(c.nb_Species) + "\n";
  out += "nb_Parameters : " + std::to_string(c.nb_Parameters) + "\n";
  out += "nb_InitialAssignments : " + std::to_string(c.nb_InitialAssignments) + "\n";
  out += "nb_Rules : " + std::to_string(c.nb_Rules) + "\n";
  out += "nb_Reactions : " + std::to_string(c.nb_Reactions) + "\n";
  return out;
}

std::string summary_to_json(const SummaryCounts& c) {
  nlohmann::ordered_json j;
  j["nb_FunctionDefinitions"] = c.nb_FunctionDefinitions;
  j["nb_CompartmentTypes"] = c.nb_CompartmentTypes;
  j["nb_Compartments"] = c.nb_Compartments;
  j["nb_Species"] = c.nb_Species;
  j["nb_Parameters"] = c.nb_Parameters;
  j["nb_InitialAssignments"] = c.nb_InitialAssignments;
  j["nb_Rules"] = c.nb_Rules;
  j["nb_Reactions"] = c.nb_Reactions;
  return j.dump(2) + "\n";
}

std::string issues_to_text(const std::vector<Issue>& issues) {
  if (issues.empty()) return "no issues found\n";
  std::string out;
  for (const auto& i : issues) {
    out += severity_name(i.severity);
    out += " [";
    out += issue_kind_name(i.kind);
    out += "] ";
    out += i.detail;
    out += "\n";
  }
  return out;
}

std::string issues_to_json(const std::vector<Issue>& issues) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& i : issues) {
    nlohmann::ordered_json j;
    j["severity"] = severity_name(i.severity);
    j["kind"] = issue_kind_name(i.kind);
    j["subject"] = i.subject;
    j["detail"] = i.detail;
    arr.push_back(std::move(j));
  }
  return arr.dump(2) + "\n";
}

namespace {

void diff_line(std::string& out, const char* label,
               const std::vector<std::string>& items) {
  if (items.empty()) return;
  out += label;
  out += ": ";
  for (size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += items[i];
  }
  out += "\n";
}

}  // namespace

std::string diff_to_text(const DiffReport& r) {
  if (r.empty()) return "models are equivalent\n";
  std::string out;
  diff_line(out, "missing species", r.missingSpecies);
  diff_line(out, "extra species", r.extraSpecies);
  diff_line(out, "missing reactions", r.missingReactions);
  diff_line(out, "extra reactions", r.extraReactions);
  diff_line(out, "changed kinetic laws", r.changedKineticLaws);
  for (const auto& p : r.changedParameters) {
    out += "changed parameter: " + p.name + " " + format_double(p.oldValue) +
           " -> " + format_double(p.newValue) + "\n";
  }
  return out;
}

std::string diff_to_json(const DiffReport& r) {
  nlohmann::ordered_json j;
  j["missingSpecies"] = r.missingSpecies;
  j["extraSpecies"] = r.extraSpecies;
  j["missingReactions"] = r.missingReactions;
  j["extraReactions"] = r.extraReactions;
  j["changedKineticLaws"] = r.changedKineticLaws;
  nlohmann::ordered_json params = nlohmann::ordered_json::array();
  for (const auto& p : r.changedParameters) {
    nlohmann::ordered_json e;
    e["name"] = p.name;
    e["old"] = p.oldValue;
    e["new"] = p.newValue;
    params.push_back(std::move(e));
  }
  j["changedParameters"] = std::move(params);
  return j.dump(2) + "\n";
}

}  // namespace epinarr
