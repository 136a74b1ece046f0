#include "epinarr/model.hpp"

#include <algorithm>
#include <map>

#include "epinarr/errors.hpp"

namespace epinarr {

const char* role_name(Role role) {
  switch (role) {
    case Role::Reactant: return "reactant";
    case Role::Product: return "product";
    case Role::Activator: return "activator";
    case Role::Inhibitor: return "inhibitor";
    case Role::GenericModifier: return "modifier";
  }
  return "?";
}

std::string species_global_id(const std::string& species,
                              const std::optional<std::string>& location) {
  if (!location) return species;
  return species + "_" + *location;
}

std::string SpeciesInstance::global_id() const {
  return species_global_id(species, location);
}

const Location* Model::find_location(const std::string& n) const {
  for (const auto& l : locations)
    if (l.name == n) return &l;
  return nullptr;
}

const Parameter* Model::find_parameter(const std::string& n) const {
  for (const auto& p : parameters)
    if (p.name == n) return &p;
  return nullptr;
}

const FunctionalRate* Model::find_rate(const std::string& action) const {
  for (const auto& r : functionalRates)
    if (r.action == action) return &r;
  return nullptr;
}

const SpeciesComponent* Model::find_component(const std::string& n) const {
  for (const auto& c : speciesComponents)
    if (c.name == n) return &c;
  return nullptr;
}

const SpeciesInstance* Model::find_instance(const std::string& globalId) const {
  for (const auto& s : systemEquation)
    if (s.global_id() == globalId) return &s;
  return nullptr;
}

namespace {

std::vector<Reaction> derive_reactions_impl(const Model& model,
                                            bool throwOnUnknown) {
  // Gather the actions actually used by prefixes.
  std::vector<std::string> used;
  for (const auto& comp : model.speciesComponents) {
    for (const auto& p : comp.prefixes) {
      if (!model.find_rate(p.action)) {
        if (throwOnUnknown) throw UnknownAction(p.action);
        continue;
      }
      if (std::find(used.begin(), used.end(), p.action) == used.end())
        used.push_back(p.action);
    }
  }

  // Output follows the functional-rate list, which carries source order.
  std::vector<Reaction> out;
  for (const auto& rate : model.functionalRates) {
    if (std::find(used.begin(), used.end(), rate.action) == used.end())
      continue;
    Reaction r;
    r.id = rate.action;
    r.kineticLaw = rate.law;
    for (const auto& inst : model.systemEquation) {
      const SpeciesComponent* comp = model.find_component(inst.species);
      if (!comp) continue;
      for (const auto& p : comp->prefixes) {
        if (p.action != rate.action) continue;
        switch (p.role) {
          case Role::Reactant:
            r.reactants.emplace_back(inst.global_id(), p.stoichiometry);
            break;
          case Role::Product:
            r.products.emplace_back(inst.global_id(), p.stoichiometry);
            break;
          default:
            r.modifiers.push_back(inst.global_id());
            break;
        }
      }
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

std::vector<Reaction> derive_reactions(const Model& model) {
  return derive_reactions_impl(model, true);
}

std::vector<Reaction> derive_reactions_tolerant(const Model& model) {
  return derive_reactions_impl(model, false);
}

std::vector<std::vector<int>> stoichiometry_matrix(const Model& model) {
  const auto reactions = derive_reactions(model);
  std::vector<std::string> speciesIds;
  speciesIds.reserve(model.systemEquation.size());
  for (const auto& inst : model.systemEquation)
    speciesIds.push_back(inst.global_id());

  std::vector<std::vector<int>> m(
      speciesIds.size(), std::vector<int>(reactions.size(), 0));
  for (size_t j = 0; j < reactions.size(); ++j) {
    const auto& r = reactions[j];
    for (size_t i = 0; i < speciesIds.size(); ++i) {
      int net = 0;
      for (const auto& [id, k] : r.reactants)
        if (id == speciesIds[i]) net -= k;
      for (const auto& [id, k] : r.products)
        if (id == speciesIds[i]) net += k;
      m[i][j] = net;
    }
  }
  return m;
}

SymbolScope make_symbol_scope(const Model& model) {
  SymbolScope scope;

  // Lowest priority first; later inserts overwrite.
  Env paramEnv;
  for (const auto& p : model.parameters) paramEnv[p.name] = p.value;
  for (const auto& loc : model.locations) {
    try {
      scope.constants[loc.name] = eval_expr(loc.size, paramEnv);
    } catch (const EvalError&) {
      // left unresolved; validate() flags the size expression itself
    }
  }
  for (const auto& [name, value] : paramEnv) scope.constants[name] = value;

  const bool bareNamesAllowed = model.locations.size() <= 1;
  for (size_t i = 0; i < model.systemEquation.size(); ++i) {
    const auto& inst = model.systemEquation[i];
    if (bareNamesAllowed)
      scope.species.emplace(inst.species, static_cast<int>(i));
    // Global ids win over bare names and constants.
    scope.species[inst.global_id()] = static_cast<int>(i);
  }
  return scope;
}

}  // namespace epinarr
