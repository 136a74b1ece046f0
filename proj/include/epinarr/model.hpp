#ifndef EPINARR_MODEL_HPP
#define EPINARR_MODEL_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "epinarr/expr.hpp"

namespace epinarr {

/// How a species takes part in a reaction.
enum class Role { Reactant, Product, Activator, Inhibitor, GenericModifier };

const char* role_name(Role role);

enum class LocationKind { Compartment, Membrane };

/// A bounded context (compartment or membrane) holding species instances.
/// parent, when present, names another location or the reserved root "world".
struct Location {
  std::string name;
  std::optional<std::string> parent;
  ExprPtr size;  // must evaluate > 0 under the model's parameters
  LocationKind kind = LocationKind::Compartment;

  bool operator==(const Location& o) const {
    return name == o.name && parent == o.parent && kind == o.kind &&
           expr_equal(size, o.size);
  }
};

struct Parameter {
  /// For ReactionLocal parameters the name already carries the renamed
  /// form "<reaction>_<name>"; reaction records where it came from.
  struct Origin {
    bool local = false;
    std::string reaction;

    bool operator==(const Origin&) const = default;
  };

  std::string name;
  double value = 0.0;
  Origin origin;

  bool operator==(const Parameter&) const = default;
};

/// The kinetic law attached to one action.
struct FunctionalRate {
  std::string action;
  ExprPtr law;

  bool operator==(const FunctionalRate& o) const {
    return action == o.action && expr_equal(law, o.law);
  }
};

/// One (action, stoichiometry) op entry of a species component.
struct Prefix {
  std::string action;
  int stoichiometry = 1;  // >= 1
  Role role = Role::Reactant;

  bool operator==(const Prefix&) const = default;
};

/// Process-algebra definition of one species: the reactions it joins and
/// the role it plays in each. At most one prefix per action.
struct SpeciesComponent {
  std::string name;
  std::vector<Prefix> prefixes;

  bool operator==(const SpeciesComponent&) const = default;
};

/// An initialized occurrence of a species component in the system equation.
struct SpeciesInstance {
  std::string species;                   // names a SpeciesComponent
  std::optional<std::string> location;   // names a Location
  double initialAmount = 0.0;            // individuals ("item" units)
  bool amountExplicit = false;           // written in the source / document
  double stepSize = 1.0;
  int levels = 1;

  std::string global_id() const;

  bool operator==(const SpeciesInstance&) const = default;
};

struct EventAssignment {
  std::string target;  // a Parameter name or a SpeciesInstance global id
  ExprPtr value;

  bool operator==(const EventAssignment& o) const {
    return target == o.target && expr_equal(value, o.value);
  }
};

/// A single time trigger with instantaneous assignments; fires once.
struct Event {
  std::string name;
  double triggerTime = 0.0;
  std::vector<EventAssignment> assignments;

  bool operator==(const Event&) const = default;
};

/// Reaction-centric view derived from the species components.
struct Reaction {
  std::string id;  // the action
  std::vector<std::pair<std::string, int>> reactants;  // (globalId, stoich)
  std::vector<std::pair<std::string, int>> products;
  std::vector<std::string> modifiers;
  ExprPtr kineticLaw;

  bool operator==(const Reaction& o) const {
    return id == o.id && reactants == o.reactants && products == o.products &&
           modifiers == o.modifiers && expr_equal(kineticLaw, o.kineticLaw);
  }
};

/// The Bio-PEPA model: locations, parameters, functional rates, species
/// components, system equation and events, in source order.
struct Model {
  std::string name = "model";
  std::vector<Location> locations;
  std::vector<Parameter> parameters;
  std::vector<FunctionalRate> functionalRates;
  std::vector<SpeciesComponent> speciesComponents;
  std::vector<SpeciesInstance> systemEquation;
  std::vector<Event> events;

  const Location* find_location(const std::string& name) const;
  const Parameter* find_parameter(const std::string& name) const;
  const FunctionalRate* find_rate(const std::string& action) const;
  const SpeciesComponent* find_component(const std::string& name) const;
  const SpeciesInstance* find_instance(const std::string& globalId) const;

  bool operator==(const Model&) const = default;
};

/// "<species>_<location>" when located, the bare species name otherwise.
std::string species_global_id(const std::string& species,
                              const std::optional<std::string>& location);

/// One Reaction per distinct action, ordered by the action's first
/// appearance among the functional rates. Every instance whose component
/// holds a prefix for the action joins the reaction under the prefix's
/// role. Throws UnknownAction for a prefix action without a rate.
std::vector<Reaction> derive_reactions(const Model& model);

/// derive_reactions, but prefixes whose action has no functional rate are
/// skipped instead of throwing. Lets reporting code work on models the
/// validator rejects.
std::vector<Reaction> derive_reactions_tolerant(const Model& model);

/// Net stoichiometry, rows following systemEquation order and columns
/// following derive_reactions order. Entry = products - reactants;
/// modifiers contribute 0.
std::vector<std::vector<int>> stoichiometry_matrix(const Model& model);

/// Kinetic-law symbol resolution, in priority order: species global id,
/// bare species name (only when the model has at most one location),
/// parameter, location size.
struct SymbolScope {
  /// symbol -> index into systemEquation
  std::unordered_map<std::string, int> species;
  /// parameter values and evaluated location sizes (sizes that fail to
  /// evaluate are simply absent; the validator reports them)
  Env constants;

  bool resolves(const std::string& symbol) const {
    return species.count(symbol) > 0 || constants.count(symbol) > 0;
  }
};

SymbolScope make_symbol_scope(const Model& model);

}  // namespace epinarr

#endif
