#ifndef EPINARR_ANALYSIS_HPP
#define EPINARR_ANALYSIS_HPP

#include <string>
#include <vector>

#include "epinarr/model.hpp"

namespace epinarr {

enum class Severity { Error, Warning };

enum class IssueKind {
  UndefinedSpecies,
  UndefinedLocation,
  UndefinedParameterOrSymbol,
  UnknownAction,
  OrphanSpecies,
  UninitializedSpecies,
  DuplicateDefinition,
  NonPositiveSize,
};

const char* severity_name(Severity s);
const char* issue_kind_name(IssueKind k);

/// One diagnostic. detail is a complete plain-English sentence, reused
/// verbatim by the narrative Problems section.
struct Issue {
  Severity severity = Severity::Error;
  IssueKind kind = IssueKind::UndefinedSpecies;
  std::string subject;
  std::string detail;

  bool operator==(const Issue&) const = default;
};

/// The count block of the summary report.
struct SummaryCounts {
  long nb_FunctionDefinitions = 0;
  long nb_CompartmentTypes = 0;
  long nb_Compartments = 0;
  long nb_Species = 0;
  long nb_Parameters = 0;
  long nb_InitialAssignments = 0;
  long nb_Rules = 0;
  long nb_Reactions = 0;

  bool operator==(const SummaryCounts&) const = default;
};

struct DiffReport {
  std::vector<std::string> missingSpecies;
  std::vector<std::string> extraSpecies;
  std::vector<std::string> missingReactions;
  std::vector<std::string> extraReactions;
  std::vector<std::string> changedKineticLaws;
  struct ParameterChange {
    std::string name;
    double oldValue = 0.0;
    double newValue = 0.0;

    bool operator==(const ParameterChange&) const = default;
  };
  std::vector<ParameterChange> changedParameters;

  bool empty() const {
    return missingSpecies.empty() && extraSpecies.empty() &&
           missingReactions.empty() && extraReactions.empty() &&
           changedKineticLaws.empty() && changedParameters.empty();
  }

  bool operator==(const DiffReport&) const = default;
};

/// Cross-reference and structural checks. Deterministic: issues are
/// ordered by (severity, kind, subject, detail). Errors cover dangling
/// references, unresolvable kinetic-law symbols, duplicate definitions and
/// non-positive compartment sizes; warnings cover species components
/// never instanced and instances no reaction touches.
std::vector<Issue> validate(const Model& model);

bool has_errors(const std::vector<Issue>& issues);

SummaryCounts summarize(const Model& model);

/// Set differences over species global ids and reaction ids; kinetic laws
/// compared structurally with associative chains canonically ordered;
/// parameters compared by value, |old-new| <= tolerance * max(|old|,|new|)
/// counting as equal (tolerance 0 means exact).
DiffReport diff_models(const Model& reference, const Model& candidate,
                       double tolerance = 0.0);

/// Fig-5a-style count block, one "name : value" line per field.
std::string summary_to_text(const SummaryCounts& counts);
std::string summary_to_json(const SummaryCounts& counts);

std::string issues_to_text(const std::vector<Issue>& issues);
std::string issues_to_json(const std::vector<Issue>& issues);

std::string diff_to_text(const DiffReport& report);
std::string diff_to_json(const DiffReport& report);

}  // namespace epinarr

#endif
