#ifndef EPINARR_NARRATIVE_HPP
#define EPINARR_NARRATIVE_HPP

#include <string>
#include <utility>
#include <vector>

#include "epinarr/analysis.hpp"
#include "epinarr/model.hpp"

namespace epinarr {

enum class NarrativeFormat { PlainText, Markdown, Html };

/// A model rendered as sentences a domain expert can check: every species,
/// compartment, parameter and reaction appears in exactly one sentence,
/// and validator findings are spelled out in the Problems section.
struct NarrativeDoc {
  std::string title;
  SummaryCounts summary;
  std::vector<std::pair<std::string, std::vector<std::string>>> sections;
  NarrativeFormat format = NarrativeFormat::PlainText;
};

NarrativeDoc build_narrative(const Model& model, NarrativeFormat format);

std::string render_narrative(const NarrativeDoc& doc);

/// build + render.
std::string narrate(const Model& model, NarrativeFormat format);

/// "Reaction <id>: consumes ...; produces ...; influenced by ...; at rate
/// <law>." Empty clauses are omitted.
std::string narrate_reaction(const Reaction& reaction, const Model& model);

}  // namespace epinarr

#endif
