#include "epinarr/narrative.hpp"

#include "epinarr/errors.hpp"
#include "epinarr/numfmt.hpp"
#include "epinarr/xml.hpp"

namespace epinarr {

namespace {

// Every sentence template in one place.
namespace tpl {
constexpr const char* kCompartment = "%NAME% is a %KIND% inside %PARENT% with size %SIZE%.";
constexpr const char* kCompartmentNoParent = "%NAME% is a %KIND% with size %SIZE%.";
constexpr const char* kSpecies = "%NAME% in %LOC% starts with %AMOUNT% individuals.";
constexpr const char* kSpeciesNoLoc = "%NAME% starts with %AMOUNT% individuals.";
constexpr const char* kParameter = "%NAME% is a parameter with value %VALUE%.";
constexpr const char* kLocalParameter =
    "%NAME% is a parameter of reaction %REACTION% with value %VALUE%.";
constexpr const char* kEvent = "At time %TIME%, event %NAME% sets %ASSIGNMENTS%.";
constexpr const char* kReactionHead = "Reaction %ID%: ";
constexpr const char* kConsumes = "consumes ";
constexpr const char* kProduces = "produces ";
constexpr const char* kInfluenced = "influenced by ";
constexpr const char* kAtRate = "at rate ";
}  // namespace tpl

std::string subst(std::string text, const std::string& key,
                 const std::string& value) {
  size_t pos = text.find(key);
  while (pos != std::string::npos) {
    text.replace(pos, key.size(), value);
    pos = text.find(key, pos + value.size());
  }
  return text;
}

// "1 S in Age1" — the participant as the expert knows it.
std::string participant_phrase(const std::string& globalId, int stoichiometry,
                               bool withCount, const Model& model) {
  std::string phrase;
  if (withCount) phrase += std::to_string(stoichiometry) + " ";
  if (const SpeciesInstance* inst = model.find_instance(globalId)) {
    phrase += inst->species;
    if (inst->location) phrase += " in " + *inst->location;
  } else {
    phrase += globalId;
  }
  return phrase;
}

std::string size_text(const Location& loc, const Model& model) {
  Env env;
  for (const auto& p : model.parameters) env[p.name] = p.value;
  try {
    return format_double(eval_expr(loc.size, env));
  } catch (const EvalError&) {
    return expr_to_infix(loc.size);  // narrated as written; a Problem anyway
  }
}

}  // namespace

std::string narrate_reaction(const Reaction& reaction, const Model& model) {
  std::vector<std::string> clauses;

  auto joined = [&](const std::vector<std::pair<std::string, int>>& side,
                    bool withCount) {
    std::string text;
    for (size_t i = 0; i < side.size(); ++i) {
      if (i) text += ", ";
      text += participant_phrase(side[i].first, side[i].second, withCount,
                                 model);
    }
    return text;
  };

  if (!reaction.reactants.empty())
    clauses.push_back(tpl::kConsumes + joined(reaction.reactants, true));
  if (!reaction.products.empty())
    clauses.push_back(tpl::kProduces + joined(reaction.products, true));
  if (!reaction.modifiers.empty()) {
    std::string text;
    for (size_t i = 0; i < reaction.modifiers.size(); ++i) {
      if (i) text += ", ";
      text += participant_phrase(reaction.modifiers[i], 1, false, model);
    }
    clauses.push_back(tpl::kInfluenced + text);
  }
  clauses.push_back(tpl::kAtRate + expr_to_infix(reaction.kineticLaw));

  std::string sentence = subst(tpl::kReactionHead, "%ID%", reaction.id);
  for (size_t i = 0; i < clauses.size(); ++i) {
    if (i) sentence += "; ";
    sentence += clauses[i];
  }
  sentence += ".";
  return sentence;
}

NarrativeDoc build_narrative(const Model& model, NarrativeFormat format) {
  NarrativeDoc doc;
  doc.format = format;
  doc.title = "Model " + model.name;
  doc.summary = summarize(model);

  std::vector<std::string> compartments;
  for (const auto& loc : model.locations) {
    std::string s = loc.parent ? tpl::kCompartment : tpl::kCompartmentNoParent;
    s = subst(s, "%NAME%", loc.name);
    s = subst(s, "%KIND%",
             loc.kind == LocationKind::Compartment ? "compartment" : "membrane");
    if (loc.parent) s = subst(s, "%PARENT%", *loc.parent);
    s = subst(s, "%SIZE%", size_text(loc, model));
    compartments.push_back(std::move(s));
  }
  doc.sections.emplace_back("Compartments", std::move(compartments));

  std::vector<std::string> species;
  for (const auto& inst : model.systemEquation) {
    std::string s = inst.location ? tpl::kSpecies : tpl::kSpeciesNoLoc;
    s = subst(s, "%NAME%", inst.species);
    if (inst.location) s = subst(s, "%LOC%", *inst.location);
    s = subst(s, "%AMOUNT%", format_double(inst.initialAmount));
    species.push_back(std::move(s));
  }
  doc.sections.emplace_back("Species", std::move(species));

  std::vector<std::string> parameters;
  for (const auto& p : model.parameters) {
    std::string s = p.origin.local ? tpl::kLocalParameter : tpl::kParameter;
    s = subst(s, "%NAME%", p.name);
    if (p.origin.local) s = subst(s, "%REACTION%", p.origin.reaction);
    s = subst(s, "%VALUE%", format_double(p.value));
    parameters.push_back(std::move(s));
  }
  doc.sections.emplace_back("Parameters", std::move(parameters));

  std::vector<std::string> reactions;
  for (const auto& r : derive_reactions_tolerant(model))
    reactions.push_back(narrate_reaction(r, model));
  doc.sections.emplace_back("Reactions", std::move(reactions));

  if (!model.events.empty()) {
    std::vector<std::string> events;
    for (const auto& ev : model.events) {
      std::string assignments;
      for (size_t i = 0; i < ev.assignments.size(); ++i) {
        if (i) assignments += ", ";
        assignments += ev.assignments[i].target + " = " +
                       expr_to_infix(ev.assignments[i].value);
      }
      std::string s = subst(tpl::kEvent, "%TIME%",
                           format_double(ev.triggerTime));
      s = subst(s, "%NAME%", ev.name);
      s = subst(s, "%ASSIGNMENTS%", assignments);
      events.push_back(std::move(s));
    }
    doc.sections.emplace_back("Events", std::move(events));
  }

  std::vector<std::string> problems;
  for (const auto& issue : validate(model)) problems.push_back(issue.detail);
  doc.sections.emplace_back("Problems", std::move(problems));

  return doc;
}

namespace {

std::string render_plain(const NarrativeDoc& doc) {
  std::string out = doc.title + "\n";
  out += std::string(doc.title.size(), '=') + "\n\n";
  out += "Summary\n-------\n";
  out += summary_to_text(doc.summary);
  for (const auto& [heading, sentences] : doc.sections) {
    out += "\n" + heading + "\n" + std::string(heading.size(), '-') + "\n";
    for (const auto& s : sentences) out += s + "\n";
  }
  return out;
}

std::string render_markdown(const NarrativeDoc& doc) {
  std::string out = "# " + doc.title + "\n\n## Summary\n\n";
  std::string summary = summary_to_text(doc.summary);
  size_t start = 0;
  while (start < summary.size()) {
    size_t end = summary.find('\n', start);
    out += "- " + summary.substr(start, end - start) + "\n";
    start = end + 1;
  }
  for (const auto& [heading, sentences] : doc.sections) {
    out += "\n## " + heading + "\n\n";
    for (const auto& s : sentences) out += "- " + s + "\n";
  }
  return out;
}

std::string render_html(const NarrativeDoc& doc) {
  std::string out =
      "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n"
      "<meta charset=\"utf-8\"/>\n<title>" +
      xml_escape(doc.title) +
      "</title>\n<style>\n"
      "body { font-family: sans-serif; max-width: 50em; margin: 2em auto; }\n"
      "h1 { border-bottom: 2px solid #444; }\n"
      "table { border-collapse: collapse; }\n"
      "td { border: 1px solid #999; padding: 0.2em 0.6em; }\n"
      "</style>\n</head>\n<body>\n";
  out += "<h1>" + xml_escape(doc.title) + "</h1>\n";
  out += "<h2>Summary</h2>\n<table>\n";
  std::string summary = summary_to_text(doc.summary);
  size_t start = 0;
  while (start < summary.size()) {
    size_t end = summary.find('\n', start);
    std::string line = summary.substr(start, end - start);
    size_t sep = line.find(" : ");
    out += "<tr><td>" + xml_escape(line.substr(0, sep)) + "</td><td>" +
           xml_escape(line.substr(sep + 3)) + "</td></tr>\n";
    start = end + 1;
  }
  out += "</table>\n";
  for (const auto& [heading, sentences] : doc.sections) {
    out += "<h2>" + xml_escape(heading) + "</h2>\n";
    for (const auto& s : sentences) out += "<p>" + xml_escape(s) + "</p>\n";
  }
  out += "</body>\n</html>\n";
  return out;
}

}  // namespace

std::string render_narrative(const NarrativeDoc& doc) {
  switch (doc.format) {
    case NarrativeFormat::Markdown: return render_markdown(doc);
    case NarrativeFormat::Html: return render_html(doc);
    default: return render_plain(doc);
  }
}

std::string narrate(const Model& model, NarrativeFormat format) {
  return render_narrative(build_narrative(model, format));
}

}  // namespace epinarr
