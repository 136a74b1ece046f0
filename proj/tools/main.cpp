// epinarr — author Bio-PEPA models, exchange them as SBML, and let a
// domain expert check them through narrative reports, validation, diffs
// and simulation.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <unistd.h>

#include <CLI11.hpp>

#include "epinarr/analysis.hpp"
#include "epinarr/errors.hpp"
#include "epinarr/narrative.hpp"
#include "epinarr/parser.hpp"
#include "epinarr/render.hpp"
#include "epinarr/sbml.hpp"
#include "epinarr/sim.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

// Stable across releases; scripts depend on these.
enum ExitCode {
  kOk = 0,
  kValidationErrors = 1,
  kParseOrSchemaError = 2,
  kIoError = 3,
  kNumericalFailure = 4,
};

bool use_color() {
  const char* env = std::getenv("EPINARR_COLOR");
  if (env && std::string(env) == "never") return false;
  return isatty(2) != 0;
}

void print_error(const std::string& message) {
  if (use_color()) {
    std::cerr << "\033[31merror:\033[0m " << message << "\n";
  } else {
    std::cerr << "error: " << message << "\n";
  }
}

void print_warning(const std::string& message) {
  if (use_color()) {
    std::cerr << "\033[33mwarning:\033[0m " << message << "\n";
  } else {
    std::cerr << "warning: " << message << "\n";
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw epinarr::IoError(path, "cannot open for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw epinarr::IoError(path, "read failed");
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw epinarr::IoError(path, "cannot open for writing");
  out << content;
  out.flush();
  if (!out) throw epinarr::IoError(path, "write failed");
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
  } else {
    write_file(path, content);
  }
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// "" = decide by extension, else "biopepa" / "sbml".
epinarr::Model load_model(const std::string& path, const std::string& format) {
  std::string fmt = format;
  if (fmt.empty()) {
    if (ends_with(path, ".biopepa")) {
      fmt = "biopepa";
    } else if (ends_with(path, ".xml") || ends_with(path, ".sbml")) {
      fmt = "sbml";
    } else {
      throw epinarr::ConfigError("cannot tell the format of \"" + path +
                                 "\"; use --in-format biopepa|sbml");
    }
  }
  const std::string text = read_file(path);
  return fmt == "sbml" ? epinarr::import_sbml(text)
                       : epinarr::parse_model(text);
}

std::string strip_csv_suffix(std::string prefix) {
  if (ends_with(prefix, ".csv")) prefix.resize(prefix.size() - 4);
  return prefix;
}

int run(int argc, char** argv) {
  CLI::App app{"Bio-PEPA epidemic-model toolkit: parse, export SBML, "
               "narrate, validate, diff, simulate"};
  app.set_version_flag("--version", std::string("epinarr ") + kVersion);
  app.require_subcommand(1);

  std::string inFormat;
  auto add_in_format = [&](CLI::App* cmd) {
    cmd->add_option("--in-format", inFormat,
                    "Input format (biopepa|sbml); default by extension")
        ->check(CLI::IsMember({"biopepa", "sbml"}));
  };

  // parse
  std::string parseFile;
  CLI::App* cmdParse = app.add_subcommand("parse", "Syntax-check a model");
  cmdParse->add_option("file", parseFile, "Model file")->required();
  add_in_format(cmdParse);

  // export
  std::string exportFile, exportOut;
  CLI::App* cmdExport =
      app.add_subcommand("export", "Write the model as SBML Level 2");
  cmdExport->add_option("file", exportFile, "Model file")->required();
  cmdExport->add_option("-o,--output", exportOut, "Output file (default stdout)");
  add_in_format(cmdExport);

  // import
  std::string importFile, importOut;
  CLI::App* cmdImport =
      app.add_subcommand("import", "Read SBML and write canonical Bio-PEPA");
  cmdImport->add_option("file", importFile, "Model file")->required();
  cmdImport->add_option("-o,--output", importOut, "Output file (default stdout)");
  add_in_format(cmdImport);

  // narrate
  std::string narrateFile, narrateOut, narrateFormat = "txt";
  CLI::App* cmdNarrate =
      app.add_subcommand("narrate", "Render the narrative report");
  cmdNarrate->add_option("file", narrateFile, "Model file")->required();
  cmdNarrate->add_option("--format", narrateFormat, "txt, md, or html")
      ->check(CLI::IsMember({"txt", "md", "html"}));
  cmdNarrate->add_option("-o,--output", narrateOut, "Output file (default stdout)");
  add_in_format(cmdNarrate);

  // validate
  std::string validateFile;
  bool validateJson = false;
  CLI::App* cmdValidate = app.add_subcommand("validate", "Run model checks");
  cmdValidate->add_option("file", validateFile, "Model file")->required();
  cmdValidate->add_flag("--json", validateJson, "JSON report");
  add_in_format(cmdValidate);

  // summary
  std::string summaryFile;
  bool summaryJson = false;
  CLI::App* cmdSummary =
      app.add_subcommand("summary", "Print the component count block");
  cmdSummary->add_option("file", summaryFile, "Model file")->required();
  cmdSummary->add_flag("--json", summaryJson, "JSON report");
  add_in_format(cmdSummary);

  // diff
  std::string diffRef, diffCand;
  bool diffJson = false;
  double diffTolerance = 0.0;
  CLI::App* cmdDiff =
      app.add_subcommand("diff", "Report differences between two models");
  cmdDiff->add_option("reference", diffRef, "Reference model")->required();
  cmdDiff->add_option("candidate", diffCand, "Candidate model")->required();
  cmdDiff->add_flag("--json", diffJson, "JSON report");
  cmdDiff->add_option("--tolerance", diffTolerance,
                      "Relative tolerance for parameter comparison");
  add_in_format(cmdDiff);

  // simulate
  std::string simFile, simMode, simOut;
  epinarr::SimConfig simCfg;
  CLI::App* cmdSim = app.add_subcommand("simulate", "Run ODE or SSA");
  cmdSim->add_option("file", simFile, "Model file")->required();
  cmdSim->add_option("--mode", simMode, "ode or ssa")
      ->required()
      ->check(CLI::IsMember({"ode", "ssa"}));
  cmdSim->add_option("--t-end", simCfg.tEnd, "End time")->required();
  cmdSim->add_option("--dt", simCfg.dt, "ODE step (default 0.01)");
  cmdSim->add_option("--output-every", simCfg.outputEvery,
                     "Sampling interval (default dt for ode, t-end/1000 for ssa)");
  cmdSim->add_option("--replicates", simCfg.replicates,
                     "SSA replicate count (default 1)");
  cmdSim->add_option("--seed", simCfg.seed, "SSA seed (default 0)");
  cmdSim->add_option("-o,--output", simOut,
                     "Output prefix; replicate files get _r<k>.csv");
  add_in_format(cmdSim);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kParseOrSchemaError;
  }

  if (cmdParse->parsed()) {
    epinarr::Model model = load_model(parseFile, inFormat);
    const auto counts = epinarr::summarize(model);
    std::cout << "parsed " << parseFile << ": " << counts.nb_Species
              << " species, " << counts.nb_Reactions << " reactions, "
              << counts.nb_Compartments << " compartments\n";
    return kOk;
  }

  if (cmdExport->parsed()) {
    epinarr::Model model = load_model(exportFile, inFormat);
    for (const auto& w : epinarr::export_warnings(model)) print_warning(w);
    write_output(exportOut, epinarr::export_sbml(model));
    return kOk;
  }

  if (cmdImport->parsed()) {
    epinarr::Model model = load_model(
        importFile, inFormat.empty() && ends_with(importFile, ".biopepa")
                        ? "biopepa"
                        : inFormat);
    write_output(importOut, epinarr::render_model(model));
    return kOk;
  }

  if (cmdNarrate->parsed()) {
    epinarr::Model model = load_model(narrateFile, inFormat);
    epinarr::NarrativeFormat fmt =
        narrateFormat == "md"     ? epinarr::NarrativeFormat::Markdown
        : narrateFormat == "html" ? epinarr::NarrativeFormat::Html
                                  : epinarr::NarrativeFormat::PlainText;
    write_output(narrateOut, epinarr::narrate(model, fmt));
    return kOk;
  }

  if (cmdValidate->parsed()) {
    epinarr::Model model = load_model(validateFile, inFormat);
    const auto issues = epinarr::validate(model);
    std::cout << (validateJson ? epinarr::issues_to_json(issues)
                               : epinarr::issues_to_text(issues));
    return epinarr::has_errors(issues) ? kValidationErrors : kOk;
  }

  if (cmdSummary->parsed()) {
    epinarr::Model model = load_model(summaryFile, inFormat);
    const auto counts = epinarr::summarize(model);
    std::cout << (summaryJson ? epinarr::summary_to_json(counts)
                              : epinarr::summary_to_text(counts));
    return kOk;
  }

  if (cmdDiff->parsed()) {
    epinarr::Model reference = load_model(diffRef, inFormat);
    epinarr::Model candidate = load_model(diffCand, inFormat);
    const auto report =
        epinarr::diff_models(reference, candidate, diffTolerance);
    std::cout << (diffJson ? epinarr::diff_to_json(report)
                           : epinarr::diff_to_text(report));
    return report.empty() ? kOk : kValidationErrors;
  }

  if (cmdSim->parsed()) {
    epinarr::Model model = load_model(simFile, inFormat);
    if (simMode == "ode") {
      epinarr::Trajectory traj = epinarr::simulate_ode(model, simCfg);
      if (simOut.empty()) {
        std::cout << epinarr::trajectory_to_csv(traj);
      } else {
        epinarr::write_trajectory_csv(traj,
                                      strip_csv_suffix(simOut) + ".csv");
      }
      return kOk;
    }
    const auto replicates = epinarr::simulate_ssa(model, simCfg);
    if (simOut.empty()) {
      if (replicates.size() > 1)
        throw epinarr::ConfigError(
            "simulate --mode ssa with --replicates > 1 needs -o <prefix>");
      std::cout << epinarr::trajectory_to_csv(replicates.front());
      return kOk;
    }
    const std::string prefix = strip_csv_suffix(simOut);
    for (size_t r = 0; r < replicates.size(); ++r)
      epinarr::write_trajectory_csv(
          replicates[r], prefix + "_r" + std::to_string(r + 1) + ".csv");
    if (replicates.size() > 1)
      epinarr::write_trajectory_csv(epinarr::mean_trajectory(replicates),
                                    prefix + "_mean.csv");
    return kOk;
  }

  return kParseOrSchemaError;  // unreachable with require_subcommand(1)
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const epinarr::ParseError& e) {
    print_error(e.what());
    return kParseOrSchemaError;
  } catch (const epinarr::XmlError& e) {
    print_error(e.what());
    return kParseOrSchemaError;
  } catch (const epinarr::SchemaError& e) {
    print_error(e.what());
    return kParseOrSchemaError;
  } catch (const epinarr::UnresolvedReference& e) {
    print_error(e.what());
    return kParseOrSchemaError;
  } catch (const epinarr::UnsupportedMathml& e) {
    print_error(e.what());
    return kParseOrSchemaError;
  } catch (const epinarr::ConfigError& e) {
    print_error(e.what());
    return kParseOrSchemaError;
  } catch (const epinarr::ValidationFailed& e) {
    print_error(e.what());
    return kValidationErrors;
  } catch (const epinarr::UnknownAction& e) {
    print_error(e.what());
    return kValidationErrors;
  } catch (const epinarr::NonIntegerInitialAmount& e) {
    print_error(e.what());
    return kValidationErrors;
  } catch (const epinarr::NumericalBlowup& e) {
    print_error(e.what());
    return kNumericalFailure;
  } catch (const epinarr::EvalError& e) {
    print_error(e.what());
    return kNumericalFailure;
  } catch (const epinarr::IoError& e) {
    print_error(e.what());
    return kIoError;
  } catch (const std::exception& e) {
    print_error(e.what());
    return kParseOrSchemaError;
  }
}
