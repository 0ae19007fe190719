#include "commands.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "csv.hpp"
#include "serialize.hpp"
#include "trobust/errors.hpp"
#include "trobust/estimators.hpp"
#include "trobust/presets.hpp"
#include "trobust/profile.hpp"
#include "trobust/simulate.hpp"

namespace trobust::cli {
namespace {

std::string formatG(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string formatHex(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string padRight(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

void writeJsonFile(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << j.dump(2) << "\n";
  if (!out) throw std::runtime_error("failed while writing: " + path);
}

// ---------------------------------------------------------------------------
// CSV -> Dataset

struct LoadedDataset {
  Dataset data;
  std::vector<std::string> columnNames;  // one per design column
  std::string responseName;
};

LoadedDataset loadDataset(const std::string& path, const std::string& responseColumn,
                          bool addIntercept) {
  CsvTable table = readCsv(path);
  std::size_t responseIndex = 0;
  if (!responseColumn.empty()) {
    bool found = false;
    for (std::size_t j = 0; j < table.header.size(); ++j) {
      if (table.header[j] == responseColumn) {
        responseIndex = j;
        found = true;
        break;
      }
    }
    if (!found) {
      std::string columns;
      for (std::size_t j = 0; j < table.header.size(); ++j) {
        if (j) columns += ", ";
        columns += table.header[j];
      }
      throw SchemaError("response: no column named '" + responseColumn +
                        "' (columns: " + columns + ")");
    }
  }

  const std::size_t n = table.rows();
  const std::size_t p = table.cols() - 1 + (addIntercept ? 1 : 0);
  Matrix x(n, p);
  Vector y(n);
  std::vector<std::string> names;
  names.reserve(p);
  if (addIntercept) names.push_back("(intercept)");
  for (std::size_t j = 0; j < table.cols(); ++j) {
    if (j != responseIndex) names.push_back(table.header[j]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = table.values[i][responseIndex];
    std::size_t col = 0;
    if (addIntercept) x(i, col++) = 1.0;
    for (std::size_t j = 0; j < table.cols(); ++j) {
      if (j == responseIndex) continue;
      x(i, col++) = table.values[i][j];
    }
  }
  return {Dataset(std::move(x), std::move(y)), std::move(names),
          table.header[responseIndex]};
}

// ---------------------------------------------------------------------------
// fit

void printNuSummary(const NuEstimationResult& nu, std::size_t n, std::ostream& out) {
  out << "degrees of freedom (" << nuMethodName(nu.method) << "): ";
  if (nu.nuHat.isGaussian()) {
    out << "gaussian limit";
  } else {
    out << formatG(nu.nuHat.nu());
    if (nu.waldSE) out << "   (wald se " << formatG(*nu.waldSE) << ")";
  }
  out << "\n";
  if (!nu.converged) {
    out << "warning: degrees-of-freedom search did not converge\n";
  }
  if (nu.flatnessDetected) {
    out << "warning: likelihood is flat in the degrees of freedom near the "
        << "gaussian limit (stat " << formatG(nu.flatnessStat) << " < threshold "
        << formatG(2.0 * static_cast<double>(n))
        << "); the reported value is unreliable\n";
  }
}

void printFit(const PipelineResult& result, const LoadedDataset& loaded,
              std::ostream& out) {
  const FitResult& fit = result.fit;
  out << "method: " << fit.method << "\n";
  out << "observations: " << loaded.data.n()
      << "   predictors: " << loaded.data.p() << "\n";
  out << "response: " << loaded.responseName << "\n";
  if (result.nuEstimate) printNuSummary(*result.nuEstimate, loaded.data.n(), out);

  std::size_t nameWidth = 4;
  for (const std::string& name : loaded.columnNames) {
    nameWidth = std::max(nameWidth, name.size());
  }
  out << "coefficients:\n";
  for (std::size_t j = 0; j < fit.beta.size(); ++j) {
    out << "  " << padRight(loaded.columnNames[j], nameWidth + 2)
        << padRight(formatG(fit.beta[j]), 14);
    if (fit.stdErrors) out << "(se " << formatG((*fit.stdErrors)[j]) << ")";
    out << "\n";
  }
  out << "scale sigma: " << formatG(fit.sigma);
  if (fit.stdErrors && fit.stdErrors->size() == fit.beta.size() + 1) {
    out << "   (se " << formatG(fit.stdErrors->back()) << ")";
  }
  out << "\n";
  if (std::isfinite(fit.loglik)) {
    out << "log-likelihood: " << formatG(fit.loglik) << "\n";
  }
  if (fit.huberC) out << "huber tuning constant: " << formatG(*fit.huberC) << "\n";
  if (fit.diagnostics.degenerate) {
    out << "warning: degenerate fit (residual variance is numerically zero)\n";
  }
  if (!fit.diagnostics.degenerate && !fit.diagnostics.converged) {
    out << "warning: fit did not converge within the iteration budget\n";
  }
}

void runFit(const std::string& csvPath, const std::string& methodTagText,
            const std::string& responseColumn, bool addIntercept,
            const std::string& outPath) {
  const MethodSpec spec = parseMethodTag(methodTagText);
  const LoadedDataset loaded = loadDataset(csvPath, responseColumn, addIntercept);
  const PipelineResult result = runPipeline(spec, loaded.data, OptimControl{});
  printFit(result, loaded, std::cout);
  if (!outPath.empty()) {
    json j;
    j["fit"] = toJson(result.fit);
    if (result.nuEstimate) {
      j["nu_estimate"] = toJson(*result.nuEstimate);
    } else {
      j["nu_estimate"] = nullptr;
    }
    writeJsonFile(j, outPath);
  }
}

// ---------------------------------------------------------------------------
// estimate-nu

void runEstimateNu(const std::string& csvPath, const std::string& responseColumn,
                   bool addIntercept, const std::string& outPath) {
  const LoadedDataset loaded = loadDataset(csvPath, responseColumn, addIntercept);
  const OptimControl control;

  std::cout << "observations: " << loaded.data.n()
            << "   predictors: " << loaded.data.p() << "\n";
  std::cout << padRight("method", 10) << padRight("nu_hat", 12)
            << padRight("wald_se", 12) << padRight("objective", 14)
            << padRight("converged", 11) << "flat\n";

  json results = json::array();
  bool anyFlat = false;
  for (NuMethod method : {NuMethod::Profile, NuMethod::AdjustedProfile,
                          NuMethod::JeffreysMAP, NuMethod::PseudoPosteriorMAP}) {
    const NuEstimationResult r = estimateNu(method, loaded.data, control);
    anyFlat = anyFlat || r.flatnessDetected;
    std::cout << padRight(nuMethodName(method), 10)
              << padRight(r.nuHat.isGaussian() ? "gaussian" : formatG(r.nuHat.nu()), 12)
              << padRight(r.waldSE ? formatG(*r.waldSE) : "-", 12)
              << padRight(formatG(r.objectiveValue), 14)
              << padRight(r.converged ? "yes" : "no", 11)
              << (r.flatnessDetected ? "yes" : "no") << "\n";
    results.push_back(toJson(r));
  }
  if (anyFlat) {
    std::cout << "warning: likelihood is flat in the degrees of freedom near the "
              << "gaussian limit; estimates are unreliable\n";
  }
  if (!outPath.empty()) writeJsonFile(results, outPath);
}

// ---------------------------------------------------------------------------
// simulate

std::string describeErrors(const ErrorSpec& errors) {
  std::string text = errors.base == ErrorKind::StudentT
                         ? "t" + formatG(errors.nu)
                         : std::string("normal");
  if (errors.contamination != ContaminationKind::None && errors.rate > 0.0) {
    switch (errors.contamination) {
      case ContaminationKind::NormalVar9: text += "+normal-var9"; break;
      case ContaminationKind::ChiSq4Centered: text += "+chisq4-centered"; break;
      case ContaminationKind::T2: text += "+t2"; break;
      case ContaminationKind::TwoPoint: text += "+two-point"; break;
      case ContaminationKind::None: break;
    }
    text += "@" + formatG(errors.rate);
  }
  return text;
}

void printPresetList(std::ostream& out) {
  const std::vector<std::string> names = listPresets();
  std::size_t nameWidth = 6;
  for (const std::string& name : names) nameWidth = std::max(nameWidth, name.size());
  out << padRight("name", nameWidth + 2) << padRight("n", 7) << padRight("p", 5)
      << padRight("errors", 28) << padRight("methods", 9) << "replications\n";
  for (const std::string& name : names) {
    const std::optional<SimulationSpec> spec = findPreset(name);
    if (!spec) continue;
    out << padRight(name, nameWidth + 2)
        << padRight(std::to_string(designRows(spec->design)), 7)
        << padRight(std::to_string(designCols(spec->design)), 5)
        << padRight(describeErrors(spec->errors), 28)
        << padRight(std::to_string(spec->methods.size()), 9)
        << spec->replications << "\n";
  }
}

void printStudySummary(const SimulationSpec& spec, const MetricsReport& report,
                       std::ostream& out) {
  out << "study: " << report.name << "\n";
  out << "design: n=" << report.n << " p=" << report.p
      << " (hash " << formatHex(report.designHash) << ")   errors: "
      << describeErrors(spec.errors) << "\n";
  out << "replications: " << report.replications
      << "   seed: " << report.masterSeed << "\n";

  std::size_t labelWidth = 7;
  for (const MethodReport& m : report.methods) {
    labelWidth = std::max(labelWidth, m.label.size());
  }
  out << padRight("method", labelWidth + 2) << padRight("rmse_beta", 12)
      << padRight("nu_rmse", 11) << padRight("nu_bias", 11)
      << padRight("nu_se", 11) << padRight("ok", 6) << padRight("fail", 6)
      << padRight("flat", 6) << "capped\n";
  for (const MethodReport& m : report.methods) {
    out << padRight(m.label, labelWidth + 2)
        << padRight(formatG(m.rmseBetaValue), 12);
    if (m.nuApplicable && m.nu.count > 0) {
      out << padRight(m.nu.undefined ? "na" : formatG(m.nu.rmse), 11)
          << padRight(formatG(m.nu.bias), 11)
          << padRight(m.nu.undefined ? "na" : formatG(m.nu.se), 11);
    } else {
      out << padRight("-", 11) << padRight("-", 11) << padRight("-", 11);
    }
    out << padRight(std::to_string(m.successes), 6)
        << padRight(std::to_string(m.convergenceFailures), 6)
        << padRight(std::to_string(m.flatnessFlagged), 6)
        << m.gaussianCapped << "\n";
  }
  for (const MethodReport& m : report.methods) {
    if (m.errorFailures > 0) {
      out << "note: " << m.label << ": " << m.errorFailures
          << " replication(s) raised errors (first: " << m.firstError << ")\n";
    }
  }
  out << "wall time: " << formatG(report.wallSeconds) << " s\n";
}

int threadsFromEnvironment() {
  const char* text = std::getenv("TROBUST_THREADS");
  if (!text) return 0;
  char* end = nullptr;
  const long value = std::strtol(text, &end, 10);
  if (end == text || *end != '\0' || value < 1 || value > 4096) return 0;
  return static_cast<int>(value);
}

struct SimulateArgs {
  std::string presetName;
  std::string specPath;
  std::string outPath;
  std::string csvPath;
  int replications = 0;
  std::uint64_t seed = 0;
  int threads = -1;
  bool details = false;
  bool listOnly = false;
  bool replicationsSet = false;
  bool seedSet = false;
};

void runSimulate(const SimulateArgs& args) {
  if (args.listOnly) {
    printPresetList(std::cout);
    return;
  }

  SimulationSpec spec;
  if (!args.presetName.empty()) {
    std::optional<SimulationSpec> preset = findPreset(args.presetName);
    if (!preset) {
      throw SchemaError("preset: unknown name '" + args.presetName +
                        "' (run with --list-presets)");
    }
    spec = std::move(*preset);
  } else {
    std::ifstream in(args.specPath);
    if (!in) throw SchemaError("spec: cannot open file: " + args.specPath);
    json j;
    try {
      j = json::parse(in);
    } catch (const json::parse_error& e) {
      throw SchemaError(std::string("spec: ") + e.what());
    }
    try {
      spec = simulationSpecFromJson(j);
    } catch (const json::exception& e) {
      throw SchemaError(std::string("spec: ") + e.what());
    }
  }

  if (args.replicationsSet) spec.replications = args.replications;
  if (args.seedSet) spec.masterSeed = args.seed;
  if (args.threads >= 0) {
    spec.threads = args.threads;
  } else if (spec.threads == 0) {
    spec.threads = threadsFromEnvironment();
  }
  if (args.details) spec.keepReplicationDetails = true;
  validateSpec(spec);

  const MetricsReport report = runStudy(spec);
  printStudySummary(spec, report, std::cout);
  if (!args.outPath.empty()) writeJsonFile(toJson(report), args.outPath);
  if (!args.csvPath.empty()) {
    std::ofstream out(args.csvPath);
    if (!out) throw std::runtime_error("cannot open output file: " + args.csvPath);
    writeMetricsCsv(report, out);
    if (!out) throw std::runtime_error("failed while writing: " + args.csvPath);
  }
}

}  // namespace

int runCli(int argc, char** argv) {
  CLI::App app{"robust linear regression with student-t errors"};
  app.set_version_flag("--version", "trobust 0.1.0");
  app.require_subcommand(1);

  // fit ----------------------------------------------------------------
  std::string fitCsv, fitMethod = "profile", fitResponse, fitOut;
  double fitNu = 0.0;
  bool fitIntercept = true;
  CLI::App* fit = app.add_subcommand(
      "fit", "Fit one regression to a CSV file (first column = response)");
  fit->add_option("csv", fitCsv, "data file: header row, then numeric rows")
      ->required()
      ->check(CLI::ExistingFile);
  CLI::Option* fitMethodOpt = fit->add_option(
      "--method", fitMethod,
      "profile | adjusted | jeffreys | pseudo | fixed:<nu> | ols | huber | "
      "huber:auto | huber:<c>");
  CLI::Option* fitNuOpt =
      fit->add_option("--nu", fitNu, "shorthand for --method fixed:<nu>")
          ->check(CLI::PositiveNumber);
  fitNuOpt->excludes(fitMethodOpt);
  fit->add_option("--response", fitResponse,
                  "response column name (default: first column)");
  fit->add_flag("--add-intercept,!--no-intercept", fitIntercept,
                "prepend a column of ones (default: on)");
  fit->add_option("--out", fitOut, "write the fit as JSON to this file");
  fit->callback([&] {
    std::string tag = fitMethod;
    if (fitNuOpt->count() > 0) tag = "fixed:" + formatG(fitNu);
    runFit(fitCsv, tag, fitResponse, fitIntercept, fitOut);
  });

  // estimate-nu ----------------------------------------------------------
  std::string estCsv, estResponse, estOut;
  bool estIntercept = true;
  CLI::App* est = app.add_subcommand(
      "estimate-nu",
      "Estimate the error degrees of freedom by all four criteria");
  est->add_option("csv", estCsv, "data file: header row, then numeric rows")
      ->required()
      ->check(CLI::ExistingFile);
  est->add_option("--response", estResponse,
                  "response column name (default: first column)");
  est->add_flag("--add-intercept,!--no-intercept", estIntercept,
                "prepend a column of ones (default: on)");
  est->add_option("--out", estOut, "write all four results as a JSON array");
  est->callback([&] { runEstimateNu(estCsv, estResponse, estIntercept, estOut); });

  // simulate ----------------------------------------------------------
  SimulateArgs simArgs;
  CLI::App* sim = app.add_subcommand(
      "simulate", "Run a replication study from a preset or a JSON spec");
  CLI::Option* presetOpt =
      sim->add_option("--preset", simArgs.presetName, "named study configuration");
  CLI::Option* specOpt =
      sim->add_option("--spec", simArgs.specPath, "study specification JSON file")
          ->check(CLI::ExistingFile);
  CLI::Option* listOpt = sim->add_flag("--list-presets", simArgs.listOnly,
                                       "print the preset catalog and exit");
  presetOpt->excludes(specOpt);
  listOpt->excludes(presetOpt);
  listOpt->excludes(specOpt);
  CLI::Option* repOpt =
      sim->add_option("--replications", simArgs.replications,
                      "override the spec's replication count")
          ->check(CLI::PositiveNumber);
  CLI::Option* seedOpt =
      sim->add_option("--seed", simArgs.seed, "override the spec's master seed");
  sim->add_option("--threads", simArgs.threads,
                  "worker threads (0 = all cores; default: spec, then "
                  "TROBUST_THREADS)")
      ->check(CLI::NonNegativeNumber);
  sim->add_flag("--details", simArgs.details,
                "keep per-replication rows in the JSON output");
  sim->add_option("--out", simArgs.outPath, "write the metrics report as JSON");
  sim->add_option("--csv", simArgs.csvPath,
                  "write the metrics as a long-format CSV");
  sim->callback([&] {
    simArgs.replicationsSet = repOpt->count() > 0;
    simArgs.seedSet = seedOpt->count() > 0;
    if (!simArgs.listOnly && simArgs.presetName.empty() && simArgs.specPath.empty()) {
      throw CLI::RequiredError(
          "simulate: exactly one of --preset or --spec (or --list-presets)");
    }
    runSimulate(simArgs);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const CsvParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const SchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DimensionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace trobust::cli
