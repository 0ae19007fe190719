#include "serialize.hpp"

#include <cmath>
#include <limits>
#include <set>
#include <string>

#include "trobust/errors.hpp"

namespace trobust::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

json numberOrNull(double value) {
  if (std::isfinite(value)) return value;
  return nullptr;
}

double numberFromJson(const json& j, const std::string& field) {
  if (j.is_null()) return kNaN;
  if (!j.is_number()) {
    throw SchemaError(field + ": expected a number or null");
  }
  return j.get<double>();
}

json dofToJson(const DegreesOfFreedom& dof) {
  if (dof.isGaussian()) return "gaussian";
  return dof.nu();
}

DegreesOfFreedom dofFromJson(const json& j, const std::string& field) {
  if (j.is_string()) {
    if (j.get<std::string>() == "gaussian") return DegreesOfFreedom::gaussianLimit();
    throw SchemaError(field + ": expected a positive number or \"gaussian\"");
  }
  if (!j.is_number()) {
    throw SchemaError(field + ": expected a positive number or \"gaussian\"");
  }
  return DegreesOfFreedom::finite(j.get<double>());
}

void requireKeys(const json& j, const std::set<std::string>& allowed,
                 const std::string& context) {
  if (!j.is_object()) throw SchemaError(context + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) {
      throw SchemaError(context + "." + key + ": unknown field");
    }
  }
}

}  // namespace

json toJson(const FitResult& fit) {
  json j;
  j["method"] = fit.method;
  j["beta"] = fit.beta;
  j["sigma"] = numberOrNull(fit.sigma);
  j["nu"] = dofToJson(fit.nuUsed);
  j["loglik"] = numberOrNull(fit.loglik);
  if (fit.stdErrors) {
    j["std_errors"] = *fit.stdErrors;
  } else {
    j["std_errors"] = nullptr;
  }
  if (fit.huberC) {
    j["huber_c"] = *fit.huberC;
  } else {
    j["huber_c"] = nullptr;
  }
  j["diagnostics"] = {
      {"iterations", fit.diagnostics.iterations},
      {"converged", fit.diagnostics.converged},
      {"degenerate", fit.diagnostics.degenerate},
      {"loglik_trace", fit.diagnostics.loglikTrace},
  };
  return j;
}

FitResult fitResultFromJson(const json& j) {
  requireKeys(j, {"method", "beta", "sigma", "nu", "loglik", "std_errors",
                  "huber_c", "diagnostics"},
              "fit");
  FitResult fit;
  fit.method = j.at("method").get<std::string>();
  fit.beta = j.at("beta").get<Vector>();
  fit.sigma = numberFromJson(j.at("sigma"), "fit.sigma");
  fit.nuUsed = dofFromJson(j.at("nu"), "fit.nu");
  fit.loglik = numberFromJson(j.at("loglik"), "fit.loglik");
  if (!j.at("std_errors").is_null()) {
    fit.stdErrors = j.at("std_errors").get<Vector>();
  }
  if (!j.at("huber_c").is_null()) {
    fit.huberC = j.at("huber_c").get<double>();
  }
  const json& d = j.at("diagnostics");
  requireKeys(d, {"iterations", "converged", "degenerate", "loglik_trace"},
              "fit.diagnostics");
  fit.diagnostics.iterations = d.at("iterations").get<int>();
  fit.diagnostics.converged = d.at("converged").get<bool>();
  fit.diagnostics.degenerate = d.at("degenerate").get<bool>();
  fit.diagnostics.loglikTrace = d.at("loglik_trace").get<std::vector<double>>();
  return fit;
}

json toJson(const NuEstimationResult& result) {
  json j;
  j["method"] = nuMethodName(result.method);
  j["nu_hat"] = dofToJson(result.nuHat);
  j["omega_hat"] = result.omegaHat;
  j["objective_value"] = numberOrNull(result.objectiveValue);
  j["converged"] = result.converged;
  j["flatness_detected"] = result.flatnessDetected;
  j["flatness_stat"] = result.flatnessStat;
  if (result.waldSE) {
    j["wald_se"] = *result.waldSE;
  } else {
    j["wald_se"] = nullptr;
  }
  j["outer_evaluations"] = result.outerEvaluations;
  j["inner_iterations_total"] = result.innerIterationsTotal;
  return j;
}

json toJson(const MetricsReport& report) {
  json methods = json::array();
  for (const MethodReport& m : report.methods) {
    json jm;
    jm["label"] = m.label;
    jm["successes"] = m.successes;
    jm["convergence_failures"] = m.convergenceFailures;
    jm["flatness_flagged"] = m.flatnessFlagged;
    jm["error_failures"] = m.errorFailures;
    jm["gaussian_capped"] = m.gaussianCapped;
    jm["rmse_beta"] = numberOrNull(m.rmseBetaValue);
    jm["nu_applicable"] = m.nuApplicable;
    jm["nu"] = {
        {"rmse", numberOrNull(m.nu.rmse)},     {"bias", numberOrNull(m.nu.bias)},
        {"se", numberOrNull(m.nu.se)},         {"se_pop", numberOrNull(m.nu.sePop)},
        {"count", m.nu.count},                 {"undefined", m.nu.undefined},
    };
    jm["first_error"] = m.firstError;
    methods.push_back(std::move(jm));
  }

  json j;
  j["name"] = report.name;
  j["n"] = report.n;
  j["p"] = report.p;
  if (report.nuTrue) {
    j["nu_true"] = *report.nuTrue;
  } else {
    j["nu_true"] = nullptr;
  }
  j["replications"] = report.replications;
  j["master_seed"] = report.masterSeed;
  j["design_hash"] = report.designHash;
  j["methods"] = std::move(methods);
  j["wall_seconds"] = report.wallSeconds;
  if (!report.details.empty()) {
    json details = json::array();
    for (const ReplicationDetail& d : report.details) {
      details.push_back({
          {"replication", d.replication},
          {"method", d.method},
          {"outcome", d.outcome},
          {"beta", d.beta},
          {"nu_value", numberOrNull(d.nuValue)},
          {"gaussian_limit", d.gaussianLimit},
          {"flatness", d.flatness},
          {"error", d.error},
      });
    }
    j["details"] = std::move(details);
  }
  return j;
}

namespace {

DesignMode designModeFromText(const std::string& text) {
  if (text == "gaussian-iid") return DesignMode::GaussianIID;
  if (text == "stackloss-original") return DesignMode::StacklossOriginal;
  if (text == "stackloss-hybrid") return DesignMode::StacklossHybrid;
  throw SchemaError("design.mode: unknown mode '" + text +
                    "' (expected gaussian-iid, stackloss-original, or "
                    "stackloss-hybrid)");
}

std::string designModeText(DesignMode mode) {
  switch (mode) {
    case DesignMode::GaussianIID: return "gaussian-iid";
    case DesignMode::StacklossOriginal: return "stackloss-original";
    case DesignMode::StacklossHybrid: return "stackloss-hybrid";
  }
  return "unknown";
}

ContaminationKind contaminationFromText(const std::string& text) {
  if (text == "none") return ContaminationKind::None;
  if (text == "normal-var9") return ContaminationKind::NormalVar9;
  if (text == "chisq4-centered") return ContaminationKind::ChiSq4Centered;
  if (text == "t2") return ContaminationKind::T2;
  if (text == "two-point") return ContaminationKind::TwoPoint;
  throw SchemaError("errors.contamination: unknown kind '" + text +
                    "' (expected none, normal-var9, chisq4-centered, t2, or "
                    "two-point)");
}

std::string contaminationText(ContaminationKind kind) {
  switch (kind) {
    case ContaminationKind::None: return "none";
    case ContaminationKind::NormalVar9: return "normal-var9";
    case ContaminationKind::ChiSq4Centered: return "chisq4-centered";
    case ContaminationKind::T2: return "t2";
    case ContaminationKind::TwoPoint: return "two-point";
  }
  return "unknown";
}

}  // namespace

json toJson(const SimulationSpec& spec) {
  json j;
  j["name"] = spec.name;
  j["design"] = {
      {"mode", designModeText(spec.design.mode)},
      {"n", spec.design.n},
      {"p", spec.design.p},
  };
  j["true_beta"] = spec.trueBeta;
  j["true_sigma"] = spec.trueSigma;
  j["errors"] = {
      {"base", spec.errors.base == ErrorKind::StudentT ? "student-t" : "normal"},
      {"nu", spec.errors.nu},
      {"contamination", contaminationText(spec.errors.contamination)},
      {"rate", spec.errors.rate},
  };
  json methods = json::array();
  for (const MethodSpec& m : spec.methods) methods.push_back(methodTag(m));
  j["methods"] = std::move(methods);
  j["replications"] = spec.replications;
  j["master_seed"] = spec.masterSeed;
  j["exclude_intercept_in_rmse"] = spec.excludeInterceptInRmse;
  j["init_policy"] =
      spec.initPolicy == OmegaInitPolicy::TruthInit ? "truth" : "multi-start";
  j["threads"] = spec.threads;
  j["keep_replication_details"] = spec.keepReplicationDetails;
  return j;
}

SimulationSpec simulationSpecFromJson(const json& j) {
  requireKeys(j,
              {"name", "design", "true_beta", "true_sigma", "errors", "methods",
               "replications", "master_seed", "exclude_intercept_in_rmse",
               "init_policy", "threads", "keep_replication_details"},
              "spec");
  SimulationSpec spec;
  spec.name = j.value("name", std::string("custom"));

  if (!j.contains("design")) throw SchemaError("design: required field missing");
  const json& d = j.at("design");
  requireKeys(d, {"mode", "n", "p"}, "design");
  if (!d.contains("mode")) throw SchemaError("design.mode: required field missing");
  spec.design.mode = designModeFromText(d.at("mode").get<std::string>());
  if (d.contains("n")) spec.design.n = d.at("n").get<std::size_t>();
  if (d.contains("p")) spec.design.p = d.at("p").get<std::size_t>();

  if (!j.contains("true_beta")) {
    throw SchemaError("true_beta: required field missing");
  }
  spec.trueBeta = j.at("true_beta").get<Vector>();
  spec.trueSigma = j.value("true_sigma", 1.0);

  if (j.contains("errors")) {
    const json& e = j.at("errors");
    requireKeys(e, {"base", "nu", "contamination", "rate"}, "errors");
    if (e.contains("base")) {
      const std::string base = e.at("base").get<std::string>();
      if (base == "student-t") {
        spec.errors.base = ErrorKind::StudentT;
      } else if (base == "normal") {
        spec.errors.base = ErrorKind::Normal;
      } else {
        throw SchemaError("errors.base: expected student-t or normal, got '" +
                          base + "'");
      }
    }
    if (e.contains("nu")) spec.errors.nu = e.at("nu").get<double>();
    if (e.contains("contamination")) {
      spec.errors.contamination =
          contaminationFromText(e.at("contamination").get<std::string>());
    }
    if (e.contains("rate")) spec.errors.rate = e.at("rate").get<double>();
  }

  if (!j.contains("methods")) throw SchemaError("methods: required field missing");
  for (const json& tag : j.at("methods")) {
    if (!tag.is_string()) throw SchemaError("methods: expected strings");
    spec.methods.push_back(parseMethodTag(tag.get<std::string>()));
  }

  spec.replications = j.value("replications", 200);
  spec.masterSeed = j.value("master_seed", std::uint64_t{0});
  spec.excludeInterceptInRmse = j.value("exclude_intercept_in_rmse", true);
  if (j.contains("init_policy")) {
    const std::string policy = j.at("init_policy").get<std::string>();
    if (policy == "truth") {
      spec.initPolicy = OmegaInitPolicy::TruthInit;
    } else if (policy == "multi-start") {
      spec.initPolicy = OmegaInitPolicy::MultiStart;
    } else {
      throw SchemaError("init_policy: expected truth or multi-start, got '" +
                        policy + "'");
    }
  }
  spec.threads = j.value("threads", 0);
  spec.keepReplicationDetails = j.value("keep_replication_details", false);

  validateSpec(spec);
  return spec;
}

}  // namespace trobust::cli
