#include "trobust/simulate.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

#include "trobust/errors.hpp"
#include "trobust/hash.hpp"
#include "trobust/stackloss.hpp"

namespace trobust {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Stream id for design generation; replication streams are 0..R-1, so any
// value far above the replication range keeps the two uses disjoint.
constexpr std::uint64_t kDesignStream = 1ULL << 32;

bool estimatesNu(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::Profile:
    case EstimatorKind::AdjustedProfile:
    case EstimatorKind::JeffreysMAP:
    case EstimatorKind::PseudoPosteriorMAP:
      return true;
    default:
      return false;
  }
}

}  // namespace

std::size_t designRows(const DesignSpec& design) {
  switch (design.mode) {
    case DesignMode::StacklossOriginal: return 21;
    case DesignMode::StacklossHybrid: return 210;
    case DesignMode::GaussianIID: return design.n;
  }
  return 0;
}

std::size_t designCols(const DesignSpec& design) {
  switch (design.mode) {
    case DesignMode::StacklossOriginal: return 4;
    case DesignMode::StacklossHybrid: return design.p;
    case DesignMode::GaussianIID: return design.p;
  }
  return 0;
}

void validateSpec(const SimulationSpec& spec) {
  const auto& d = spec.design;
  if (d.mode == DesignMode::StacklossHybrid &&
      !(d.p == 40 || d.p == 80 || d.p == 120)) {
    throw SchemaError("design.p: hybrid design supports p in {40, 80, 120}, got " +
                      std::to_string(d.p));
  }
  if (d.mode == DesignMode::GaussianIID) {
    if (d.p < 1) throw SchemaError("design.p: must be >= 1");
    if (d.n < d.p + 1) {
      throw SchemaError("design.n: need at least p + 1 = " +
                        std::to_string(d.p + 1) + " observations, got " +
                        std::to_string(d.n));
    }
  }
  if (spec.trueBeta.size() != designCols(d)) {
    throw SchemaError("trueBeta: length " + std::to_string(spec.trueBeta.size()) +
                      " does not match the design's " +
                      std::to_string(designCols(d)) + " columns");
  }
  if (!(spec.trueSigma > 0.0) || !std::isfinite(spec.trueSigma)) {
    throw SchemaError("trueSigma: must be positive and finite");
  }
  if (spec.errors.base == ErrorKind::StudentT &&
      (!(spec.errors.nu > 0.0) || !std::isfinite(spec.errors.nu))) {
    throw SchemaError("errors.nu: must be positive and finite for t errors");
  }
  if (spec.errors.rate < 0.0 || spec.errors.rate > 0.5) {
    throw SchemaError("errors.rate: must lie in [0, 0.5]");
  }
  if (spec.errors.contamination == ContaminationKind::None && spec.errors.rate != 0.0) {
    throw SchemaError("errors.rate: must be 0 when contamination is none");
  }
  if (spec.replications < 1) {
    throw SchemaError("replications: must be >= 1");
  }
  if (spec.methods.empty()) {
    throw SchemaError("methods: at least one method is required");
  }
  if (spec.excludeInterceptInRmse && designCols(d) < 2) {
    throw SchemaError(
        "excludeInterceptInRmse: no non-intercept coefficients with p = " +
        std::to_string(designCols(d)));
  }
  if (spec.threads < 0) {
    throw SchemaError("threads: must be >= 0");
  }
}

Matrix generateDesign(const DesignSpec& design, RngStream& rng) {
  switch (design.mode) {
    case DesignMode::StacklossOriginal:
      return stacklossDesign();
    case DesignMode::GaussianIID: {
      Matrix x(design.n, design.p, 0.0);
      for (double& v : x.storage()) v = rng.drawNormal();
      return x;
    }
    case DesignMode::StacklossHybrid:
      break;
  }

  // Hybrid: 21 fixture rows plus 189 rows drawn from a normal law matched to
  // the fixture's three predictors, then p - 4 extra standard-normal columns.
  const std::size_t p = design.p;
  const Matrix fixture = stacklossDesign();
  Matrix x(210, p, 0.0);
  for (std::size_t i = 0; i < 210; ++i) x(i, 0) = 1.0;
  for (std::size_t i = 0; i < 21; ++i) {
    for (std::size_t j = 1; j < 4; ++j) x(i, j) = fixture(i, j);
  }

  // Sample mean and covariance (divisor n-1) of the 3 predictors.
  Vector mean(3, 0.0);
  for (std::size_t i = 0; i < 21; ++i)
    for (std::size_t j = 0; j < 3; ++j) mean[j] += fixture(i, j + 1);
  for (double& m : mean) m /= 21.0;
  Matrix cov(3, 3, 0.0);
  for (std::size_t i = 0; i < 21; ++i) {
    for (std::size_t a = 0; a < 3; ++a) {
      for (std::size_t b = 0; b < 3; ++b) {
        cov(a, b) += (fixture(i, a + 1) - mean[a]) * (fixture(i, b + 1) - mean[b]);
      }
    }
  }
  for (double& v : cov.storage()) v /= 20.0;
  if (!choleskyLower(cov)) {
    throw SingularMatrixError(
        "generateDesign: fixture predictor covariance is not positive definite", 3);
  }

  // Draw order is pinned: the 189 matched rows first (3 normals each), then
  // the extra columns row by row.
  for (std::size_t i = 21; i < 210; ++i) {
    double z[3];
    for (double& v : z) v = rng.drawNormal();
    for (std::size_t a = 0; a < 3; ++a) {
      double value = mean[a];
      for (std::size_t b = 0; b <= a; ++b) value += cov(a, b) * z[b];
      x(i, a + 1) = value;
    }
  }
  for (std::size_t i = 0; i < 210; ++i) {
    for (std::size_t j = 4; j < p; ++j) x(i, j) = rng.drawNormal();
  }
  return x;
}

Vector generateResponses(const Matrix& x, const Vector& beta, double sigma,
                         const ErrorSpec& errors, RngStream& rng) {
  if (x.cols() != beta.size()) {
    throw DimensionError("generateResponses: " + std::to_string(x.cols()) +
                         " design columns vs " + std::to_string(beta.size()) +
                         " coefficients");
  }
  const std::size_t n = x.rows();
  Vector eps(n, 0.0);
  if (errors.base == ErrorKind::StudentT) {
    for (double& e : eps) e = rng.drawStudentT(errors.nu);
  } else {
    for (double& e : eps) e = rng.drawNormal();
  }

  // Error-replacing contamination happens before the responses are formed;
  // a zero rate must not consume any draws.
  if (errors.rate > 0.0 && errors.contamination != ContaminationKind::None &&
      errors.contamination != ContaminationKind::TwoPoint) {
    for (std::size_t i = 0; i < n; ++i) {
      if (rng.drawUniform() >= errors.rate) continue;
      switch (errors.contamination) {
        case ContaminationKind::NormalVar9:
          eps[i] = 3.0 * rng.drawNormal();
          break;
        case ContaminationKind::ChiSq4Centered:
          eps[i] = rng.drawChiSquare(4.0) - 4.0;
          break;
        case ContaminationKind::T2:
          eps[i] = rng.drawStudentT(2.0);
          break;
        default:
          break;
      }
    }
  }

  Vector y = matVec(x, beta);
  for (std::size_t i = 0; i < n; ++i) y[i] += sigma * eps[i];

  // TwoPoint replaces the response itself with -5 or +5, each with
  // probability rate / 2.
  if (errors.rate > 0.0 && errors.contamination == ContaminationKind::TwoPoint) {
    for (std::size_t i = 0; i < n; ++i) {
      if (rng.drawUniform() >= errors.rate) continue;
      y[i] = rng.drawUniform() < 0.5 ? -5.0 : 5.0;
    }
  }
  return y;
}

double rmseBeta(const std::vector<Vector>& estimates, const Vector& truth,
                bool excludeIntercept) {
  if (estimates.empty()) {
    throw DomainError("rmseBeta: no estimates");
  }
  const std::size_t p = truth.size();
  const std::size_t first = excludeIntercept ? 1 : 0;
  if (first >= p) {
    throw DomainError("rmseBeta: excluding the intercept leaves no coefficients");
  }
  const double denom = static_cast<double>(p - first);
  double acc = 0.0;
  for (const Vector& est : estimates) {
    if (est.size() != p) {
      throw DimensionError("rmseBeta: estimate of length " +
                           std::to_string(est.size()) + " vs truth of length " +
                           std::to_string(p));
    }
    double ss = 0.0;
    for (std::size_t j = first; j < p; ++j) {
      const double d = est[j] - truth[j];
      ss += d * d;
    }
    acc += std::sqrt(ss / denom);
  }
  return acc / static_cast<double>(estimates.size());
}

NuMetrics nuMetrics(const std::vector<double>& estimates, double truth) {
  NuMetrics out;
  out.count = estimates.size();
  if (out.count == 0) {
    out.rmse = out.bias = out.se = out.sePop = kNaN;
    out.undefined = true;
    return out;
  }
  const double n = static_cast<double>(out.count);
  double mean = 0.0;
  for (double v : estimates) mean += v;
  mean /= n;
  double mse = 0.0;
  double ssCentered = 0.0;
  for (double v : estimates) {
    mse += (v - truth) * (v - truth);
    ssCentered += (v - mean) * (v - mean);
  }
  mse /= n;
  out.bias = mean - truth;
  out.rmse = std::sqrt(mse);
  out.sePop = std::sqrt(ssCentered / n);
  out.se = out.count > 1 ? std::sqrt(ssCentered / (n - 1.0)) : kNaN;
  out.undefined = out.count < 2;
  return out;
}

namespace {

enum class RepStatus { Success, Flat, ConvFail, Error };

struct RepOutcome {
  RepStatus status = RepStatus::Error;
  Vector beta;
  double nuValue = kNaN;  // capped; NaN when method does not estimate nu
  bool gaussianLimit = false;
  bool flatness = false;
  std::string error;
};

const char* statusName(RepStatus status) {
  switch (status) {
    case RepStatus::Success: return "success";
    case RepStatus::Flat: return "flat";
    case RepStatus::ConvFail: return "convergence-failure";
    case RepStatus::Error: return "error";
  }
  return "unknown";
}

OptimControl makeControl(const SimulationSpec& spec) {
  OptimControl control;
  if (spec.initPolicy == OmegaInitPolicy::TruthInit) {
    const double omegaTrue =
        spec.errors.base == ErrorKind::StudentT ? 1.0 / spec.errors.nu : 0.0;
    control.omegaInit = {omegaTrue};
  }
  return control;
}

RepOutcome runOneMethod(const MethodSpec& method, const Dataset& data,
                        const OptimControl& control) {
  RepOutcome out;
  PipelineResult pipeline;
  try {
    pipeline = runPipeline(method, data, control);
  } catch (const std::exception& e) {
    out.status = RepStatus::Error;
    out.error = e.what();
    return out;
  }

  // The pipeline always delivers estimates once it ran without throwing, even
  // when an optimizer could not certify a first-order point.  Those estimates
  // are what the method hands a practitioner, so they stay in the outcome (and
  // later in the metric pools); the convergence status is carried separately
  // as a diagnostic.  Dropping non-converged replications instead would bias
  // method comparisons by pruning exactly the draws a method found hard.
  out.beta = pipeline.fit.beta;
  if (pipeline.nuEstimate.has_value()) {
    const NuEstimationResult& est = *pipeline.nuEstimate;
    out.flatness = est.flatnessDetected;
    if (estimatesNu(method.kind)) {
      out.gaussianLimit = est.nuHat.isGaussian();
      out.nuValue = out.gaussianLimit ? kGaussianCapNu
                                      : std::min(est.nuHat.nu(), kGaussianCapNu);
    }
    if (!est.converged || !pipeline.fit.diagnostics.converged) {
      out.status = RepStatus::ConvFail;
      return out;
    }
    out.status = est.flatnessDetected ? RepStatus::Flat : RepStatus::Success;
    return out;
  }

  if (!pipeline.fit.diagnostics.converged) {
    out.status = RepStatus::ConvFail;
    return out;
  }
  out.status = RepStatus::Success;
  return out;
}

}  // namespace

MetricsReport runStudy(const SimulationSpec& spec) {
  validateSpec(spec);
  const auto startTime = std::chrono::steady_clock::now();

  RngStream designRng(spec.masterSeed, kDesignStream);
  const Matrix design = generateDesign(spec.design, designRng);

  MetricsReport report;
  report.name = spec.name;
  report.n = design.rows();
  report.p = design.cols();
  if (spec.errors.base == ErrorKind::StudentT) report.nuTrue = spec.errors.nu;
  report.replications = spec.replications;
  report.masterSeed = spec.masterSeed;
  report.designHash = fnv1a64(design.storage().data(),
                              design.storage().size() * sizeof(double));

  const std::size_t methodCount = spec.methods.size();
  const int reps = spec.replications;
  const OptimControl control = makeControl(spec);

  std::vector<std::vector<RepOutcome>> slots(
      static_cast<std::size_t>(reps), std::vector<RepOutcome>(methodCount));

  auto worker = [&](std::atomic<int>& next) {
    for (;;) {
      const int r = next.fetch_add(1);
      if (r >= reps) break;
      RngStream rng(spec.masterSeed, static_cast<std::uint64_t>(r));
      Vector y;
      try {
        y = generateResponses(design, spec.trueBeta, spec.trueSigma, spec.errors,
                              rng);
      } catch (const std::exception& e) {
        for (std::size_t m = 0; m < methodCount; ++m) {
          slots[static_cast<std::size_t>(r)][m].status = RepStatus::Error;
          slots[static_cast<std::size_t>(r)][m].error = e.what();
        }
        continue;
      }
      const Dataset data(design, y);
      for (std::size_t m = 0; m < methodCount; ++m) {
        slots[static_cast<std::size_t>(r)][m] =
            runOneMethod(spec.methods[m], data, control);
      }
    }
  };

  int threadCount = spec.threads;
  if (threadCount <= 0) {
    threadCount = static_cast<int>(std::thread::hardware_concurrency());
  }
  threadCount = std::max(1, std::min<int>(threadCount, reps));

  std::atomic<int> next{0};
  if (threadCount == 1) {
    worker(next);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threadCount));
    for (int t = 0; t < threadCount; ++t) {
      pool.emplace_back([&] { worker(next); });
    }
    for (auto& t : pool) t.join();
  }

  // Deterministic reduction in (replication, method) order.
  for (std::size_t m = 0; m < methodCount; ++m) {
    MethodReport mr;
    mr.label = methodTag(spec.methods[m]);
    mr.nuApplicable = estimatesNu(spec.methods[m].kind) &&
                      spec.errors.base == ErrorKind::StudentT;
    std::vector<Vector> betas;
    std::vector<double> nus;
    for (int r = 0; r < reps; ++r) {
      const RepOutcome& outcome = slots[static_cast<std::size_t>(r)][m];
      switch (outcome.status) {
        case RepStatus::Error:
          ++mr.convergenceFailures;
          ++mr.errorFailures;
          if (mr.firstError.empty()) mr.firstError = outcome.error;
          continue;
        case RepStatus::ConvFail:
          ++mr.convergenceFailures;
          break;
        case RepStatus::Flat:
          ++mr.flatnessFlagged;
          break;
        case RepStatus::Success:
          ++mr.successes;
          break;
      }
      // Every replication that produced estimates enters the metric pools —
      // successes, flatness-flagged fits, and uncertified optima alike.  The
      // pools then measure what each method actually delivers, and the status
      // counters above stay purely diagnostic; only replications that threw
      // (no estimates at all) are excluded.
      if (outcome.beta.empty()) continue;
      betas.push_back(outcome.beta);
      if (estimatesNu(spec.methods[m].kind) && std::isfinite(outcome.nuValue)) {
        nus.push_back(outcome.nuValue);
        if (outcome.gaussianLimit) ++mr.gaussianCapped;
      }
    }
    mr.rmseBetaValue = betas.empty()
                           ? kNaN
                           : rmseBeta(betas, spec.trueBeta,
                                      spec.excludeInterceptInRmse);
    if (mr.nuApplicable) {
      mr.nu = nuMetrics(nus, spec.errors.nu);
    } else {
      mr.nu = nuMetrics({}, 0.0);  // all-NaN, undefined-flagged
    }
    report.methods.push_back(std::move(mr));
  }

  if (spec.keepReplicationDetails) {
    for (int r = 0; r < reps; ++r) {
      for (std::size_t m = 0; m < methodCount; ++m) {
        const RepOutcome& outcome = slots[static_cast<std::size_t>(r)][m];
        ReplicationDetail detail;
        detail.replication = r;
        detail.method = methodTag(spec.methods[m]);
        detail.outcome = statusName(outcome.status);
        detail.beta = outcome.beta;
        detail.nuValue = outcome.nuValue;
        detail.gaussianLimit = outcome.gaussianLimit;
        detail.flatness = outcome.flatness;
        detail.error = outcome.error;
        report.details.push_back(std::move(detail));
      }
    }
  }

  report.wallSeconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - startTime)
          .count();
  return report;
}

}  // namespace trobust
