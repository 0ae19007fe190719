#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "trobust/data.hpp"
#include "trobust/estimators.hpp"
#include "trobust/matrix.hpp"
#include "trobust/rng.hpp"

namespace trobust {

enum class DesignMode {
  StacklossOriginal,  // the bundled 21x4 fixture (intercept included)
  StacklossHybrid,    // fixture rows + 189 moment-matched rows + extra columns
  GaussianIID,        // n x p standard-normal entries
};

struct DesignSpec {
  DesignMode mode = DesignMode::GaussianIID;
  std::size_t n = 100;  // GaussianIID only (fixed designs pin their own n)
  std::size_t p = 1;    // GaussianIID and StacklossHybrid
};

enum class ErrorKind { StudentT, Normal };

enum class ContaminationKind { None, NormalVar9, ChiSq4Centered, T2, TwoPoint };

struct ErrorSpec {
  ErrorKind base = ErrorKind::StudentT;
  double nu = 2.0;  // StudentT only
  ContaminationKind contamination = ContaminationKind::None;
  double rate = 0.0;
};

// How the outer omega search is started: at the data-generating truth (the
// protocol used for the replication studies) or from the multi-start set.
enum class OmegaInitPolicy { TruthInit, MultiStart };

struct SimulationSpec {
  std::string name;
  DesignSpec design;
  Vector trueBeta;
  double trueSigma = 1.0;
  ErrorSpec errors;
  std::vector<MethodSpec> methods;
  int replications = 200;
  std::uint64_t masterSeed = 0;
  bool excludeInterceptInRmse = true;
  OmegaInitPolicy initPolicy = OmegaInitPolicy::TruthInit;
  int threads = 0;  // 0 = hardware concurrency
  bool keepReplicationDetails = false;
};

// Throws SchemaError naming the offending field.
void validateSpec(const SimulationSpec& spec);

// Resolved design dimensions for a spec (fixed modes pin their own).
std::size_t designRows(const DesignSpec& design);
std::size_t designCols(const DesignSpec& design);

// Generate the study design (held fixed across replications).
Matrix generateDesign(const DesignSpec& design, RngStream& rng);

// y = X beta + sigma * eps with the base errors drawn first, then the
// contamination pass (per-observation replacement; TwoPoint replaces the
// response itself). A rate of zero draws nothing beyond the base errors.
Vector generateResponses(const Matrix& x, const Vector& beta, double sigma,
                         const ErrorSpec& errors, RngStream& rng);

// Mean over replications of the root-mean-square coefficient error,
// optionally excluding the leading (intercept) coordinate.
double rmseBeta(const std::vector<Vector>& estimates, const Vector& truth,
                bool excludeIntercept);

struct NuMetrics {
  double rmse = 0.0;
  double bias = 0.0;
  double se = 0.0;     // sample standard deviation (divisor count-1)
  double sePop = 0.0;  // population standard deviation (divisor count);
                       // satisfies sePop^2 + bias^2 = rmse^2
  std::size_t count = 0;
  bool undefined = false;  // count < 2: se (and more) not estimable
};

NuMetrics nuMetrics(const std::vector<double>& estimates, double truth);

// Gaussian-limit estimates enter the nu tables at this capped value.
inline constexpr double kGaussianCapNu = 1000.0;

struct ReplicationDetail {
  int replication = 0;
  std::string method;
  std::string outcome;  // "success", "flat", "convergence-failure", "error"
  Vector beta;
  double nuValue = 0.0;  // capped value; NaN when not applicable
  bool gaussianLimit = false;
  bool flatness = false;
  std::string error;
};

// The metric pools (rmseBetaValue, nu) cover every replication that produced
// estimates — including uncertified optima — so methods are compared on what
// they deliver; the status counters are diagnostics, and only replications
// that raised an error (no estimates) are left out of the pools.
struct MethodReport {
  std::string label;
  int successes = 0;
  int convergenceFailures = 0;  // includes replications that raised errors
  int flatnessFlagged = 0;
  int errorFailures = 0;  // the error subset of convergenceFailures
  int gaussianCapped = 0;
  double rmseBetaValue = 0.0;
  bool nuApplicable = false;
  NuMetrics nu;
  std::string firstError;
};

struct MetricsReport {
  std::string name;
  std::size_t n = 0;
  std::size_t p = 0;
  std::optional<double> nuTrue;
  int replications = 0;
  std::uint64_t masterSeed = 0;
  std::uint64_t designHash = 0;
  std::vector<MethodReport> methods;
  double wallSeconds = 0.0;
  std::vector<ReplicationDetail> details;  // when requested in the spec
};

// Run the full study: one fixed design, `replications` response draws, every
// requested method on each. Per-replication failures are tallied, never
// propagated. Results are identical for any thread count.
MetricsReport runStudy(const SimulationSpec& spec);

}  // namespace trobust
