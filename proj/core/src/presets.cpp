#include "trobust/presets.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "trobust/matrix.hpp"
#include "trobust/stackloss.hpp"

namespace trobust {

namespace {

constexpr std::uint64_t kPresetSeed = 20250821ULL;

std::vector<MethodSpec> parseTags(const std::vector<std::string>& tags) {
  std::vector<MethodSpec> methods;
  methods.reserve(tags.size());
  for (const auto& tag : tags) methods.push_back(parseMethodTag(tag));
  return methods;
}

std::vector<std::string> nuEstimationTags() {
  return {"profile", "adjusted", "jeffreys", "pseudo"};
}

// The comparison ladder of the coefficient studies: three estimation
// approaches, a fixed-nu grid, and the two baselines.
std::vector<std::string> coefficientStudyTags() {
  std::vector<std::string> tags = {"profile", "adjusted", "jeffreys"};
  for (int nu = 1; nu <= 10; ++nu) tags.push_back("fixed:" + std::to_string(nu));
  tags.push_back("fixed:20");
  tags.push_back("fixed:30");
  tags.push_back("ols");
  tags.push_back("huber:auto");
  return tags;
}

Vector stacklossTrueBeta() {
  const auto fit = solveLeastSquares(stacklossDesign(), stacklossResponse());
  return fit.coef;
}

double stacklossTrueSigma() {
  const auto fit = solveLeastSquares(stacklossDesign(), stacklossResponse());
  return std::sqrt(fit.rss / (21.0 - 4.0));
}

SimulationSpec nuTableSpec(const std::string& name, double nu, std::size_t n,
                           std::size_t p) {
  SimulationSpec spec;
  spec.name = name;
  spec.design = {DesignMode::GaussianIID, n, p};
  spec.trueBeta = Vector(p, 1.0);
  spec.trueSigma = 1.0;
  spec.errors = {ErrorKind::StudentT, nu, ContaminationKind::None, 0.0};
  spec.methods = parseTags(nuEstimationTags());
  spec.replications = 500;
  spec.masterSeed = kPresetSeed;
  spec.excludeInterceptInRmse = false;  // no intercept column in this design
  spec.initPolicy = OmegaInitPolicy::TruthInit;
  return spec;
}

SimulationSpec stacklossOriginalSpec() {
  SimulationSpec spec;
  spec.name = "stackloss-n21-p4-t2";
  spec.design = {DesignMode::StacklossOriginal, 21, 4};
  spec.trueBeta = stacklossTrueBeta();
  spec.trueSigma = stacklossTrueSigma();
  spec.errors = {ErrorKind::StudentT, 2.0, ContaminationKind::None, 0.0};
  spec.methods = parseTags(coefficientStudyTags());
  spec.replications = 500;
  spec.masterSeed = kPresetSeed;
  spec.excludeInterceptInRmse = true;
  spec.initPolicy = OmegaInitPolicy::TruthInit;
  return spec;
}

SimulationSpec stacklossHybridSpec(std::size_t p) {
  SimulationSpec spec;
  spec.name = "stackloss-hybrid-p" + std::to_string(p) + "-t2";
  spec.design = {DesignMode::StacklossHybrid, 210, p};
  Vector beta(p, 0.0);
  const Vector base = stacklossTrueBeta();
  for (std::size_t j = 0; j < 4; ++j) beta[j] = base[j];
  spec.trueBeta = std::move(beta);
  spec.trueSigma = stacklossTrueSigma();
  spec.errors = {ErrorKind::StudentT, 2.0, ContaminationKind::None, 0.0};
  spec.methods = parseTags(coefficientStudyTags());
  spec.replications = 500;
  spec.masterSeed = kPresetSeed;
  spec.excludeInterceptInRmse = true;
  spec.initPolicy = OmegaInitPolicy::TruthInit;
  return spec;
}

SimulationSpec errorEffectSpec(ErrorKind base, std::size_t n, std::size_t p) {
  SimulationSpec spec;
  const std::string baseName = base == ErrorKind::StudentT ? "t2" : "normal";
  spec.name = "sim-" + baseName + "-n" + std::to_string(n) + "-p" + std::to_string(p);
  spec.design = {DesignMode::GaussianIID, n, p};
  spec.trueBeta = Vector(p, 1.0);
  spec.trueSigma = 1.0;
  spec.errors = {base, 2.0, ContaminationKind::None, 0.0};
  spec.methods = parseTags(coefficientStudyTags());
  spec.replications = 500;
  spec.masterSeed = kPresetSeed;
  spec.excludeInterceptInRmse = false;
  spec.initPolicy = base == ErrorKind::StudentT ? OmegaInitPolicy::TruthInit
                                                : OmegaInitPolicy::MultiStart;
  return spec;
}

SimulationSpec contaminationSpec(std::size_t n, std::size_t p,
                                 ContaminationKind kind,
                                 const std::string& kindName, int ratePercent) {
  SimulationSpec spec;
  spec.name = "fig-robust-n" + std::to_string(n) + "-p" + std::to_string(p) +
              "-" + kindName + "-" + std::to_string(ratePercent);
  spec.design = {DesignMode::GaussianIID, n, p};
  if (p == 3) {
    spec.trueBeta = {1.0, 5.0, 10.0};
  } else {
    spec.trueBeta = Vector(p, 0.0);
  }
  spec.trueSigma = 1.0;
  spec.errors = {ErrorKind::Normal, 2.0, kind, ratePercent / 100.0};
  spec.methods = parseTags(coefficientStudyTags());
  spec.replications = 500;
  spec.masterSeed = kPresetSeed;
  spec.excludeInterceptInRmse = false;
  spec.initPolicy = OmegaInitPolicy::MultiStart;
  return spec;
}

SimulationSpec smokeSpec() {
  SimulationSpec spec;
  spec.name = "smoke";
  spec.design = {DesignMode::GaussianIID, 40, 2};
  spec.trueBeta = {1.0, 1.0};
  spec.trueSigma = 1.0;
  spec.errors = {ErrorKind::StudentT, 2.0, ContaminationKind::None, 0.0};
  spec.methods = parseTags({"profile", "adjusted", "ols"});
  spec.replications = 2;
  spec.masterSeed = kPresetSeed;
  spec.excludeInterceptInRmse = false;
  spec.initPolicy = OmegaInitPolicy::TruthInit;
  return spec;
}

std::map<std::string, SimulationSpec> buildCatalog() {
  std::map<std::string, SimulationSpec> catalog;
  auto add = [&](SimulationSpec spec) { catalog.emplace(spec.name, std::move(spec)); };

  const std::size_t dims[] = {1, 2, 5, 10, 20, 40, 60, 80};
  for (std::size_t p : dims) {
    add(nuTableSpec("table1-p" + std::to_string(p), 2.0, 300, p));
    add(nuTableSpec("table2-p" + std::to_string(p), 5.0, 2500, p));
    add(nuTableSpec("table3-p" + std::to_string(p), 10.0, 4500, p));
  }

  add(stacklossOriginalSpec());
  for (std::size_t p : {40, 80, 120}) add(stacklossHybridSpec(p));

  for (auto base : {ErrorKind::StudentT, ErrorKind::Normal}) {
    add(errorEffectSpec(base, 20, 4));
    add(errorEffectSpec(base, 500, 4));
    add(errorEffectSpec(base, 100, 50));
  }

  const std::pair<ContaminationKind, const char*> kinds[] = {
      {ContaminationKind::NormalVar9, "norm9"},
      {ContaminationKind::ChiSq4Centered, "chisq4"},
      {ContaminationKind::T2, "t2"},
      {ContaminationKind::TwoPoint, "twopoint"},
  };
  for (const auto& [kind, kindName] : kinds) {
    for (int rate : {0, 10, 20, 30}) {
      add(contaminationSpec(100, 3, kind, kindName, rate));
      add(contaminationSpec(300, 80, kind, kindName, rate));
    }
  }

  add(smokeSpec());
  return catalog;
}

const std::map<std::string, SimulationSpec>& catalog() {
  static const std::map<std::string, SimulationSpec> instance = buildCatalog();
  return instance;
}

}  // namespace

std::optional<SimulationSpec> findPreset(const std::string& name) {
  const auto& all = catalog();
  const auto it = all.find(name);
  if (it == all.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> listPresets() {
  std::vector<std::string> names;
  names.reserve(catalog().size());
  for (const auto& [name, spec] : catalog()) names.push_back(name);
  return names;
}

}  // namespace trobust
