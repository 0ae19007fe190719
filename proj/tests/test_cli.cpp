#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "csv.hpp"
#include "serialize.hpp"
#include "support.hpp"
#include "trobust/errors.hpp"
#include "trobust/hash.hpp"
#include "trobust/presets.hpp"
#include "trobust/stackloss.hpp"

using namespace trobust;
using nlohmann::json;
using testsupport::closeRel;

namespace {

struct RunResult {
  int exitCode = -1;
  std::string output;  // stdout and stderr interleaved
};

// Run the installed binary; commands are built from known paths, no quoting
// subtleties.
RunResult runCli(const std::string& args) {
  const std::string command = std::string(TROBUST_BIN_PATH) + " " + args + " 2>&1";
  RunResult result;
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buffer[4096];
  while (std::size_t got = std::fread(buffer, 1, sizeof(buffer), pipe)) {
    result.output.append(buffer, got);
  }
  const int status = pclose(pipe);
  result.exitCode = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::string dataFile() { return std::string(TROBUST_DATA_DIR) + "/stackloss.csv"; }

std::string writeTemp(const std::string& name, const std::string& content) {
  const std::string path = std::string("/tmp/trobust_test_") + name;
  std::ofstream out(path);
  out << content;
  return path;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("bundled dataset bytes are canonical") {
  std::ifstream in(dataFile(), std::ios::binary);
  REQUIRE(in.good());
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string fileText = buffer.str();
  CHECK(fileText == stacklossCsv());
  CHECK(fnv1a64(fileText) == 0x8e4b7aa2a186b9b4ULL);
}

TEST_CASE("csv reader round-trips the bundled dataset") {
  const cli::CsvTable table = cli::readCsv(dataFile());
  REQUIRE(table.cols() == 4);
  REQUIRE(table.rows() == 21);
  CHECK(table.header[0] == "stack_loss");
  CHECK(table.header[3] == "acid_conc");
  CHECK(table.values[0][0] == 42.0);
  CHECK(table.values[20][3] == 91.0);
}

TEST_CASE("csv reader rejects malformed files with line numbers") {
  const std::string ragged = writeTemp("ragged.csv", "a,b\n1,2\n3\n");
  CHECK_THROWS_AS(cli::readCsv(ragged), cli::CsvParseError);
  try {
    cli::readCsv(ragged);
  } catch (const cli::CsvParseError& e) {
    CHECK(e.line() == 3);
  }

  const std::string words = writeTemp("words.csv", "a,b\n1,two\n");
  try {
    cli::readCsv(words);
    CHECK(false);
  } catch (const cli::CsvParseError& e) {
    CHECK(std::string(e.what()).find("b") != std::string::npos);
  }

  const std::string empty = writeTemp("empty.csv", "");
  CHECK_THROWS_AS(cli::readCsv(empty), cli::CsvParseError);

  const std::string oneCol = writeTemp("one.csv", "only\n1\n2\n");
  CHECK_THROWS_AS(cli::readCsv(oneCol), cli::CsvParseError);
}

TEST_CASE("fit results survive a JSON round trip, NaN included") {
  FitResult fit;
  fit.method = "huber";
  fit.beta = {1.5, -2.0};
  fit.sigma = 0.9;
  fit.nuUsed = DegreesOfFreedom::gaussianLimit();
  fit.loglik = std::nan("");
  fit.huberC = 1.2;
  fit.diagnostics.iterations = 11;
  fit.diagnostics.converged = true;
  fit.diagnostics.loglikTrace = {-5.0, -4.5};

  const json j = cli::toJson(fit);
  CHECK(j.at("loglik").is_null());
  CHECK(j.at("nu") == "gaussian");
  const FitResult back = cli::fitResultFromJson(j);
  CHECK(back.method == fit.method);
  CHECK(back.beta == fit.beta);
  CHECK(back.sigma == fit.sigma);
  CHECK(back.nuUsed.isGaussian());
  CHECK(std::isnan(back.loglik));
  REQUIRE(back.huberC.has_value());
  CHECK(*back.huberC == 1.2);
  CHECK(back.diagnostics.iterations == 11);
  CHECK(back.diagnostics.loglikTrace == fit.diagnostics.loglikTrace);

  json broken = j;
  broken["surprise"] = 1;
  CHECK_THROWS_AS(cli::fitResultFromJson(broken), SchemaError);
}

TEST_CASE("study specs survive a JSON round trip and reject junk") {
  const std::optional<SimulationSpec> preset = findPreset("table1-p1");
  REQUIRE(preset.has_value());
  const json j = cli::toJson(*preset);
  const SimulationSpec back = cli::simulationSpecFromJson(j);
  CHECK(cli::toJson(back) == j);

  json broken = j;
  broken["errors"]["contamination"] = "volcanic";
  CHECK_THROWS_AS(cli::simulationSpecFromJson(broken), SchemaError);

  broken = j;
  broken["design"]["mode"] = "latin-square";
  CHECK_THROWS_AS(cli::simulationSpecFromJson(broken), SchemaError);

  broken = j;
  broken["turbo"] = true;
  CHECK_THROWS_AS(cli::simulationSpecFromJson(broken), SchemaError);
}

TEST_CASE("metrics CSV uses NA for undefined cells and sanitizes diagnostics") {
  MetricsReport report;
  report.name = "unit";
  report.n = 10;
  report.p = 2;
  report.replications = 1;
  MethodReport m;
  m.label = "profile";
  m.successes = 0;
  m.convergenceFailures = 1;
  m.errorFailures = 1;
  m.firstError = "bad, line\nnext";
  m.rmseBetaValue = std::nan("");
  m.nuApplicable = true;
  m.nu = nuMetrics({}, 2.0);
  report.methods = {m};

  std::ostringstream out;
  cli::writeMetricsCsv(report, out);
  const std::string text = out.str();
  CHECK(text.find("rmse_beta,NA") != std::string::npos);
  CHECK(text.find("bad; line;next") != std::string::npos);
  CHECK(text.find("real-data") != std::string::npos);  // no nu truth recorded
}

TEST_CASE("binary: version and help behave") {
  const RunResult version = runCli("--version");
  CHECK(version.exitCode == 0);
  CHECK(version.output.find("trobust 0.1.0") != std::string::npos);

  const RunResult help = runCli("--help");
  CHECK(help.exitCode == 0);
  CHECK(help.output.find("simulate") != std::string::npos);

  const RunResult missing = runCli("");
  CHECK(missing.exitCode == 2);
}

TEST_CASE("binary: least-squares fit of the bundled data") {
  const RunResult r = runCli("fit " + dataFile() + " --method ols");
  CHECK(r.exitCode == 0);
  CHECK(r.output.find("method: ols") != std::string::npos);
  CHECK(r.output.find("-39.9197") != std::string::npos);
  CHECK(r.output.find("air_flow") != std::string::npos);
}

TEST_CASE("binary: fixed-nu fit writes a parseable JSON payload") {
  const std::string out = "/tmp/trobust_test_fit.json";
  const RunResult r =
      runCli("fit " + dataFile() + " --nu 2 --out " + out);
  CHECK(r.exitCode == 0);
  std::ifstream in(out);
  REQUIRE(in.good());
  json payload;
  in >> payload;
  const FitResult fit = cli::fitResultFromJson(payload.at("fit"));
  CHECK(fit.method == "fixed:2");
  REQUIRE_FALSE(fit.nuUsed.isGaussian());
  CHECK(fit.nuUsed.nu() == 2.0);
  CHECK(payload.at("nu_estimate").at("method") == "fixed");
}

TEST_CASE("binary: estimate-nu reports all four criteria") {
  const std::string out = "/tmp/trobust_test_nu.json";
  const RunResult r = runCli("estimate-nu " + dataFile() + " --out " + out);
  CHECK(r.exitCode == 0);
  CHECK(r.output.find("profile") != std::string::npos);
  CHECK(r.output.find("pseudo") != std::string::npos);
  std::ifstream in(out);
  REQUIRE(in.good());
  json payload;
  in >> payload;
  REQUIRE(payload.is_array());
  CHECK(payload.size() == 4);
  for (const json& entry : payload) {
    CHECK(entry.contains("nu_hat"));
    CHECK(entry.contains("converged"));
  }
}

TEST_CASE("binary: scaling the response column leaves nu estimates unchanged") {
  // Rebuild the bundled CSV with the response multiplied by 3.
  const cli::CsvTable table = cli::readCsv(dataFile());
  std::ostringstream scaled;
  scaled << "stack_loss,air_flow,water_temp,acid_conc\n";
  for (std::size_t i = 0; i < table.rows(); ++i) {
    scaled << 3.0 * table.values[i][0] << "," << table.values[i][1] << ","
           << table.values[i][2] << "," << table.values[i][3] << "\n";
  }
  const std::string scaledPath = writeTemp("scaled.csv", scaled.str());

  const std::string outA = "/tmp/trobust_test_nu_base.json";
  const std::string outB = "/tmp/trobust_test_nu_scaled.json";
  CHECK(runCli("estimate-nu " + dataFile() + " --out " + outA).exitCode == 0);
  CHECK(runCli("estimate-nu " + scaledPath + " --out " + outB).exitCode == 0);

  json a, b;
  std::ifstream(outA) >> a;
  std::ifstream(outB) >> b;
  REQUIRE(a.size() == 4);
  REQUIRE(b.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    const double nuA = a[i].at("nu_hat").get<double>();
    const double nuB = b[i].at("nu_hat").get<double>();
    CHECK_MESSAGE(std::abs(nuB / nuA - 1.0) <= 1e-4, "method ", i);
  }
}

TEST_CASE("binary: simulation preset emits machine-readable outputs") {
  const std::string outJson = "/tmp/trobust_test_sim.json";
  const std::string outCsv = "/tmp/trobust_test_sim.csv";
  const RunResult r = runCli("simulate --preset smoke --out " + outJson +
                             " --csv " + outCsv);
  CHECK(r.exitCode == 0);
  CHECK(r.output.find("study: smoke") != std::string::npos);

  json payload;
  std::ifstream(outJson) >> payload;
  CHECK(payload.at("name") == "smoke");
  CHECK(payload.at("methods").size() == 3);

  // The metrics file mixes text and numeric cells, so inspect it as text.
  std::ifstream metrics(outCsv);
  std::string line;
  REQUIRE(std::getline(metrics, line));
  CHECK(line == "method,metric,value,n,p,nu_true,diagnostics");
  std::size_t dataLines = 0;
  bool sawProfileRmse = false;
  while (std::getline(metrics, line)) {
    if (line.empty()) continue;
    ++dataLines;
    if (line.rfind("profile,rmse_beta,", 0) == 0) sawProfileRmse = true;
  }
  CHECK(dataLines > 10);
  CHECK(sawProfileRmse);
}

TEST_CASE("binary: seed and replication overrides change the study") {
  const std::string outA = "/tmp/trobust_test_sim_a.json";
  const std::string outB = "/tmp/trobust_test_sim_b.json";
  CHECK(runCli("simulate --preset smoke --replications 3 --seed 1 --out " + outA)
            .exitCode == 0);
  CHECK(runCli("simulate --preset smoke --replications 3 --seed 2 --out " + outB)
            .exitCode == 0);
  json a, b;
  std::ifstream(outA) >> a;
  std::ifstream(outB) >> b;
  CHECK(a.at("replications") == 3);
  CHECK(a.at("master_seed") == 1);
  CHECK(b.at("master_seed") == 2);
  CHECK(a.at("methods") != b.at("methods"));  // different draws, different metrics
}

TEST_CASE("binary: usage and data errors use exit code 2") {
  CHECK(runCli("fit /definitely/missing.csv").exitCode == 2);
  CHECK(runCli("simulate --preset no-such-preset").exitCode == 2);
  CHECK(runCli("simulate").exitCode == 2);
  CHECK(runCli("fit " + dataFile() + " --method bogus").exitCode == 2);
  const std::string ragged = writeTemp("cli_ragged.csv", "a,b\n1,2\n3\n");
  CHECK(runCli("fit " + ragged).exitCode == 2);

  const std::string badSpec = writeTemp("bad_spec.json", "{\"name\": 3}");
  CHECK(runCli("simulate --spec " + badSpec).exitCode == 2);
}

TEST_CASE("binary: numerical failures use exit code 3") {
  // Two identical predictor columns make the design rank deficient.
  std::ostringstream csv;
  csv << "y,a,b\n";
  for (int i = 0; i < 12; ++i) {
    csv << i << "," << i % 5 << "," << i % 5 << "\n";
  }
  const std::string path = writeTemp("singular.csv", csv.str());
  const RunResult r = runCli("fit " + path + " --method ols --no-intercept");
  CHECK(r.exitCode == 3);
  CHECK(r.output.find("error") != std::string::npos);
}

}  // TEST_SUITE
