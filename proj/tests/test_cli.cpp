// End-to-end tests of the command-line tool: exit codes, envelope shape,
// determinism, and the machine-readable error objects. Each case shells out
// to the built binary (UNCONV_CLI_PATH) and inspects stdout.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace {

using Json = nlohmann::ordered_json;

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  const std::string command = std::string(UNCONV_CLI_PATH) + " " + args + " 2>/dev/null";
  RunResult result;
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t got = 0;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) result.out.append(buf, got);
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

Json parse_envelope(const RunResult& result) {
  CAPTURE(result.out);
  REQUIRE_FALSE(result.out.empty());
  return Json::parse(result.out);
}

}  // namespace

TEST_CASE("classify reports unconditional evidence for the 1/n coordinate family") {
  const auto result =
      run_cli("classify --series coordinate-decay --alpha 1 --budget 1e6");
  CHECK(result.exit_code == 0);
  const Json doc = parse_envelope(result);
  CHECK(doc["result"]["verdict"] == "unconditional-evidence");
  CHECK(doc["result"]["budget"] == 1000000);
}

TEST_CASE("rearrange steers the alternating harmonic series to 1.0") {
  const auto result =
      run_cli("rearrange --series alternating-harmonic --target 1.0 --tol 1e-6 --budget 1e6");
  CHECK(result.exit_code == 0);
  const Json doc = parse_envelope(result);
  CHECK(doc["result"]["status"] == "success");
  CHECK(std::abs(doc["result"]["finalSum"].get<double>() - 1.0) <= 1e-6);
}

TEST_CASE("rearrange on an absolutely convergent series exits 4") {
  const auto result = run_cli("rearrange --series coordinate-decay --alpha 2 --target 5");
  CHECK(result.exit_code == 4);
  const Json doc = parse_envelope(result);
  CHECK(doc["result"]["status"] == "not-conditionally-convergent-evidence");
  CHECK(doc["result"]["precheck"]["passed"] == false);
}

TEST_CASE("rearrange exits 3 when the budget runs out mid-walk") {
  const auto result =
      run_cli("rearrange --series alternating-harmonic --target 0 --tol 1e-9 --budget 1100");
  CHECK(result.exit_code == 3);
  const Json doc = parse_envelope(result);
  CHECK(doc["result"]["status"] == "budget-exceeded");
  CHECK(doc["result"]["budgetUsed"] == 1100);
}

TEST_CASE("unknown series family exits 2 with a machine-readable error") {
  const auto result = run_cli("classify --series zeta-prime");
  CHECK(result.exit_code == 2);
  const Json doc = parse_envelope(result);
  CHECK(doc["result"]["error"]["kind"] == "unknown-series-family");
  CHECK(doc["result"]["error"]["message"].get<std::string>().find("zeta-prime") !=
        std::string::npos);
}

TEST_CASE("vectors that do not span exit 4 as not-a-frame") {
  const std::string path = "cli_collinear_vectors.txt";
  {
    std::ofstream out(path);
    out << "2 3\n1 0\n2 0\n-1 0\n";
  }
  const auto result =
      run_cli("frame-threshold --frame file --frame-file " + path + " --rule hard --tau 0");
  std::remove(path.c_str());
  CHECK(result.exit_code == 4);
  const Json doc = parse_envelope(result);
  CHECK(doc["result"]["error"]["kind"] == "not-a-frame");
}

TEST_CASE("every envelope embeds toolVersion, argv, and seed") {
  const auto result = run_cli(
      "net-sup --series coordinate-decay --alpha 1 --window-start 10 --window-width 15 "
      "--seed 99");
  CHECK(result.exit_code == 0);
  Json doc = parse_envelope(result);
  CHECK(doc["toolVersion"] == "0.1.0");
  CHECK(doc["seed"] == 99);
  const auto& argv = doc["argv"];
  REQUIRE(argv.is_array());
  bool saw_subcommand = false;
  for (const auto& token : argv) saw_subcommand = saw_subcommand || token == "net-sup";
  CHECK(saw_subcommand);
  // Envelope key order is fixed: toolVersion, argv, seed, timestampUtc, result.
  std::vector<std::string> keys;
  for (auto it = doc.begin(); it != doc.end(); ++it) keys.push_back(it.key());
  REQUIRE(keys.size() == 5);
  CHECK(keys[0] == "toolVersion");
  CHECK(keys[3] == "timestampUtc");
  CHECK(keys[4] == "result");
}

TEST_CASE("identical invocations are byte-identical modulo the timestamp") {
  const std::string args =
      "classify --series alternating-harmonic --budget 1e4 --seed 7";
  Json first = parse_envelope(run_cli(args));
  Json second = parse_envelope(run_cli(args));
  first.erase("timestampUtc");
  second.erase("timestampUtc");
  CHECK(first.dump() == second.dump());
  CHECK(first["result"]["verdict"] == "conditional-evidence");
}

TEST_CASE("csv output is a bare data table") {
  const auto result = run_cli(
      "sign-stress --series coordinate-decay --alpha 1 --terms 10 --format csv");
  CHECK(result.exit_code == 0);
  CHECK(result.out ==
        "key,value\n"
        "statistic,1.2448966748957686\n"
        "minStatistic,1.2448966748957686\n"
        "patternsTried,1024\n");
}

TEST_CASE("environment variable supplies the default budget") {
  const std::string prefix = "UNCONV_BUDGET=2000 ";
  const std::string command = prefix + UNCONV_CLI_PATH +
                              " classify --series alternating-harmonic 2>/dev/null";
  RunResult result;
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t got = 0;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) result.out.append(buf, got);
  result.exit_code = WEXITSTATUS(pclose(pipe));
  CHECK(result.exit_code == 0);
  const Json doc = parse_envelope(result);
  CHECK(doc["result"]["budget"] == 2000);
}

TEST_CASE("output lands in the requested file") {
  const std::string path = "cli_out_test.json";
  const auto result = run_cli(
      "weak-tail --series coordinate-decay --alpha 1 --window-start 10 --window-width 15 "
      "--output " + path);
  CHECK(result.exit_code == 0);
  CHECK(result.out.empty());
  std::ifstream in(path);
  REQUIRE(in.good());
  const Json doc = Json::parse(in);
  std::remove(path.c_str());
  CHECK(std::abs(doc["result"]["statistic"].get<double>() - 0.2365495136846833) <= 1e-12);
}
