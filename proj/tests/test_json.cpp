#include <regex>
#include <string>

#include "doctest.h"
#include "unconv/json_io.hpp"

using namespace unconv;

TEST_CASE("growth records serialize with stable camelCase keys") {
  GrowthRecord record;
  record.checkpoints = {{1, 1.0}, {10, 2.5}, {100, 2.5}};
  record.fit.cls = GrowthClass::Bounded;
  record.fit.a = 2.5;
  record.fit.rms_residual = 0.0;
  record.fit.relative_residual = 0.0;

  const auto j = to_json(record);
  CHECK(j["fit"]["class"] == "bounded");
  CHECK(j["fit"]["a"] == 2.5);
  CHECK(j["checkpoints"].size() == 3);
  CHECK(j["checkpoints"][1]["n"] == 10);
  CHECK(j["checkpoints"][1]["value"] == 2.5);

  // Dyadic values have one canonical shortest form, so the whole document is
  // reproducible byte for byte.
  const auto dumped = to_json(record).dump();
  CHECK(dumped == to_json(record).dump());
  CHECK(dumped.find("\"rmsResidual\":0.0") != std::string::npos);

  CHECK(checkpoints_csv(record.checkpoints) == "n,value\n1,1\n10,2.5\n100,2.5\n");
}

TEST_CASE("diagnostic reports serialize as one document") {
  DiagnosticReport report;
  report.series = "test-series";
  report.budget = 1000;
  report.seed = 7;
  report.verdict = "inconclusive";
  ConditionEvidence evidence;
  evidence.statistic = 0.25;
  evidence.method = "probe";
  evidence.samples = 12;
  evidence.verdict = Verdict::Pass;
  report.per_condition["absolute"] = evidence;
  GrowthRecord record;
  record.checkpoints = {{1, 0.5}};
  report.growth_fits["absolute"] = record;

  const auto j = to_json(report);
  CHECK(j["series"] == "test-series");
  CHECK(j["budget"] == 1000);
  CHECK(j["seed"] == 7);
  CHECK(j["verdict"] == "inconclusive");
  CHECK(j["conditions"]["absolute"]["statistic"] == 0.25);
  CHECK(j["conditions"]["absolute"]["verdict"] == "pass");
  CHECK(j["conditions"]["absolute"]["samples"] == 12);
  CHECK(j["growthFits"]["absolute"]["checkpoints"][0]["n"] == 1);

  const auto csv = report_checkpoints_csv(report);
  CHECK(csv == "table,n,value\nabsolute,1,0.5\n");
}

TEST_CASE("rearrangement traces export as json lines") {
  const auto spec = SeriesSpec::alternating_harmonic();
  const auto trace = riemann_rearrange(spec, 0.5, 1e-3, 10000);
  REQUIRE(trace.status == RearrangeStatus::Success);

  const auto lines = trace_json_lines(spec, trace);
  std::size_t count = 0;
  std::size_t pos = 0;
  while (pos < lines.size()) {
    const auto next = lines.find('\n', pos);
    REQUIRE(next != std::string::npos);
    const auto line = Json::parse(lines.substr(pos, next - pos));
    const auto step = line["step"].get<std::int64_t>();
    CHECK(step == static_cast<std::int64_t>(count) + 1);
    const auto idx = line["termIndex"].get<std::int64_t>();
    CHECK(idx == trace.permutation_prefix[count]);
    CHECK(line["termValue"].get<double>() == spec.term_scalar(idx));
    CHECK(line["runningSum"].get<double>() == trace.partial_sums[count]);
    pos = next + 1;
    ++count;
  }
  CHECK(count == trace.permutation_prefix.size());

  const auto doc = to_json(trace);
  CHECK(doc["status"] == "success");
  CHECK(doc["finalSum"] == trace.final_sum);
  CHECK(doc["precheck"]["passed"] == true);
  CHECK(doc["targetsHit"].size() == trace.targets_hit.size());
  CHECK(doc["permutationPrefix"].size() == trace.permutation_prefix.size());
}

TEST_CASE("sensitivity reports carry one row per strategy") {
  const auto stream = GradientStream::quadratic(3, 40, 5);
  const auto report = permutation_sensitivity(
      stream, LrSchedule::constant(0.01), 3, 11,
      {Strategy::Naive, Strategy::ExactRational});

  const auto j = to_json(report);
  CHECK(j["numPerms"] == 3);
  CHECK(j["seed"] == 11);
  CHECK(j["flagged"].empty());
  REQUIRE(j["strategies"].size() == 2);
  for (const auto& row : j["strategies"]) {
    CHECK(row.contains("strategy"));
    CHECK(row.contains("numPerms"));
    CHECK(row.contains("seed"));
    CHECK(row.contains("maxPairwiseDeviation"));
    CHECK(row.contains("referenceDeviation"));
    CHECK(row.contains("relativeToNaive"));
  }
  CHECK(j["strategies"][0]["strategy"] == "exact-rational");
  CHECK(j["strategies"][0]["maxPairwiseDeviation"] == 0.0);
}

TEST_CASE("frame records serialize") {
  const auto mb = Frame::mercedes_benz();
  const auto c = analyze(mb, {0.5, -0.25});
  const auto rec = reconstruct(mb, c, ThresholdRule::mask({1.0, 1.0, 1.0}));
  const auto j = to_json(rec);
  CHECK(j["reconstructed"].size() == 2);
  CHECK(j["mask"] == Json::array({1.0, 1.0, 1.0}));
  CHECK(j["errorNorm"].get<double>() <= 1e-10);
  CHECK(j.contains("computableBound"));
  CHECK(j.contains("looseBound"));

  HaarRefinement row;
  row.level = 2;
  row.points = 4;
  row.coefficient_norm = 1.5;
  const auto h = to_json(row);
  CHECK(h["level"] == 2);
  CHECK(h["points"] == 4);
  CHECK(h["coefficientNorm"] == 1.5);
  CHECK(h.contains("finestBandFraction"));
  CHECK(h.contains("reconstructionError"));
}

TEST_CASE("the report envelope pins everything except the timestamp") {
  const std::vector<std::string> argv = {"unconv", "classify", "--series", "harmonic"};
  auto first = report_envelope("0.1.0", argv, 42, Json{{"verdict", "inconclusive"}});
  CHECK(first["toolVersion"] == "0.1.0");
  CHECK(first["argv"] == Json(argv));
  CHECK(first["seed"] == 42);
  CHECK(first["result"]["verdict"] == "inconclusive");

  const auto stamp = first["timestampUtc"].get<std::string>();
  CHECK(std::regex_match(stamp, std::regex(R"(\d{4}-\d{2}-\d{2}T\d{2}:\d{2}:\d{2}Z)")));

  auto second = report_envelope("0.1.0", argv, 42, Json{{"verdict", "inconclusive"}});
  first.erase("timestampUtc");
  second.erase("timestampUtc");
  CHECK(first.dump() == second.dump());

  // Key order is fixed by construction, not alphabetically.
  const auto dumped = report_envelope("0.1.0", argv, 42, Json::object()).dump();
  CHECK(dumped.find("toolVersion") < dumped.find("argv"));
  CHECK(dumped.find("argv") < dumped.find("seed"));
  CHECK(dumped.find("seed") < dumped.find("timestampUtc"));
}
