#include "unconv/json_io.hpp"

#include <cstdio>
#include <ctime>

namespace unconv {

Json to_json(const GrowthFit& fit) {
  return Json{{"class", to_string(fit.cls)},
              {"a", fit.a},
              {"b", fit.b},
              {"c", fit.c},
              {"beta", fit.beta},
              {"rmsResidual", fit.rms_residual},
              {"relativeResidual", fit.relative_residual}};
}

Json to_json(const GrowthRecord& record) {
  Json checkpoints = Json::array();
  for (const auto& point : record.checkpoints)
    checkpoints.push_back(Json{{"n", point.n}, {"value", point.value}});
  return Json{{"fit", to_json(record.fit)}, {"checkpoints", std::move(checkpoints)}};
}

Json to_json(const ConditionEvidence& evidence) {
  return Json{{"statistic", evidence.statistic},
              {"method", evidence.method},
              {"samples", evidence.samples},
              {"verdict", to_string(evidence.verdict)}};
}

Json to_json(const DiagnosticReport& report) {
  Json conditions = Json::object();
  for (const auto& [name, evidence] : report.per_condition)
    conditions[name] = to_json(evidence);
  Json fits = Json::object();
  for (const auto& [name, record] : report.growth_fits) fits[name] = to_json(record);
  return Json{{"series", report.series},   {"budget", report.budget},
              {"seed", report.seed},       {"verdict", report.verdict},
              {"conditions", conditions},  {"growthFits", fits}};
}

Json to_json(const PrecheckReport& precheck) {
  return Json{{"scalarShape", precheck.scalar_shape},
              {"scanned", precheck.scanned},
              {"positiveMass", precheck.positive_mass},
              {"negativeMass", precheck.negative_mass},
              {"requiredMass", precheck.required_mass},
              {"tailMaxTerm", precheck.tail_max_term},
              {"positivePartDiverges", precheck.positive_part_diverges},
              {"negativePartDiverges", precheck.negative_part_diverges},
              {"termsVanish", precheck.terms_vanish},
              {"passed", precheck.passed}};
}

Json to_json(const RearrangementTrace& trace) {
  Json hits = Json::array();
  for (const auto& [step, sum] : trace.targets_hit)
    hits.push_back(Json{{"step", step}, {"sum", sum}});
  return Json{{"status", to_string(trace.status)},
              {"precheck", to_json(trace.precheck)},
              {"permutationPrefix", trace.permutation_prefix},
              {"partialSums", trace.partial_sums},
              {"targetsHit", std::move(hits)},
              {"budgetUsed", trace.budget_used},
              {"finalSum", trace.final_sum}};
}

Json to_json(const StrategyDeviation& deviation) {
  return Json{{"maxPairwiseDeviation", deviation.max_pairwise_deviation},
              {"referenceDeviation", deviation.reference_deviation},
              {"relativeToNaive", deviation.relative_to_naive}};
}

Json to_json(const SensitivityReport& report) {
  Json strategies = Json::array();
  for (const auto& [name, deviation] : report.per_strategy) {
    Json row{{"strategy", name}, {"numPerms", report.num_perms}, {"seed", report.seed}};
    row.update(to_json(deviation));
    strategies.push_back(std::move(row));
  }
  return Json{{"numPerms", report.num_perms},
              {"seed", report.seed},
              {"flagged", report.flagged},
              {"strategies", std::move(strategies)}};
}

Json to_json(const Reconstruction& reconstruction) {
  return Json{{"reconstructed", reconstruction.reconstructed},
              {"mask", reconstruction.mask},
              {"errorNorm", reconstruction.error_norm},
              {"computableBound", reconstruction.computable_bound},
              {"looseBound", reconstruction.loose_bound}};
}

Json to_json(const HaarRefinement& row) {
  return Json{{"level", row.level},
              {"points", row.points},
              {"coefficientNorm", row.coefficient_norm},
              {"finestBandNorm", row.finest_band_norm},
              {"finestBandFraction", row.finest_band_fraction},
              {"reconstructionError", row.reconstruction_error}};
}

std::string trace_json_lines(const SeriesSpec& spec, const RearrangementTrace& trace) {
  std::string out;
  for (std::size_t k = 0; k < trace.permutation_prefix.size(); ++k) {
    const std::int64_t idx = trace.permutation_prefix[k];
    out += Json{{"step", static_cast<std::int64_t>(k) + 1},
                {"termIndex", idx},
                {"termValue", spec.term_scalar(idx)},
                {"runningSum", trace.partial_sums[k]}}
               .dump();
    out += '\n';
  }
  return out;
}

namespace {

void append_csv_row(std::string& out, const std::string& prefix, const Checkpoint& point) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%lld,%.17g\n", static_cast<long long>(point.n), point.value);
  out += prefix;
  out += buf;
}

}  // namespace

std::string checkpoints_csv(const std::vector<Checkpoint>& checkpoints) {
  std::string out = "n,value\n";
  for (const auto& point : checkpoints) append_csv_row(out, "", point);
  return out;
}

std::string report_checkpoints_csv(const DiagnosticReport& report) {
  std::string out = "table,n,value\n";
  for (const auto& [name, record] : report.growth_fits)
    for (const auto& point : record.checkpoints) append_csv_row(out, name + ",", point);
  return out;
}

Json report_envelope(const std::string& tool_version, const std::vector<std::string>& argv,
                     std::uint64_t seed, Json result) {
  const std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return Json{{"toolVersion", tool_version},
              {"argv", argv},
              {"seed", seed},
              {"timestampUtc", stamp},
              {"result", std::move(result)}};
}

}  // namespace unconv
