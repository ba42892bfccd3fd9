#pragma once
// JSON and CSV projections of the result records. Keys are camelCase and
// insertion-ordered so identical inputs serialize byte-identically; doubles
// use the shortest round-trip form. Nothing here computes, it only reshapes.

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "unconv/diagnostics.hpp"
#include "unconv/frames.hpp"
#include "unconv/rearrange.hpp"
#include "unconv/sgd.hpp"

namespace unconv {

using Json = nlohmann::ordered_json;

Json to_json(const GrowthFit& fit);
Json to_json(const GrowthRecord& record);
Json to_json(const ConditionEvidence& evidence);
Json to_json(const DiagnosticReport& report);
Json to_json(const PrecheckReport& precheck);
Json to_json(const RearrangementTrace& trace);
Json to_json(const StrategyDeviation& deviation);
Json to_json(const SensitivityReport& report);
Json to_json(const Reconstruction& reconstruction);
Json to_json(const HaarRefinement& row);

// One compact JSON object per appended term, newline separated:
// {"step": k, "termIndex": sigma(k), "termValue": x_sigma(k), "runningSum": s_k}.
// pre: the trace belongs to `spec`, which must be scalar-shaped.
std::string trace_json_lines(const SeriesSpec& spec, const RearrangementTrace& trace);

// "n,value" rows, %.17g so values round-trip.
std::string checkpoints_csv(const std::vector<Checkpoint>& checkpoints);
// Every growth table of the report as "table,n,value" rows.
std::string report_checkpoints_csv(const DiagnosticReport& report);

// Standard output wrapper: {toolVersion, argv, seed, timestampUtc, result}.
// The timestamp is the only field that varies between identical runs.
Json report_envelope(const std::string& tool_version, const std::vector<std::string>& argv,
                     std::uint64_t seed, Json result);

}  // namespace unconv
