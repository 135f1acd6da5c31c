#pragma once

#include "crunch/baselines.hpp"
#include "crunch/gcs.hpp"
#include "crunch/harness.hpp"
#include "crunch/objective.hpp"
#include "crunch/run_result.hpp"

#include <json.hpp>

#include <iosfwd>
#include <span>
#include <string>

namespace crunch {

// JSON mappings (nlohmann ADL hooks). from_json validates and throws ConfigError.
void to_json(nlohmann::json& j, const ObjectiveSpec& spec);
void from_json(const nlohmann::json& j, ObjectiveSpec& spec);
void to_json(nlohmann::json& j, const GcsConfig& config);
void from_json(const nlohmann::json& j, GcsConfig& config);
void to_json(nlohmann::json& j, const BaselineConfig& config);
void from_json(const nlohmann::json& j, BaselineConfig& config);
void to_json(nlohmann::json& j, const TraceEntry& entry);
void from_json(const nlohmann::json& j, TraceEntry& entry);
void to_json(nlohmann::json& j, const RunResult& result);
void from_json(const nlohmann::json& j, RunResult& result);
void to_json(nlohmann::json& j, const ComparisonRow& row);
void from_json(const nlohmann::json& j, ComparisonRow& row);
void to_json(nlohmann::json& j, const ComparisonReport& report);
void from_json(const nlohmann::json& j, ComparisonReport& report);
void to_json(nlohmann::json& j, const FailProbRow& row);
void from_json(const nlohmann::json& j, FailProbRow& row);
void to_json(nlohmann::json& j, const FailProbReport& report);
void from_json(const nlohmann::json& j, FailProbReport& report);

/// Shortest decimal that round-trips to the same double.
std::string format_double(double v);

/// iter,x0,...,x{n-1},value,sd_before,accepted
void write_trace_csv(std::ostream& out, std::span<const TraceEntry> trace);

/// start_x,start_y,method,final_value,passed,evaluations,seed  (2-D starts only)
void write_comparison_csv(std::ostream& out, const ComparisonReport& report);

/// start_x,start_y,trials,failures,fail_fraction,base_seed  (2-D starts only)
void write_failprob_csv(std::ostream& out, const FailProbReport& report);

} // namespace crunch
