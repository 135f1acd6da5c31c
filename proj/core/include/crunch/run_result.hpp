#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace crunch {

/// One GCS iteration: the candidate that was drawn, its value, the sd it was drawn
/// with, and whether it replaced the incumbent.
struct TraceEntry {
    std::size_t iter = 0;
    std::vector<double> candidate;
    double candidate_value = 0.0;
    double sd_before = 0.0;
    bool accepted = false;

    friend bool operator==(const TraceEntry&, const TraceEntry&) = default;
};

/// Outcome of a single optimizer run. Shared by GCS and the deterministic baselines;
/// baselines leave `trace` empty and report seed 0.
struct RunResult {
    std::string method;
    std::vector<double> best_point;
    double best_value = 0.0;
    std::size_t evaluations = 0;
    std::size_t accepted_count = 0;
    std::optional<std::vector<TraceEntry>> trace;
    std::uint64_t seed = 0;

    friend bool operator==(const RunResult&, const RunResult&) = default;
};

} // namespace crunch
