#pragma once

#include "crunch/baselines.hpp"
#include "crunch/gcs.hpp"
#include "crunch/objective.hpp"

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace crunch {

inline constexpr double kDefaultThreshold = 0.5;

/// Method names accepted by the comparison runner, in canonical order.
inline constexpr std::string_view kMethodNames[] = {
    "gcs", "nelder_mead", "powell", "fd_gradient_descent"};

/// Comma separated kMethodNames, for error messages.
std::string valid_method_list();

struct Classification {
    bool passed = false;
    /// Set when the value was NaN or infinite (always a failure).
    bool non_finite = false;
};

/// pass iff final_value < threshold.
Classification classify(double final_value, double threshold = kDefaultThreshold);

/// Seed for a sub-run, chained through the splitmix64 finalizer `mix`:
///   h = mix(base_seed + G);  for each index i: h = mix(h ^ (i + G));  G = 0x9e3779b97f4a7c15
/// mix is a bijection, so changing any single input always changes the result.
/// Stable across platforms.
std::uint64_t derive_seed(std::uint64_t base_seed, std::initializer_list<std::uint64_t> indices);

struct ComparisonRow {
    std::vector<double> start;
    std::string method;
    double final_value = 0.0;
    bool passed = false;
    std::size_t evaluations = 0;
    std::optional<std::uint64_t> seed;

    friend bool operator==(const ComparisonRow&, const ComparisonRow&) = default;
};

struct ComparisonReport {
    ObjectiveSpec objective;
    double threshold = kDefaultThreshold;
    std::uint64_t base_seed = 0;
    GcsConfig gcs;
    BaselineConfig baseline;
    std::vector<std::string> methods;
    std::vector<ComparisonRow> rows;

    friend bool operator==(const ComparisonReport&, const ComparisonReport&) = default;
};

struct ComparisonOptions {
    double threshold = kDefaultThreshold;
    /// seed and record_trace are ignored; every GCS row gets its own derived seed.
    GcsConfig gcs;
    /// method is ignored; it is set per row.
    BaselineConfig baseline;
};

/// One row per (start, method), start-major. GCS rows use seed
/// derive_seed(base_seed, {start_index, method_index}); baselines are deterministic.
/// Throws ConfigError for empty inputs or unknown method names.
ComparisonReport run_comparison(const ObjectiveSpec& objective,
                                std::span<const std::vector<double>> starts,
                                std::span<const std::string> methods, std::uint64_t base_seed,
                                const ComparisonOptions& options = {});

struct FailProbRow {
    std::vector<double> start;
    std::size_t failures = 0;
    double fail_fraction = 0.0;
    std::uint64_t base_seed = 0;

    friend bool operator==(const FailProbRow&, const FailProbRow&) = default;
};

struct FailProbReport {
    ObjectiveSpec objective;
    double threshold = kDefaultThreshold;
    std::size_t trials_per_start = 100;
    GcsConfig gcs;
    std::vector<FailProbRow> rows;

    friend bool operator==(const FailProbReport&, const FailProbReport&) = default;
};

struct FailProbOptions {
    std::size_t trials = 100;
    double threshold = kDefaultThreshold;
    std::uint64_t base_seed = 0;
    /// seed and record_trace are ignored.
    GcsConfig gcs;
    /// Worker threads; 0 means std::thread::hardware_concurrency(). Never affects results.
    std::size_t jobs = 1;
};

/// `trials` independent GCS runs per start with seeds derive_seed(base_seed, {start_index,
/// trial_index}). Counts are folded in (start, trial) order, so the report does not
/// depend on `jobs`.
FailProbReport run_failprob(const ObjectiveSpec& objective,
                            std::span<const std::vector<double>> starts,
                            const FailProbOptions& options);

/// Diagonal starts [s, s] for s = first, first + step, ..., while s <= last.
std::vector<std::vector<double>> diagonal_starts(double first, double last, double step,
                                                 std::size_t dimension = 2);

} // namespace crunch
