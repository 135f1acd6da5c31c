#pragma once

#include "crunch/objective.hpp"
#include "crunch/run_result.hpp"

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace crunch {

/// Gaussian Crunching Search hyperparameters. Defaults are the standard settings.
struct GcsConfig {
    double initial_sd = 1.0;
    double growth_factor = 1.01;
    std::size_t max_iters = 10000;
    /// sd is reset to initial_sd once it exceeds this value or stops being finite.
    double sd_overflow_limit = 1e300;
    std::uint64_t seed = 42;
    bool record_trace = false;

    void validate() const;

    friend bool operator==(const GcsConfig&, const GcsConfig&) = default;
};

/// Seeded stream of normal deviates. One mt19937_64 engine per run; deviates come from
/// libstdc++'s normal_distribution, so replay is exact on one standard library.
class GaussianStream {
public:
    explicit GaussianStream(std::uint64_t seed) : engine_(seed) {}

    /// One draw from Normal(0, sd^2).
    double next(double sd) { ++draws_; return sd * unit_(engine_); }

    std::uint64_t draws() const noexcept { return draws_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> unit_{0.0, 1.0};
    std::uint64_t draws_ = 0;
};

/// point + delta with delta_i ~ Normal(0, sd^2) i.i.d.; consumes point.size() draws.
/// Throws ContractViolation if sd is not positive and finite, DomainError on a non-finite point.
std::vector<double> mutate(std::span<const double> point, double sd, GaussianStream& rng);

/// Incumbent plus mutation schedule. `rejection_streak` counts rejections since the last
/// reset, and sd == initial_sd * growth_factor^rejection_streak.
struct GcsState {
    std::vector<double> point;
    double value = 0.0;
    double sd = 1.0;
    std::size_t rejection_streak = 0;
};

struct StepRecord {
    std::vector<double> candidate;
    double candidate_value = 0.0;
    double sd_before = 0.0;
    bool accepted = false;
};

/// Makes a fresh state at `start` (one objective evaluation).
GcsState gcs_init(const Objective& objective, std::span<const double> start,
                  const GcsConfig& config);

/// One iteration: draw a candidate, accept on strict improvement and reset sd, otherwise
/// grow sd by growth_factor and reset it on overflow. Exactly one objective evaluation.
StepRecord gcs_step(GcsState& state, const GcsConfig& config, const Objective& objective,
                    GaussianStream& rng);

/// Evaluates `start`, then runs max_iters steps. The config is validated before anything
/// is evaluated.
RunResult gcs_run(const Objective& objective, std::span<const double> start,
                  const GcsConfig& config);

/// Checks a recorded trace against the sd schedule: initial_sd after every acceptance
/// and overflow reset, initial_sd * growth_factor^k (within 4 ulps) after k consecutive
/// rejections. The trace must start at the first iteration of a run. Empty → true.
bool sd_schedule_check(std::span<const TraceEntry> trace, const GcsConfig& config);

} // namespace crunch
