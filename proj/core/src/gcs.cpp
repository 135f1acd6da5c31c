#include "crunch/gcs.hpp"

#include "crunch/errors.hpp"

#include <cmath>

namespace crunch {

namespace {

double scheduled_sd(const GcsConfig& config, std::size_t streak) {
    // Closed form rather than repeated multiplication: the product drifts by more than
    // a few ulps after a few hundred rejections.
    return config.initial_sd * std::pow(config.growth_factor, static_cast<double>(streak));
}

bool sd_overflows(const GcsConfig& config, double sd) {
    return !std::isfinite(sd) || sd > config.sd_overflow_limit;
}

} // namespace

void GcsConfig::validate() const {
    if (!(initial_sd > 0.0) || !std::isfinite(initial_sd)) {
        throw ConfigError("initial_sd must be positive and finite");
    }
    if (!(growth_factor > 1.0) || !std::isfinite(growth_factor)) {
        throw ConfigError("growth_factor must be finite and > 1");
    }
    if (max_iters < 1) {
        throw ConfigError("max_iters must be >= 1");
    }
    if (!(sd_overflow_limit > initial_sd)) {
        throw ConfigError("sd_overflow_limit must exceed initial_sd");
    }
}

std::vector<double> mutate(std::span<const double> point, double sd, GaussianStream& rng) {
    if (!(sd > 0.0) || !std::isfinite(sd)) {
        throw ContractViolation("mutation sd must be positive and finite");
    }
    std::vector<double> out(point.begin(), point.end());
    for (double& x : out) {
        if (!std::isfinite(x)) {
            throw DomainError("cannot mutate a non-finite point");
        }
        x += rng.next(sd);
    }
    return out;
}

GcsState gcs_init(const Objective& objective, std::span<const double> start,
                  const GcsConfig& config) {
    GcsState state;
    state.point.assign(start.begin(), start.end());
    state.value = objective(state.point);
    state.sd = config.initial_sd;
    return state;
}

StepRecord gcs_step(GcsState& state, const GcsConfig& config, const Objective& objective,
                    GaussianStream& rng) {
    StepRecord record;
    record.sd_before = state.sd;
    record.candidate = mutate(state.point, state.sd, rng);
    record.candidate_value = objective(record.candidate);

    if (record.candidate_value < state.value) {
        record.accepted = true;
        state.point = record.candidate;
        state.value = record.candidate_value;
        state.sd = config.initial_sd;
        state.rejection_streak = 0;
        return record;
    }

    ++state.rejection_streak;
    state.sd = scheduled_sd(config, state.rejection_streak);
    if (sd_overflows(config, state.sd)) {
        state.sd = config.initial_sd;
        state.rejection_streak = 0;
    }
    return record;
}

RunResult gcs_run(const Objective& objective, std::span<const double> start,
                  const GcsConfig& config) {
    config.validate();
    if (start.size() != objective.dimension()) {
        throw ContractViolation("start point dimension does not match the objective");
    }

    GaussianStream rng(config.seed);
    GcsState state = gcs_init(objective, start, config);

    RunResult result;
    result.method = "gcs";
    result.seed = config.seed;
    result.evaluations = 1;
    if (config.record_trace) {
        result.trace.emplace();
        result.trace->reserve(config.max_iters);
    }

    for (std::size_t i = 0; i < config.max_iters; ++i) {
        StepRecord step = gcs_step(state, config, objective, rng);
        ++result.evaluations;
        if (step.accepted) {
            ++result.accepted_count;
        }
        if (result.trace) {
            result.trace->push_back(TraceEntry{i, std::move(step.candidate), step.candidate_value,
                                               step.sd_before, step.accepted});
        }
    }

    result.best_point = std::move(state.point);
    result.best_value = state.value;
    return result;
}

bool sd_schedule_check(std::span<const TraceEntry> trace, const GcsConfig& config) {
    std::size_t streak = 0;
    double expected = config.initial_sd;
    for (const TraceEntry& entry : trace) {
        if (!(entry.sd_before > 0.0) ||
            std::fabs(entry.sd_before - expected) > 4.0 * ulp(expected)) {
            return false;
        }
        if (entry.accepted) {
            streak = 0;
            expected = config.initial_sd;
            continue;
        }
        ++streak;
        expected = scheduled_sd(config, streak);
        if (sd_overflows(config, expected)) {
            streak = 0;
            expected = config.initial_sd;
        }
    }
    return true;
}

} // namespace crunch
