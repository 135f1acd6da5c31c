#include "crunch/harness.hpp"

#include "crunch/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace crunch {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

void check_starts(const ObjectiveSpec& objective, std::span<const std::vector<double>> starts) {
    if (starts.empty()) {
        throw ConfigError("at least one start point is required");
    }
    for (const auto& s : starts) {
        if (s.size() != objective.dimension) {
            throw ContractViolation("start point dimension " + std::to_string(s.size()) +
                                    " does not match objective dimension " +
                                    std::to_string(objective.dimension));
        }
    }
}

} // namespace

std::string valid_method_list() {
    std::string out;
    for (std::string_view name : kMethodNames) {
        if (!out.empty()) out += ", ";
        out += name;
    }
    return out;
}

Classification classify(double final_value, double threshold) {
    if (!std::isfinite(final_value)) {
        return {false, true};
    }
    return {final_value < threshold, false};
}

std::uint64_t derive_seed(std::uint64_t base_seed, std::initializer_list<std::uint64_t> indices) {
    std::uint64_t h = mix(base_seed + kGolden);
    for (std::uint64_t index : indices) {
        h = mix(h ^ (index + kGolden));
    }
    return h;
}

ComparisonReport run_comparison(const ObjectiveSpec& objective,
                                std::span<const std::vector<double>> starts,
                                std::span<const std::string> methods, std::uint64_t base_seed,
                                const ComparisonOptions& options) {
    objective.validate();
    check_starts(objective, starts);
    if (methods.empty()) {
        throw ConfigError("at least one method is required (valid: " + valid_method_list() + ")");
    }
    for (const auto& m : methods) {
        if (m != "gcs" && !baseline_method_from_string(m)) {
            throw ConfigError("unknown method '" + m + "' (valid: " + valid_method_list() + ")");
        }
    }
    options.gcs.validate();
    options.baseline.validate(objective.dimension);

    ComparisonReport report;
    report.objective = objective;
    report.threshold = options.threshold;
    report.base_seed = base_seed;
    report.gcs = options.gcs;
    report.gcs.seed = 0;
    report.gcs.record_trace = false;
    report.baseline = options.baseline;
    report.methods.assign(methods.begin(), methods.end());

    const Objective f(objective);
    for (std::size_t si = 0; si < starts.size(); ++si) {
        for (std::size_t mi = 0; mi < methods.size(); ++mi) {
            ComparisonRow row;
            row.start = starts[si];
            row.method = methods[mi];
            RunResult result;
            if (methods[mi] == "gcs") {
                GcsConfig config = report.gcs;
                config.seed = derive_seed(base_seed, {si, mi});
                result = gcs_run(f, starts[si], config);
                row.seed = config.seed;
            } else {
                BaselineConfig config = options.baseline;
                config.method = *baseline_method_from_string(methods[mi]);
                result = run_baseline(f, starts[si], config);
            }
            row.final_value = result.best_value;
            row.passed = classify(result.best_value, options.threshold).passed;
            row.evaluations = result.evaluations;
            report.rows.push_back(std::move(row));
        }
    }
    return report;
}

FailProbReport run_failprob(const ObjectiveSpec& objective,
                            std::span<const std::vector<double>> starts,
                            const FailProbOptions& options) {
    objective.validate();
    check_starts(objective, starts);
    if (options.trials < 1) {
        throw ConfigError("trials must be >= 1");
    }
    if (std::isnan(options.threshold)) {
        throw ConfigError("threshold must not be NaN");
    }
    options.gcs.validate();

    FailProbReport report;
    report.objective = objective;
    report.threshold = options.threshold;
    report.trials_per_start = options.trials;
    report.gcs = options.gcs;
    report.gcs.seed = 0;
    report.gcs.record_trace = false;

    const Objective f(objective);
    const std::size_t total = starts.size() * options.trials;
    std::vector<unsigned char> failed(total, 0);
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto worker = [&] {
        while (true) {
            const std::size_t task = next.fetch_add(1, std::memory_order_relaxed);
            if (task >= total) {
                return;
            }
            const std::size_t si = task / options.trials;
            const std::size_t ti = task % options.trials;
            try {
                GcsConfig config = report.gcs;
                config.seed = derive_seed(options.base_seed, {si, ti});
                const RunResult result = gcs_run(f, starts[si], config);
                failed[task] = classify(result.best_value, options.threshold).passed ? 0 : 1;
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                next.store(total);
            }
        }
    };

    std::size_t jobs = options.jobs == 0 ? std::thread::hardware_concurrency() : options.jobs;
    jobs = std::clamp<std::size_t>(jobs, 1, total);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(jobs);
        for (std::size_t j = 0; j < jobs; ++j) {
            pool.emplace_back(worker);
        }
    }
    if (error) {
        std::rethrow_exception(error);
    }

    for (std::size_t si = 0; si < starts.size(); ++si) {
        FailProbRow row;
        row.start = starts[si];
        for (std::size_t ti = 0; ti < options.trials; ++ti) {
            row.failures += failed[si * options.trials + ti];
        }
        row.fail_fraction =
            static_cast<double>(row.failures) / static_cast<double>(options.trials);
        row.base_seed = options.base_seed;
        report.rows.push_back(std::move(row));
    }
    return report;
}

std::vector<std::vector<double>> diagonal_starts(double first, double last, double step,
                                                 std::size_t dimension) {
    if (!(step > 0.0) || !std::isfinite(step) || !std::isfinite(first) || !std::isfinite(last)) {
        throw ConfigError("diagonal range needs finite bounds and a positive step");
    }
    if (last < first) {
        throw ConfigError("diagonal range end is below its start");
    }
    if (dimension < 1) {
        throw ConfigError("diagonal starts need dimension >= 1");
    }
    std::vector<std::vector<double>> out;
    const double slack = step * 1e-9;
    for (std::size_t k = 0;; ++k) {
        const double s = first + static_cast<double>(k) * step;
        if (s > last + slack) break;
        out.emplace_back(dimension, s);
    }
    return out;
}

} // namespace crunch
