#include "crunch/serialization.hpp"

#include "crunch/errors.hpp"

#include <charconv>
#include <ostream>
#include <system_error>

namespace crunch {

using nlohmann::json;

namespace {

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
    return j.contains(key) ? j.at(key).get<T>() : fallback;
}

void require_2d(std::span<const double> start) {
    if (start.size() != 2) {
        throw ConfigError("CSV report schema has start_x,start_y columns and needs 2-D starts; "
                          "use the JSON format for other dimensions");
    }
}

} // namespace

std::string format_double(double v) {
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{}) {
        return "nan";
    }
    return std::string(buf, end);
}

void to_json(json& j, const ObjectiveSpec& spec) {
    j = json{{"kind", to_string(spec.kind)},
             {"lambda", spec.lambda},
             {"mu", spec.mu},
             {"dimension", spec.dimension}};
}

void from_json(const json& j, ObjectiveSpec& spec) {
    spec.kind = objective_kind_from_string(j.at("kind").get<std::string>());
    spec.lambda = get_or(j, "lambda", ObjectiveSpec{}.lambda);
    spec.mu = get_or(j, "mu", ObjectiveSpec{}.mu);
    spec.dimension = get_or(j, "dimension", ObjectiveSpec{}.dimension);
    spec.validate();
}

void to_json(json& j, const GcsConfig& config) {
    j = json{{"initial_sd", config.initial_sd},
             {"growth_factor", config.growth_factor},
             {"max_iters", config.max_iters},
             {"sd_overflow_limit", config.sd_overflow_limit},
             {"seed", config.seed},
             {"record_trace", config.record_trace}};
}

void from_json(const json& j, GcsConfig& config) {
    const GcsConfig d;
    config.initial_sd = get_or(j, "initial_sd", d.initial_sd);
    config.growth_factor = get_or(j, "growth_factor", d.growth_factor);
    config.max_iters = get_or(j, "max_iters", d.max_iters);
    config.sd_overflow_limit = get_or(j, "sd_overflow_limit", d.sd_overflow_limit);
    config.seed = get_or(j, "seed", d.seed);
    config.record_trace = get_or(j, "record_trace", d.record_trace);
    config.validate();
}

void to_json(json& j, const BaselineConfig& config) {
    j = json{{"method", to_string(config.method)},
             {"max_evals", config.max_evals},
             {"x_tol", config.x_tol},
             {"f_tol", config.f_tol},
             {"fd_step", config.fd_step},
             {"initial_simplex_scale", config.initial_simplex_scale}};
}

void from_json(const json& j, BaselineConfig& config) {
    const BaselineConfig d;
    const auto name = get_or<std::string>(j, "method", std::string(to_string(d.method)));
    const auto method = baseline_method_from_string(name);
    if (!method) {
        throw ConfigError("unknown baseline method '" + name + "'");
    }
    config.method = *method;
    config.max_evals = get_or(j, "max_evals", d.max_evals);
    config.x_tol = get_or(j, "x_tol", d.x_tol);
    config.f_tol = get_or(j, "f_tol", d.f_tol);
    config.fd_step = get_or(j, "fd_step", d.fd_step);
    config.initial_simplex_scale = get_or(j, "initial_simplex_scale", d.initial_simplex_scale);
    config.validate(0);
}

void to_json(json& j, const TraceEntry& entry) {
    j = json{{"iter", entry.iter},
             {"candidate", entry.candidate},
             {"candidate_value", entry.candidate_value},
             {"sd_before", entry.sd_before},
             {"accepted", entry.accepted}};
}

void from_json(const json& j, TraceEntry& entry) {
    j.at("iter").get_to(entry.iter);
    j.at("candidate").get_to(entry.candidate);
    j.at("candidate_value").get_to(entry.candidate_value);
    j.at("sd_before").get_to(entry.sd_before);
    j.at("accepted").get_to(entry.accepted);
}

void to_json(json& j, const RunResult& result) {
    j = json{{"method", result.method},
             {"best_point", result.best_point},
             {"best_value", result.best_value},
             {"evaluations", result.evaluations},
             {"accepted_count", result.accepted_count},
             {"seed", result.seed}};
    if (result.trace) {
        j["trace"] = *result.trace;
    }
}

void from_json(const json& j, RunResult& result) {
    j.at("method").get_to(result.method);
    j.at("best_point").get_to(result.best_point);
    j.at("best_value").get_to(result.best_value);
    j.at("evaluations").get_to(result.evaluations);
    j.at("accepted_count").get_to(result.accepted_count);
    j.at("seed").get_to(result.seed);
    if (j.contains("trace")) {
        result.trace = j.at("trace").get<std::vector<TraceEntry>>();
    } else {
        result.trace.reset();
    }
}

void to_json(json& j, const ComparisonRow& row) {
    j = json{{"start", row.start},
             {"method", row.method},
             {"final_value", row.final_value},
             {"passed", row.passed},
             {"evaluations", row.evaluations},
             {"seed", row.seed ? json(*row.seed) : json(nullptr)}};
}

void from_json(const json& j, ComparisonRow& row) {
    j.at("start").get_to(row.start);
    j.at("method").get_to(row.method);
    j.at("final_value").get_to(row.final_value);
    j.at("passed").get_to(row.passed);
    j.at("evaluations").get_to(row.evaluations);
    if (j.contains("seed") && !j.at("seed").is_null()) {
        row.seed = j.at("seed").get<std::uint64_t>();
    } else {
        row.seed.reset();
    }
}

void to_json(json& j, const ComparisonReport& report) {
    j = json{{"report", "comparison"},
             {"objective", report.objective},
             {"threshold", report.threshold},
             {"base_seed", report.base_seed},
             {"gcs", report.gcs},
             {"baseline", report.baseline},
             {"methods", report.methods},
             {"rows", report.rows}};
}

void from_json(const json& j, ComparisonReport& report) {
    j.at("objective").get_to(report.objective);
    j.at("threshold").get_to(report.threshold);
    j.at("base_seed").get_to(report.base_seed);
    j.at("gcs").get_to(report.gcs);
    j.at("baseline").get_to(report.baseline);
    j.at("methods").get_to(report.methods);
    j.at("rows").get_to(report.rows);
}

void to_json(json& j, const FailProbRow& row) {
    j = json{{"start", row.start},
             {"failures", row.failures},
             {"fail_fraction", row.fail_fraction},
             {"base_seed", row.base_seed}};
}

void from_json(const json& j, FailProbRow& row) {
    j.at("start").get_to(row.start);
    j.at("failures").get_to(row.failures);
    j.at("fail_fraction").get_to(row.fail_fraction);
    j.at("base_seed").get_to(row.base_seed);
}

void to_json(json& j, const FailProbReport& report) {
    j = json{{"report", "failprob"},
             {"objective", report.objective},
             {"threshold", report.threshold},
             {"trials_per_start", report.trials_per_start},
             {"gcs", report.gcs},
             {"rows", report.rows}};
}

void from_json(const json& j, FailProbReport& report) {
    j.at("objective").get_to(report.objective);
    j.at("threshold").get_to(report.threshold);
    j.at("trials_per_start").get_to(report.trials_per_start);
    j.at("gcs").get_to(report.gcs);
    j.at("rows").get_to(report.rows);
}

void write_trace_csv(std::ostream& out, std::span<const TraceEntry> trace) {
    const std::size_t dim = trace.empty() ? 0 : trace.front().candidate.size();
    out << "iter";
    for (std::size_t i = 0; i < dim; ++i) {
        out << ",x" << i;
    }
    out << ",value,sd_before,accepted\n";
    for (const TraceEntry& e : trace) {
        out << e.iter;
        for (double x : e.candidate) {
            out << ',' << format_double(x);
        }
        out << ',' << format_double(e.candidate_value) << ',' << format_double(e.sd_before) << ','
            << (e.accepted ? "true" : "false") << '\n';
    }
}

void write_comparison_csv(std::ostream& out, const ComparisonReport& report) {
    for (const auto& row : report.rows) {
        require_2d(row.start);
    }
    out << "start_x,start_y,method,final_value,passed,evaluations,seed\n";
    for (const auto& row : report.rows) {
        out << format_double(row.start[0]) << ',' << format_double(row.start[1]) << ','
            << row.method << ',' << format_double(row.final_value) << ','
            << (row.passed ? "true" : "false") << ',' << row.evaluations << ',';
        if (row.seed) {
            out << *row.seed;
        }
        out << '\n';
    }
}

void write_failprob_csv(std::ostream& out, const FailProbReport& report) {
    for (const auto& row : report.rows) {
        require_2d(row.start);
    }
    out << "start_x,start_y,trials,failures,fail_fraction,base_seed\n";
    for (const auto& row : report.rows) {
        out << format_double(row.start[0]) << ',' << format_double(row.start[1]) << ','
            << report.trials_per_start << ',' << row.failures << ','
            << format_double(row.fail_fraction) << ',' << row.base_seed << '\n';
    }
}

} // namespace crunch
