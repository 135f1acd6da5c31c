#include "cli.hpp"

#include "crunch/errors.hpp"
#include "crunch/serialization.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace crunch::cli {

namespace {

using nlohmann::json;

/// Bad flags or inputs discovered before any work starts.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t pos = 0;
    while (true) {
        const std::size_t next = s.find(sep, pos);
        parts.push_back(s.substr(pos, next - pos));
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    return parts;
}

double parse_number(std::string_view text) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v)) {
        throw ConfigError("not a finite number: '" + std::string(text) + "'");
    }
    return v;
}

std::vector<double> parse_point(std::string_view text) {
    std::vector<double> point;
    for (std::string_view part : split(text, ',')) {
        point.push_back(parse_number(part));
    }
    return point;
}

std::vector<std::string> parse_methods(std::string_view text) {
    std::vector<std::string> methods;
    for (std::string_view part : split(text, ',')) {
        part = trim(part);
        if (part.empty()) continue;
        std::string name(part);
        if (name != "gcs" && !baseline_method_from_string(name)) {
            throw UsageError("unknown method '" + name + "'; valid methods: " + valid_method_list());
        }
        methods.push_back(std::move(name));
    }
    if (methods.empty()) {
        throw UsageError("no methods given; valid methods: " + valid_method_list());
    }
    return methods;
}

std::uint64_t default_seed() {
    constexpr std::uint64_t kFallback = 42;
    const char* env = std::getenv("CRUNCH_SEED");
    if (env == nullptr || *env == '\0') {
        return kFallback;
    }
    std::uint64_t seed = 0;
    const std::string_view text(env);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), seed);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw UsageError("CRUNCH_SEED is not an unsigned 64-bit integer: '" + std::string(text) + "'");
    }
    return seed;
}

/// Flags shared by every subcommand that runs an optimizer.
struct Flags {
    std::string objective = "exp_well";
    double lambda = ObjectiveSpec{}.lambda;
    double mu = ObjectiveSpec{}.mu;
    std::string out;
    std::string format = "json";
    std::optional<std::uint64_t> seed;
    GcsConfig gcs;
    BaselineConfig baseline;
};

void add_objective_flags(CLI::App& cmd, Flags& f) {
    cmd.add_option("--objective", f.objective, "exp_well | sphere | rosenbrock")
        ->capture_default_str();
    cmd.add_option("--lambda", f.lambda, "exp_well depth")->capture_default_str();
    cmd.add_option("--mu", f.mu, "exp_well decay rate")->capture_default_str();
}

void add_output_flags(CLI::App& cmd, Flags& f, bool with_format) {
    cmd.add_option("--out", f.out, "Output file (default: stdout)");
    if (with_format) {
        cmd.add_option("--format", f.format, "json | csv")
            ->check(CLI::IsMember({"json", "csv"}))
            ->capture_default_str();
    }
}

void add_gcs_flags(CLI::App& cmd, Flags& f) {
    cmd.add_option("--seed", f.seed, "Seed (default: $CRUNCH_SEED, else 42)");
    cmd.add_option("--iters", f.gcs.max_iters, "GCS iterations per run")->capture_default_str();
    cmd.add_option("--sd", f.gcs.initial_sd, "GCS initial standard deviation")
        ->capture_default_str();
    cmd.add_option("--growth", f.gcs.growth_factor, "GCS sd growth factor on rejection")
        ->capture_default_str();
    cmd.add_option("--sd-limit", f.gcs.sd_overflow_limit, "GCS sd reset threshold")
        ->capture_default_str();
}

void add_baseline_flags(CLI::App& cmd, Flags& f) {
    cmd.add_option("--max-evals", f.baseline.max_evals, "Baseline evaluation budget")
        ->capture_default_str();
    cmd.add_option("--x-tol", f.baseline.x_tol)->capture_default_str();
    cmd.add_option("--f-tol", f.baseline.f_tol)->capture_default_str();
    cmd.add_option("--fd-step", f.baseline.fd_step)->capture_default_str();
    cmd.add_option("--simplex-scale", f.baseline.initial_simplex_scale)->capture_default_str();
}

ObjectiveSpec make_spec(const Flags& f, std::size_t dimension) {
    ObjectiveSpec spec;
    spec.kind = objective_kind_from_string(f.objective);
    spec.lambda = f.lambda;
    spec.mu = f.mu;
    spec.dimension = dimension;
    spec.validate();
    return spec;
}

std::size_t common_dimension(const std::vector<std::vector<double>>& starts) {
    if (starts.empty()) {
        throw UsageError("no start points given");
    }
    const std::size_t dim = starts.front().size();
    for (const auto& s : starts) {
        if (s.size() != dim) {
            throw UsageError("all start points must have the same dimension");
        }
    }
    return dim;
}

void check_out_path(const std::string& path) {
    if (path.empty()) return;
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty() && !std::filesystem::is_directory(parent)) {
        throw UsageError("output directory does not exist: " + parent.string());
    }
}

void emit(const std::string& path, std::ostream& out, const std::string& text) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        throw std::runtime_error("cannot open output file: " + path);
    }
    file << text;
    if (!file) {
        throw std::runtime_error("failed writing output file: " + path);
    }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

/// A validated command, ready to execute. Anything thrown while building one is a usage error.
using Action = std::function<void(std::ostream&)>;

Action prepare_run(const Flags& f, const std::string& start_text, const std::string& method,
                   const std::string& trace_path) {
    const std::vector<double> start = parse_point(start_text);
    const ObjectiveSpec spec = make_spec(f, start.size());
    const bool is_gcs = method == "gcs";
    const auto baseline_method = baseline_method_from_string(method);
    if (!is_gcs && !baseline_method) {
        throw UsageError("unknown method '" + method + "'; valid methods: " + valid_method_list());
    }
    GcsConfig gcs = f.gcs;
    gcs.seed = f.seed.value_or(default_seed());
    gcs.record_trace = !trace_path.empty();
    BaselineConfig baseline = f.baseline;
    if (is_gcs) {
        gcs.validate();
    } else {
        baseline.method = *baseline_method;
        baseline.validate(start.size());
        if (!trace_path.empty()) {
            throw UsageError("--trace is only available for --method gcs");
        }
    }
    check_out_path(f.out);
    check_out_path(trace_path);

    return [=](std::ostream& out) {
        const Objective objective(spec);
        RunResult result = is_gcs ? gcs_run(objective, start, gcs)
                                  : run_baseline(objective, start, baseline);
        if (result.trace) {
            std::ostringstream csv;
            write_trace_csv(csv, *result.trace);
            emit(trace_path, out, csv.str());
            result.trace.reset();
        }
        json j{{"command", "run"}, {"objective", spec}, {"start", start}, {"method", method}};
        if (is_gcs) {
            j["config"] = gcs;
        } else {
            j["config"] = baseline;
        }
        j["result"] = result;
        j["passed"] = classify(result.best_value).passed;
        emit(f.out, out, dump(j));
    };
}

Action prepare_bench(const Flags& f, const std::string& starts_text, const std::string& methods_text,
                     double threshold) {
    const auto starts = parse_starts(starts_text);
    const ObjectiveSpec spec = make_spec(f, common_dimension(starts));
    const auto methods = parse_methods(methods_text);
    ComparisonOptions options;
    options.threshold = threshold;
    options.gcs = f.gcs;
    options.baseline = f.baseline;
    options.gcs.validate();
    options.baseline.validate(spec.dimension);
    if (f.format == "csv" && spec.dimension != 2) {
        throw UsageError("--format csv needs 2-D starts");
    }
    const std::uint64_t seed = f.seed.value_or(default_seed());
    check_out_path(f.out);

    return [=](std::ostream& out) {
        const ComparisonReport report = run_comparison(spec, starts, methods, seed, options);
        if (f.format == "csv") {
            std::ostringstream csv;
            write_comparison_csv(csv, report);
            emit(f.out, out, csv.str());
        } else {
            emit(f.out, out, dump(json(report)));
        }
    };
}

Action prepare_failprob(const Flags& f, const std::string& starts_text, std::size_t dimension,
                        std::size_t trials, double threshold, std::size_t jobs) {
    const auto starts = parse_starts(starts_text, dimension);
    const ObjectiveSpec spec = make_spec(f, common_dimension(starts));
    if (trials < 1) {
        throw UsageError("--trials must be >= 1");
    }
    FailProbOptions options;
    options.trials = trials;
    options.threshold = threshold;
    options.base_seed = f.seed.value_or(default_seed());
    options.gcs = f.gcs;
    options.gcs.validate();
    options.jobs = jobs;
    if (f.format == "csv" && spec.dimension != 2) {
        throw UsageError("--format csv needs 2-D starts");
    }
    check_out_path(f.out);

    return [=](std::ostream& out) {
        const FailProbReport report = run_failprob(spec, starts, options);
        if (f.format == "csv") {
            std::ostringstream csv;
            write_failprob_csv(csv, report);
            emit(f.out, out, csv.str());
        } else {
            emit(f.out, out, dump(json(report)));
        }
    };
}

Action prepare_plateau(const Flags& f, const std::vector<std::string>& checks, int bits) {
    PrecisionModel prec{bits};
    prec.validate();
    std::vector<std::vector<double>> points;
    for (const auto& text : checks) {
        for (auto& p : parse_starts(text)) {
            points.push_back(std::move(p));
        }
    }
    const std::size_t dim = points.empty() ? 2 : common_dimension(points);
    const ObjectiveSpec spec = make_spec(f, dim);
    if (spec.kind != ObjectiveKind::exp_well) {
        throw UsageError("plateau analysis is only defined for exp_well");
    }
    check_out_path(f.out);

    return [=](std::ostream& out) {
        json verdicts = json::array();
        for (const auto& p : points) {
            double sum_sq = 0.0;
            for (double x : p) sum_sq += x * x;
            verdicts.push_back({{"point", p},
                                {"norm", std::sqrt(sum_sq)},
                                {"value", eval_objective(spec, p, prec)},
                                {"on_plateau", is_on_plateau(spec, p, prec)}});
        }
        const json j{{"command", "plateau"},
                     {"objective", spec},
                     {"significand_bits", bits},
                     {"radius", plateau_radius(spec, prec)},
                     {"checks", verdicts}};
        emit(f.out, out, dump(j));
    };
}

} // namespace

std::vector<std::vector<double>> parse_starts(std::string_view text, std::size_t range_dimension) {
    text = trim(text);
    if (text.empty()) {
        throw ConfigError("empty start list");
    }
    if (text.find(':') != std::string_view::npos) {
        const auto parts = split(text, ':');
        if (parts.size() != 3) {
            throw ConfigError("range syntax is first:last:step, got '" + std::string(text) + "'");
        }
        return diagonal_starts(parse_number(parts[0]), parse_number(parts[1]),
                               parse_number(parts[2]), range_dimension);
    }
    std::vector<std::vector<double>> starts;
    for (std::string_view item : split(text, ';')) {
        if (trim(item).empty()) continue;
        starts.push_back(parse_point(item));
    }
    if (starts.empty()) {
        throw ConfigError("empty start list");
    }
    return starts;
}

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Gaussian Crunching Search and deterministic baselines on plateau benchmarks",
                 "crunch"};
    app.require_subcommand(1);

    Flags flags;
    Action action;

    std::string run_start = "600,600";
    std::string run_method = "gcs";
    std::string trace_path;
    auto* run_cmd = app.add_subcommand("run", "Single optimizer run");
    add_objective_flags(*run_cmd, flags);
    add_gcs_flags(*run_cmd, flags);
    add_baseline_flags(*run_cmd, flags);
    add_output_flags(*run_cmd, flags, false);
    run_cmd->add_option("--start", run_start, "Start point x,y,...")->capture_default_str();
    run_cmd->add_option("--method", run_method, "gcs | nelder_mead | powell | fd_gradient_descent")
        ->capture_default_str();
    run_cmd->add_option("--trace", trace_path, "Write the GCS trace CSV here");

    std::string bench_starts = "200,200;400,400;600,600";
    std::string bench_methods = "gcs,nelder_mead,powell,fd_gradient_descent";
    double threshold = kDefaultThreshold;
    auto* bench_cmd = app.add_subcommand("bench", "Per-start comparison of methods");
    add_objective_flags(*bench_cmd, flags);
    add_gcs_flags(*bench_cmd, flags);
    add_baseline_flags(*bench_cmd, flags);
    add_output_flags(*bench_cmd, flags, true);
    bench_cmd->add_option("--starts", bench_starts, "x,y;x,y;... or first:last:step")
        ->capture_default_str();
    bench_cmd->add_option("--methods", bench_methods, "Comma separated method names")
        ->capture_default_str();
    bench_cmd->add_option("--threshold", threshold, "Pass iff final value < threshold")
        ->capture_default_str();

    std::string fp_starts = "600:2800:200";
    std::size_t fp_dimension = 2;
    std::size_t trials = 100;
    std::size_t jobs = 1;
    auto* fp_cmd = app.add_subcommand("failprob", "GCS fail fraction per start over seeded trials");
    add_objective_flags(*fp_cmd, flags);
    add_gcs_flags(*fp_cmd, flags);
    add_output_flags(*fp_cmd, flags, true);
    fp_cmd->add_option("--starts", fp_starts, "first:last:step (diagonal) or x,y;x,y;...")
        ->capture_default_str();
    fp_cmd->add_option("--dim", fp_dimension, "Dimension of diagonal range starts")
        ->capture_default_str();
    fp_cmd->add_option("--trials", trials, "Independent runs per start")->capture_default_str();
    fp_cmd->add_option("--threshold", threshold, "Pass iff final value < threshold")
        ->capture_default_str();
    fp_cmd->add_option("--jobs", jobs, "Worker threads (0 = all cores); never changes output")
        ->capture_default_str();

    std::vector<std::string> checks;
    int bits = PrecisionModel{}.significand_bits;
    auto* plateau_cmd = app.add_subcommand("plateau", "Plateau radius and on-plateau verdicts");
    add_objective_flags(*plateau_cmd, flags);
    add_output_flags(*plateau_cmd, flags, false);
    plateau_cmd->add_option("--check", checks, "Point(s) to classify: x,y or x,y;x,y (repeatable)");
    plateau_cmd->add_option("--bits", bits, "Significand bits of the float format")
        ->capture_default_str();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (run_cmd->parsed()) {
            action = prepare_run(flags, run_start, run_method, trace_path);
        } else if (bench_cmd->parsed()) {
            action = prepare_bench(flags, bench_starts, bench_methods, threshold);
        } else if (fp_cmd->parsed()) {
            action = prepare_failprob(flags, fp_starts, fp_dimension, trials, threshold, jobs);
        } else {
            action = prepare_plateau(flags, checks, bits);
        }
    } catch (const std::exception& e) {
        err << "crunch: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        action(out);
    } catch (const std::exception& e) {
        err << "crunch: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitOk;
}

} // namespace crunch::cli
