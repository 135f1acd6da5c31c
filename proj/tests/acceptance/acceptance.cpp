// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and exits non-zero
// if any criterion fails.

#include "cli.hpp"
#include "crunch/harness.hpp"
#include "crunch/serialization.hpp"
#include "oracles.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>

using namespace crunch;
using nlohmann::json;

namespace {

const ObjectiveSpec kWell{ObjectiveKind::exp_well, 15.0, 0.05, 2};

struct Verdict {
    bool passed;
    std::string detail;
};

int g_failures = 0;

void criterion(int id, const char* title, const std::function<Verdict()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
        v = body();
    } catch (const std::exception& e) {
        v = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!v.passed) ++g_failures;
    std::printf("[%s] AC%d %-34s %7.2fs  %s\n", v.passed ? "PASS" : "FAIL", id, title, secs,
                v.detail.c_str());
    std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

std::string cli_stdout(std::vector<std::string> args, int& code) {
    std::ostringstream out, err;
    code = cli::run(args, out, err);
    return out.str();
}

Verdict plateau_exactness() {
    const std::array<double, 2> p{600, 600};
    const double value = eval_objective(kWell, p);
    const double radius = plateau_radius(kWell);
    const double reference =
        static_cast<double>(oracle::plateau_root(15, 0.05, oracle::half_ulp_double(15.0)));
    const bool ok = value == 15.0 && std::fabs(radius - 747.3) <= 0.1 &&
                    std::fabs(radius - reference) <= 1e-9 * reference;
    return {ok, fmt("f(600,600)=%.17g radius=%.6f oracle=%.6f", value, radius, reference)};
}

Verdict comparison_600() {
    int code = 0;
    const std::string out = cli_stdout({"bench", "--starts", "600,600", "--methods",
                                        "gcs,nelder_mead,powell,fd_gradient_descent", "--seed",
                                        "42"},
                                       code);
    if (code != 0) return {false, fmt("bench exit code %d", code)};
    const auto report = json::parse(out).get<ComparisonReport>();
    bool ok = report.rows.size() == 4;
    std::string detail;
    for (const auto& row : report.rows) {
        if (row.method == "gcs") {
            ok = ok && row.passed;
        } else {
            ok = ok && !row.passed && row.final_value == 15.0;
        }
        detail += fmt("%s=%.4g ", row.method.c_str(), row.final_value);
    }

    const Objective f(kWell);
    const std::array<double, 2> start{600, 600};
    int passes = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        GcsConfig config;
        config.seed = seed;
        passes += classify(gcs_run(f, start, config).best_value).passed ? 1 : 0;
    }
    ok = ok && passes >= 19;
    return {ok, detail + fmt("| gcs seeds 1..20 pass %d/20", passes)};
}

Verdict comparison_200() {
    const Objective f(kWell);
    const std::array<double, 2> start{200, 200};
    const double nm = nelder_mead(f, start, BaselineConfig{}).best_value;
    const double pw = powell(f, start, BaselineConfig{}).best_value;
    return {nm < 1e-3 && pw < 1e-3, fmt("nelder_mead=%.3g powell=%.3g", nm, pw)};
}

Verdict failprob_sweep() {
    const auto starts = diagonal_starts(600, 2800, 200);
    FailProbOptions options;
    options.trials = 100;
    options.base_seed = 1;
    options.jobs = 0;
    const FailProbReport report = run_failprob(kWell, starts, options);

    bool ok = report.rows.size() == 12;
    std::string counts;
    for (const auto& row : report.rows) {
        counts += std::to_string(row.failures) + " ";
        if (row.start[0] <= 1600.0 && row.failures > 1) ok = false;
    }
    const double last = report.rows.back().fail_fraction;
    ok = ok && last >= 0.05 && last <= 0.30;

    // Width-3 moving mean must never decrease along the sweep.
    double previous = -1.0;
    for (std::size_t i = 0; i + 2 < report.rows.size(); ++i) {
        const double window = (report.rows[i].fail_fraction + report.rows[i + 1].fail_fraction +
                               report.rows[i + 2].fail_fraction) / 3.0;
        if (window < previous) ok = false;
        previous = window;
    }
    return {ok, "failures per 100: " + counts + fmt("| [2800,2800]=%.2f", last)};
}

Verdict gcs_invariants() {
    const Objective f(kWell);
    const std::array<double, 2> start{600, 600};
    const double start_value = f(start);
    int bad = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        GcsConfig config;
        config.seed = seed;
        config.record_trace = true;
        const RunResult a = gcs_run(f, start, config);
        double incumbent = start_value;
        bool monotone = true;
        for (const auto& e : *a.trace) {
            if (e.accepted) {
                monotone = monotone && e.candidate_value < incumbent;
                incumbent = e.candidate_value;
            }
        }
        const bool ok = monotone && incumbent == a.best_value && a.best_value <= start_value &&
                        a.evaluations == 10001 && sd_schedule_check(*a.trace, config) &&
                        gcs_run(f, start, config) == a;
        bad += ok ? 0 : 1;
    }
    return {bad == 0, fmt("%d/100 seeds violated an invariant", bad)};
}

Verdict baseline_sphere() {
    const Objective sphere(ObjectiveSpec{ObjectiveKind::sphere, 1, 1, 2});
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> coord(-10.0, 10.0);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const std::array<double, 2> start{coord(rng), coord(rng)};
        for (auto m : {BaselineMethod::nelder_mead, BaselineMethod::powell,
                       BaselineMethod::fd_gradient_descent}) {
            BaselineConfig config;
            config.method = m;
            worst = std::max(worst, run_baseline(sphere, start, config).best_value);
        }
    }
    return {worst < 1e-8, fmt("worst final value %.3g over 300 runs", worst)};
}

Verdict mutation_distribution() {
    constexpr int kDraws = 100000;
    GaussianStream rng(7);
    const std::array<double, 1> zero{0.0};
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 0; i < kDraws; ++i) {
        const double d = mutate(zero, 2.0, rng)[0];
        sum += d;
        sum_sq += d * d;
    }
    const double mean = sum / kDraws;
    const double sd = std::sqrt((sum_sq - kDraws * mean * mean) / (kDraws - 1));
    const double band = 3.0 * 2.0 / std::sqrt(double(kDraws));
    return {std::fabs(mean) <= band && sd >= 1.98 && sd <= 2.02,
            fmt("mean=%.5f (band %.5f) sd=%.5f", mean, band, sd)};
}

Verdict parallel_invariance() {
    int code1 = 0, code8 = 0;
    const std::vector<std::string> base{"failprob", "--starts", "600:2800:200", "--trials", "100",
                                        "--seed", "1"};
    auto with_jobs = [&](const char* jobs) {
        auto args = base;
        args.push_back("--jobs");
        args.push_back(jobs);
        return args;
    };
    const std::string one = cli_stdout(with_jobs("1"), code1);
    const std::string eight = cli_stdout(with_jobs("8"), code8);
    const bool ok = code1 == 0 && code8 == 0 && !one.empty() && one == eight;
    return {ok, fmt("%zu bytes, identical=%s", one.size(), one == eight ? "yes" : "no")};
}

} // namespace

int main() {
    criterion(1, "plateau exactness", plateau_exactness);
    criterion(2, "comparison at [600,600]", comparison_600);
    criterion(3, "comparison at [200,200]", comparison_200);
    criterion(4, "fail-probability sweep", failprob_sweep);
    criterion(5, "GCS invariant suite", gcs_invariants);
    criterion(6, "baseline sanity on sphere", baseline_sphere);
    criterion(7, "mutation distribution", mutation_distribution);
    criterion(8, "harness parallel invariance", parallel_invariance);
    std::printf("%d criteria failed\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
