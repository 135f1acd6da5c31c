#include "crunch/baselines.hpp"

#include "crunch/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

namespace crunch {

namespace {

using Vec = std::vector<double>;

struct BudgetExhausted {};

/// Objective wrapper that enforces max_evals and remembers the best point evaluated so far.
class Evaluator {
public:
    Evaluator(const Objective& objective, std::size_t max_evals)
        : objective_(objective), max_evals_(max_evals) {}

    double operator()(const Vec& x) {
        if (count_ >= max_evals_) {
            throw BudgetExhausted{};
        }
        ++count_;
        const double v = objective_(x);
        if (count_ == 1) {
            best_point_ = x;
            best_value_ = v;
        } else if (v < best_value_) {
            best_point_ = x;
            best_value_ = v;
            ++improvements_;
        }
        return v;
    }

    RunResult result(BaselineMethod method) const {
        RunResult r;
        r.method = std::string(to_string(method));
        r.best_point = best_point_;
        r.best_value = best_value_;
        r.evaluations = count_;
        r.accepted_count = improvements_;
        return r;
    }

private:
    const Objective& objective_;
    std::size_t max_evals_;
    std::size_t count_ = 0;
    std::size_t improvements_ = 0;
    Vec best_point_;
    double best_value_ = 0.0;
};

void check_start(const Objective& objective, std::span<const double> start,
                 const BaselineConfig& config) {
    config.validate(start.size());
    if (start.size() != objective.dimension()) {
        throw ContractViolation("start point dimension does not match the objective");
    }
    for (double x : start) {
        if (!std::isfinite(x)) {
            throw DomainError("start point has a non-finite coordinate");
        }
    }
}

template <typename Body>
RunResult run_with_budget(const Objective& objective, std::span<const double> start,
                          const BaselineConfig& config, BaselineMethod method, Body body) {
    check_start(objective, start, config);
    Evaluator eval(objective, config.max_evals);
    try {
        body(eval, Vec(start.begin(), start.end()));
    } catch (const BudgetExhausted&) {
    }
    return eval.result(method);
}

// x + t * d
Vec along(const Vec& x, const Vec& d, double t) {
    Vec out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        out[i] = x[i] + t * d[i];
    }
    return out;
}

double norm2(const Vec& v) {
    return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
}

// ---------------------------------------------------------------------------
// Nelder-Mead

void nelder_mead_body(Evaluator& f, Vec start, const BaselineConfig& config) {
    constexpr double kReflect = 1.0;
    constexpr double kExpand = 2.0;
    constexpr double kContract = 0.5;
    constexpr double kShrink = 0.5;
    constexpr double kZeroPerturbation = 0.00025;

    const std::size_t n = start.size();
    std::vector<Vec> simplex(n + 1, start);
    for (std::size_t i = 0; i < n; ++i) {
        double& c = simplex[i + 1][i];
        c = c != 0.0 ? (1.0 + config.initial_simplex_scale) * c : kZeroPerturbation;
    }
    std::vector<double> values(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        values[i] = f(simplex[i]);
    }

    std::vector<std::size_t> order(n + 1);
    while (true) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
        {
            std::vector<Vec> sorted_simplex(n + 1);
            std::vector<double> sorted_values(n + 1);
            for (std::size_t i = 0; i <= n; ++i) {
                sorted_simplex[i] = std::move(simplex[order[i]]);
                sorted_values[i] = values[order[i]];
            }
            simplex = std::move(sorted_simplex);
            values = std::move(sorted_values);
        }

        double x_spread = 0.0;
        double f_spread = 0.0;
        for (std::size_t i = 1; i <= n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                x_spread = std::max(x_spread, std::fabs(simplex[i][j] - simplex[0][j]));
            }
            f_spread = std::max(f_spread, std::fabs(values[i] - values[0]));
        }
        if (x_spread <= config.x_tol && f_spread <= config.f_tol) {
            return;
        }

        Vec centroid(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                centroid[j] += simplex[i][j];
            }
        }
        for (double& c : centroid) {
            c /= static_cast<double>(n);
        }

        const Vec& worst = simplex[n];
        auto blend = [&](double coeff) {
            // centroid + coeff * (centroid - worst)
            Vec out(n);
            for (std::size_t j = 0; j < n; ++j) {
                out[j] = centroid[j] + coeff * (centroid[j] - worst[j]);
            }
            return out;
        };

        Vec reflected = blend(kReflect);
        const double f_reflected = f(reflected);
        bool shrink = false;

        if (f_reflected < values[0]) {
            Vec expanded = blend(kReflect * kExpand);
            const double f_expanded = f(expanded);
            if (f_expanded < f_reflected) {
                simplex[n] = std::move(expanded);
                values[n] = f_expanded;
            } else {
                simplex[n] = std::move(reflected);
                values[n] = f_reflected;
            }
        } else if (f_reflected < values[n - 1]) {
            simplex[n] = std::move(reflected);
            values[n] = f_reflected;
        } else if (f_reflected < values[n]) {
            Vec outside = blend(kContract * kReflect);
            const double f_outside = f(outside);
            if (f_outside <= f_reflected) {
                simplex[n] = std::move(outside);
                values[n] = f_outside;
            } else {
                shrink = true;
            }
        } else {
            Vec inside = blend(-kContract);
            const double f_inside = f(inside);
            if (f_inside < values[n]) {
                simplex[n] = std::move(inside);
                values[n] = f_inside;
            } else {
                shrink = true;
            }
        }

        if (shrink) {
            for (std::size_t i = 1; i <= n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    simplex[i][j] = simplex[0][j] + kShrink * (simplex[i][j] - simplex[0][j]);
                }
                values[i] = f(simplex[i]);
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Powell

struct LineMin {
    double t = 0.0;
    double value = 0.0;
};

/// Brent's method on [lo, hi] starting from an interior point `mid` with value `f_mid`.
template <typename Fn>
LineMin brent(Fn&& phi, double lo, double hi, double mid, double f_mid, double abs_tol) {
    constexpr double kGolden = 0.3819660112501051;
    constexpr double kRelTol = 1.4901161193847656e-08; // sqrt(machine epsilon)
    constexpr int kMaxIter = 200;

    double a = lo, b = hi;
    double x = mid, w = mid, v = mid;
    double fx = f_mid, fw = f_mid, fv = f_mid;
    double d = 0.0, e = 0.0;

    for (int iter = 0; iter < kMaxIter; ++iter) {
        const double xm = 0.5 * (a + b);
        const double tol1 = kRelTol * std::fabs(x) + abs_tol;
        const double tol2 = 2.0 * tol1;
        if (std::fabs(x - xm) <= tol2 - 0.5 * (b - a)) {
            break;
        }
        bool golden = true;
        if (std::fabs(e) > tol1) {
            // Parabolic fit through x, w, v.
            double r = (x - w) * (fx - fv);
            double q = (x - v) * (fx - fw);
            double p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if (q > 0.0) p = -p;
            q = std::fabs(q);
            const double e_prev = e;
            e = d;
            if (std::fabs(p) < std::fabs(0.5 * q * e_prev) && p > q * (a - x) && p < q * (b - x)) {
                d = p / q;
                const double u = x + d;
                if (u - a < tol2 || b - u < tol2) {
                    d = xm >= x ? tol1 : -tol1;
                }
                golden = false;
            }
        }
        if (golden) {
            e = (x >= xm ? a : b) - x;
            d = kGolden * e;
        }
        const double u = std::fabs(d) >= tol1 ? x + d : x + (d > 0.0 ? tol1 : -tol1);
        const double fu = phi(u);
        if (fu <= fx) {
            if (u >= x) a = x; else b = x;
            v = w; fv = fw;
            w = x; fw = fx;
            x = u; fx = fu;
        } else {
            if (u < x) a = u; else b = u;
            if (fu <= fw || w == x) {
                v = w; fv = fw;
                w = u; fw = fu;
            } else if (fu <= fv || v == x || v == w) {
                v = u; fv = fu;
            }
        }
    }
    return {x, fx};
}

/// Minimizes along unit direction d from x, never stepping further than kPowellMaxStep.
/// Returns t = 0 with the base value when no strictly better point is found.
LineMin line_search(Evaluator& f, const Vec& x, double fx, const Vec& d, double abs_tol) {
    constexpr double kGrow = 1.618033988749895;
    constexpr double kInitialStep = 1.0;
    auto phi = [&](double t) { return f(along(x, d, t)); };

    double a = 0.0;
    double b = kInitialStep;
    double fb = phi(b);
    if (!(fb < fx)) {
        const double f_back = phi(-kInitialStep);
        if (f_back < fx) {
            b = -kInitialStep;
            fb = f_back;
        } else {
            if (fb == fx && f_back == fx) {
                return {0.0, fx}; // locally flat: nothing to gain at this resolution
            }
            const LineMin m = brent(phi, -kInitialStep, kInitialStep, 0.0, fx, abs_tol);
            return m.value < fx ? m : LineMin{0.0, fx};
        }
    }

    // Expand downhill from a through b until the function turns up or the bound is hit.
    const double sign = b > 0.0 ? 1.0 : -1.0;
    while (true) {
        double c = b + kGrow * (b - a);
        if (std::fabs(c) >= kPowellMaxStep) {
            c = sign * kPowellMaxStep;
        }
        const double fc = phi(c);
        if (fc >= fb) {
            const LineMin m = brent(phi, std::min(a, c), std::max(a, c), b, fb, abs_tol);
            return m.value < fx ? m : LineMin{0.0, fx};
        }
        if (std::fabs(c) >= kPowellMaxStep) {
            return {c, fc};
        }
        a = b;
        b = c; fb = fc;
    }
}

void powell_body(Evaluator& f, Vec x, const BaselineConfig& config) {
    const std::size_t n = x.size();
    std::vector<Vec> directions(n, Vec(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        directions[i][i] = 1.0;
    }

    double fx = f(x);
    while (true) {
        const Vec x_start = x;
        const double f_start = fx;
        double biggest_drop = 0.0;
        std::size_t biggest_index = 0;

        for (std::size_t i = 0; i < n; ++i) {
            const double f_before = fx;
            const LineMin m = line_search(f, x, fx, directions[i], config.x_tol);
            if (m.t != 0.0) {
                x = along(x, directions[i], m.t);
                fx = m.value;
            }
            if (f_before - fx > biggest_drop) {
                biggest_drop = f_before - fx;
                biggest_index = i;
            }
        }

        if (2.0 * (f_start - fx) <= config.f_tol * (std::fabs(f_start) + std::fabs(fx)) + 1e-300) {
            return;
        }

        Vec step(n);
        for (std::size_t j = 0; j < n; ++j) {
            step[j] = x[j] - x_start[j];
        }
        const double step_len = norm2(step);
        if (step_len == 0.0) {
            return;
        }
        Vec extrapolated(n);
        for (std::size_t j = 0; j < n; ++j) {
            extrapolated[j] = 2.0 * x[j] - x_start[j];
        }
        const double f_extra = f(extrapolated);
        if (f_extra < f_start) {
            const double t = 2.0 * (f_start - 2.0 * fx + f_extra) *
                                 std::pow(f_start - fx - biggest_drop, 2) -
                             biggest_drop * std::pow(f_start - f_extra, 2);
            if (t < 0.0) {
                for (double& s : step) {
                    s /= step_len;
                }
                const LineMin m = line_search(f, x, fx, step, config.x_tol);
                if (m.t != 0.0) {
                    x = along(x, step, m.t);
                    fx = m.value;
                }
                directions[biggest_index] = directions[n - 1];
                directions[n - 1] = std::move(step);
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Finite-difference gradient descent

void fd_gradient_body(Evaluator& f, Vec x, const BaselineConfig& config) {
    constexpr double kArmijo = 1e-4;
    const std::size_t n = x.size();
    const double h = config.fd_step;

    double fx = f(x);
    double step = 1.0;
    Vec grad(n);
    while (true) {
        for (std::size_t i = 0; i < n; ++i) {
            Vec plus = x;
            Vec minus = x;
            plus[i] += h;
            minus[i] -= h;
            grad[i] = (f(plus) - f(minus)) / (2.0 * h);
        }
        const double grad_norm = norm2(grad);
        if (!std::isfinite(grad_norm) || grad_norm < kGradientTolerance) {
            return;
        }
        Vec direction(n);
        for (std::size_t i = 0; i < n; ++i) {
            direction[i] = -grad[i] / grad_norm;
        }

        double s = step;
        while (true) {
            Vec trial = along(x, direction, s);
            const double f_trial = f(trial);
            if (f_trial < fx && f_trial <= fx - kArmijo * s * grad_norm) {
                const double f_prev = fx;
                x = std::move(trial);
                fx = f_trial;
                step = 2.0 * s;
                if (2.0 * (f_prev - fx) <= config.f_tol * (std::fabs(f_prev) + std::fabs(fx)) + 1e-300) {
                    return;
                }
                break;
            }
            s *= 0.5;
            if (s < config.x_tol) {
                return;
            }
        }
    }
}

} // namespace

std::string_view to_string(BaselineMethod method) {
    switch (method) {
    case BaselineMethod::nelder_mead: return "nelder_mead";
    case BaselineMethod::powell: return "powell";
    case BaselineMethod::fd_gradient_descent: return "fd_gradient_descent";
    }
    return "unknown";
}

std::optional<BaselineMethod> baseline_method_from_string(std::string_view name) {
    if (name == "nelder_mead") return BaselineMethod::nelder_mead;
    if (name == "powell") return BaselineMethod::powell;
    if (name == "fd_gradient_descent") return BaselineMethod::fd_gradient_descent;
    return std::nullopt;
}

void BaselineConfig::validate(std::size_t dimension) const {
    if (max_evals < dimension + 2) {
        throw ConfigError("max_evals must be >= dimension + 2 (got " + std::to_string(max_evals) +
                          " for dimension " + std::to_string(dimension) + ")");
    }
    const auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
    if (!positive(x_tol) || !positive(f_tol) || !positive(fd_step) ||
        !positive(initial_simplex_scale)) {
        throw ConfigError("baseline tolerances and steps must be positive and finite");
    }
}

RunResult nelder_mead(const Objective& objective, std::span<const double> start,
                      const BaselineConfig& config) {
    return run_with_budget(objective, start, config, BaselineMethod::nelder_mead,
                           [&](Evaluator& f, Vec x) { nelder_mead_body(f, std::move(x), config); });
}

RunResult powell(const Objective& objective, std::span<const double> start,
                 const BaselineConfig& config) {
    return run_with_budget(objective, start, config, BaselineMethod::powell,
                           [&](Evaluator& f, Vec x) { powell_body(f, std::move(x), config); });
}

RunResult fd_gradient_descent(const Objective& objective, std::span<const double> start,
                              const BaselineConfig& config) {
    return run_with_budget(objective, start, config, BaselineMethod::fd_gradient_descent,
                           [&](Evaluator& f, Vec x) { fd_gradient_body(f, std::move(x), config); });
}

RunResult run_baseline(const Objective& objective, std::span<const double> start,
                       const BaselineConfig& config) {
    switch (config.method) {
    case BaselineMethod::nelder_mead: return nelder_mead(objective, start, config);
    case BaselineMethod::powell: return powell(objective, start, config);
    case BaselineMethod::fd_gradient_descent: return fd_gradient_descent(objective, start, config);
    }
    throw ConfigError("unknown baseline method");
}

} // namespace crunch
