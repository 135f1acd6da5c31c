#pragma once

#include "crunch/objective.hpp"
#include "crunch/run_result.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

namespace crunch {

enum class BaselineMethod { nelder_mead, powell, fd_gradient_descent };

std::string_view to_string(BaselineMethod method);
std::optional<BaselineMethod> baseline_method_from_string(std::string_view name);

struct BaselineConfig {
    BaselineMethod method = BaselineMethod::nelder_mead;
    std::size_t max_evals = 10000;
    double x_tol = 1e-8;
    double f_tol = 1e-12;
    /// Absolute step of the central-difference stencil.
    double fd_step = 1e-6;
    /// Relative perturbation per coordinate for the initial Nelder-Mead simplex.
    double initial_simplex_scale = 0.05;

    /// Throws ConfigError; `dimension` bounds the minimum budget (dimension + 2).
    void validate(std::size_t dimension) const;

    friend bool operator==(const BaselineConfig&, const BaselineConfig&) = default;
};

/// Longest step a single Powell line search may take from its base point.
inline constexpr double kPowellMaxStep = 100.0;
/// fd_gradient_descent stops once the central-difference gradient norm drops below this.
inline constexpr double kGradientTolerance = 1e-10;

/// Nelder-Mead simplex (reflection 1, expansion 2, contraction 0.5, shrink 0.5).
RunResult nelder_mead(const Objective& objective, std::span<const double> start,
                      const BaselineConfig& config);

/// Powell's conjugate-direction method with bracketed Brent line searches bounded to
/// kPowellMaxStep.
RunResult powell(const Objective& objective, std::span<const double> start,
                 const BaselineConfig& config);

/// Steepest descent on a central-difference gradient with Armijo backtracking.
RunResult fd_gradient_descent(const Objective& objective, std::span<const double> start,
                              const BaselineConfig& config);

/// Dispatches on config.method.
RunResult run_baseline(const Objective& objective, std::span<const double> start,
                       const BaselineConfig& config);

} // namespace crunch
