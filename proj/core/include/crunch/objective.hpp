#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace crunch {

enum class ObjectiveKind { exp_well, sphere, rosenbrock };

std::string_view to_string(ObjectiveKind kind);
/// Throws ConfigError for unknown names.
ObjectiveKind objective_kind_from_string(std::string_view name);

/// Parameterized benchmark function.
///
/// exp_well is the radially symmetric well  f(p) = -lambda * exp(-mu * |p|) + lambda,
/// which is 0 at the origin and saturates at lambda far away. sphere and rosenbrock
/// are smoke-test objectives; lambda and mu are ignored for them.
struct ObjectiveSpec {
    ObjectiveKind kind = ObjectiveKind::exp_well;
    double lambda = 15.0;
    double mu = 0.05;
    std::size_t dimension = 2;

    /// Throws ConfigError when the invariants do not hold.
    void validate() const;

    friend bool operator==(const ObjectiveSpec&, const ObjectiveSpec&) = default;
};

/// Binary floating-point format with round-to-nearest-even. 53 bits is IEEE double,
/// 24 bits is IEEE single. Values from 2 to 53 are supported.
struct PrecisionModel {
    int significand_bits = 53;

    void validate() const;

    friend bool operator==(const PrecisionModel&, const PrecisionModel&) = default;
};

/// Rounds a double to the nearest value representable with `prec.significand_bits`
/// significand bits (ties to even). Exponent range is that of double.
double round_to_precision(double v, PrecisionModel prec);

/// Gap between |v| and the next representable magnitude in `prec`, i.e.
/// 2^(exponent(v) - significand_bits + 1). Exact for normal v.
double ulp(double v, PrecisionModel prec = {});

/// Evaluates the objective. With a precision below 53 bits every intermediate is rounded
/// to that precision. The exp_well evaluation order is fixed: norm, times mu, negate, exp,
/// times lambda, negate, plus lambda.
///
/// Throws ContractViolation on a dimension mismatch and DomainError on non-finite input.
double eval_objective(const ObjectiveSpec& spec, std::span<const double> point,
                      PrecisionModel prec = {});

/// Norm beyond which exp_well rounds to exactly lambda:  r* = -ln(ulp(lambda) / (2 lambda)) / mu.
/// Throws UnsupportedObjective for any other kind.
double plateau_radius(const ObjectiveSpec& spec, PrecisionModel prec = {});

/// True iff eval_objective(spec, point, prec) == lambda bit-exactly.
bool is_on_plateau(const ObjectiveSpec& spec, std::span<const double> point,
                   PrecisionModel prec = {});

/// Callable objective used by every optimizer. Either wraps an ObjectiveSpec or a
/// user callback of fixed dimension. Calls validate dimension and finiteness of the input.
class Objective {
public:
    using Callback = std::function<double(std::span<const double>)>;

    explicit Objective(ObjectiveSpec spec);
    Objective(std::size_t dimension, Callback fn, std::string name = "callback");

    double operator()(std::span<const double> point) const;

    std::size_t dimension() const noexcept { return dimension_; }
    const std::string& name() const noexcept { return name_; }
    const std::optional<ObjectiveSpec>& spec() const noexcept { return spec_; }

private:
    std::size_t dimension_;
    std::string name_;
    std::optional<ObjectiveSpec> spec_;
    Callback fn_;
};

} // namespace crunch
