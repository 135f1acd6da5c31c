#include "crunch/objective.hpp"

#include "crunch/errors.hpp"

#include <cfloat>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace crunch {

namespace {

void check_point(std::span<const double> point, std::size_t dimension) {
    if (point.size() != dimension) {
        throw ContractViolation("objective expects dimension " + std::to_string(dimension) +
                                ", got " + std::to_string(point.size()));
    }
    for (double x : point) {
        if (!std::isfinite(x)) {
            throw DomainError("objective point has a non-finite coordinate");
        }
    }
}

} // namespace

std::string_view to_string(ObjectiveKind kind) {
    switch (kind) {
    case ObjectiveKind::exp_well: return "exp_well";
    case ObjectiveKind::sphere: return "sphere";
    case ObjectiveKind::rosenbrock: return "rosenbrock";
    }
    return "unknown";
}

ObjectiveKind objective_kind_from_string(std::string_view name) {
    if (name == "exp_well") return ObjectiveKind::exp_well;
    if (name == "sphere") return ObjectiveKind::sphere;
    if (name == "rosenbrock") return ObjectiveKind::rosenbrock;
    throw ConfigError("unknown objective '" + std::string(name) +
                      "' (valid: exp_well, sphere, rosenbrock)");
}

void ObjectiveSpec::validate() const {
    if (dimension < 1) {
        throw ConfigError("objective dimension must be >= 1");
    }
    if (kind == ObjectiveKind::exp_well) {
        if (!(lambda > 0.0) || !std::isfinite(lambda)) {
            throw ConfigError("exp_well lambda must be positive and finite");
        }
        if (!(mu > 0.0) || !std::isfinite(mu)) {
            throw ConfigError("exp_well mu must be positive and finite");
        }
    }
    if (kind == ObjectiveKind::rosenbrock && dimension < 2) {
        throw ConfigError("rosenbrock needs dimension >= 2");
    }
}

void PrecisionModel::validate() const {
    if (significand_bits < 2 || significand_bits > DBL_MANT_DIG) {
        throw ConfigError("significand_bits must be in [2, 53]");
    }
}

double round_to_precision(double v, PrecisionModel prec) {
    if (prec.significand_bits >= DBL_MANT_DIG || v == 0.0 || !std::isfinite(v)) {
        return v;
    }
    int exponent = 0;
    const double mantissa = std::frexp(v, &exponent); // |mantissa| in [0.5, 1)
    // nearbyint honours the current rounding mode, which is ties-to-even by default.
    const double scaled = std::nearbyint(std::ldexp(mantissa, prec.significand_bits));
    return std::ldexp(scaled, exponent - prec.significand_bits);
}

double ulp(double v, PrecisionModel prec) {
    if (!std::isfinite(v)) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    const double magnitude = std::fabs(v);
    const int exponent = magnitude < DBL_MIN ? DBL_MIN_EXP - 1 : std::ilogb(magnitude);
    return std::ldexp(1.0, exponent - prec.significand_bits + 1);
}

double eval_objective(const ObjectiveSpec& spec, std::span<const double> point,
                      PrecisionModel prec) {
    check_point(point, spec.dimension);
    const auto r = [prec](double v) { return round_to_precision(v, prec); };

    switch (spec.kind) {
    case ObjectiveKind::exp_well: {
        double sum_sq = 0.0;
        for (double x : point) {
            sum_sq = r(sum_sq + r(x * x));
        }
        const double norm = r(std::sqrt(sum_sq));
        const double lambda = r(spec.lambda);
        const double decay = r(std::exp(-r(r(spec.mu) * norm)));
        return r(-r(lambda * decay) + lambda);
    }
    case ObjectiveKind::sphere: {
        double sum_sq = 0.0;
        for (double x : point) {
            sum_sq = r(sum_sq + r(x * x));
        }
        return sum_sq;
    }
    case ObjectiveKind::rosenbrock: {
        double total = 0.0;
        for (std::size_t i = 0; i + 1 < point.size(); ++i) {
            const double a = r(point[i + 1] - r(point[i] * point[i]));
            const double b = r(1.0 - point[i]);
            total = r(total + r(r(100.0 * r(a * a)) + r(b * b)));
        }
        return total;
    }
    }
    throw UnsupportedObjective("unknown objective kind");
}

double plateau_radius(const ObjectiveSpec& spec, PrecisionModel prec) {
    if (spec.kind != ObjectiveKind::exp_well) {
        throw UnsupportedObjective("plateau_radius is only defined for exp_well, got " +
                                   std::string(to_string(spec.kind)));
    }
    spec.validate();
    prec.validate();
    // Round-to-nearest absorbs lambda * exp(-mu r) once it drops below half an ulp of lambda.
    const double half_ulp = 0.5 * ulp(spec.lambda, prec);
    return -std::log(half_ulp / spec.lambda) / spec.mu;
}

bool is_on_plateau(const ObjectiveSpec& spec, std::span<const double> point,
                   PrecisionModel prec) {
    if (spec.kind != ObjectiveKind::exp_well) {
        throw UnsupportedObjective("is_on_plateau is only defined for exp_well");
    }
    return eval_objective(spec, point, prec) == round_to_precision(spec.lambda, prec);
}

Objective::Objective(ObjectiveSpec spec)
    : dimension_(spec.dimension), name_(to_string(spec.kind)), spec_(spec) {
    spec.validate();
    fn_ = [spec](std::span<const double> p) { return eval_objective(spec, p); };
}

Objective::Objective(std::size_t dimension, Callback fn, std::string name)
    : dimension_(dimension), name_(std::move(name)), fn_(std::move(fn)) {
    if (dimension_ == 0) {
        throw ConfigError("objective dimension must be >= 1");
    }
    if (!fn_) {
        throw ConfigError("objective callback is empty");
    }
}

double Objective::operator()(std::span<const double> point) const {
    check_point(point, dimension_);
    return fn_(point);
}

} // namespace crunch
