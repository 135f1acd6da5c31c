#include "crunch/errors.hpp"
#include "crunch/objective.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <array>
#include <cfloat>
#include <cmath>
#include <random>
#include <vector>

using namespace crunch;

namespace {

const ObjectiveSpec kWell{ObjectiveKind::exp_well, 15.0, 0.05, 2};

// Frozen from a 40-digit reference (mpmath) and cross-checked against oracle:: below.
constexpr double kValueAt200 = 14.99998917968770954928638223622692673977;
constexpr double kRadius53 = 747.308184581989510737152212861150834959;
constexpr double kRadius53Mu01 = 373.654092290994755368576106430575417480;
constexpr double kRadius24 = 345.282819857221231275157582415425408475;

std::vector<double> point_at(double norm, double angle) {
    return {norm * std::cos(angle), norm * std::sin(angle)};
}

} // namespace

TEST_CASE("frozen references agree with the 50-digit oracle") {
    const std::array<double, 2> p{200, 200};
    CHECK(static_cast<double>(oracle::exp_well(15, 0.05, p)) ==
          doctest::Approx(kValueAt200).epsilon(1e-15));
    CHECK(static_cast<double>(oracle::plateau_root(15, 0.05, oracle::half_ulp_double(15.0))) ==
          doctest::Approx(kRadius53).epsilon(1e-12));
    CHECK(static_cast<double>(oracle::plateau_root(15, 0.05, oracle::half_ulp_float(15.0f))) ==
          doctest::Approx(kRadius24).epsilon(1e-12));
}

TEST_CASE("exp_well at the origin is exactly zero") {
    const std::array<double, 2> origin{0.0, 0.0};
    CHECK(eval_objective(kWell, origin) == 0.0);

    ObjectiveSpec five = kWell;
    five.dimension = 5;
    CHECK(eval_objective(five, std::vector<double>(5, 0.0)) == 0.0);
}

TEST_CASE("exp_well at (600,600) rounds to exactly lambda") {
    const std::array<double, 2> p{600, 600};
    // True gap to lambda is ~5.6e-18, far below half an ulp of 15.
    const auto gap = oracle::Real(15) - oracle::exp_well(15, 0.05, p);
    CHECK(gap < oracle::Real(oracle::half_ulp_double(15.0)));
    CHECK(eval_objective(kWell, p) == 15.0);
}

TEST_CASE("exp_well at (200,200) matches the extended-precision value") {
    const std::array<double, 2> p{200, 200};
    const double v = eval_objective(kWell, p);
    CHECK(std::fabs(v - kValueAt200) <= 4 * ulp(kValueAt200));
    CHECK(v == doctest::Approx(15.0 - 1.082e-5).epsilon(1e-9));
}

TEST_CASE("eval_objective rejects bad input") {
    const std::array<double, 3> wrong_dim{1, 2, 3};
    CHECK_THROWS_AS(eval_objective(kWell, wrong_dim), ContractViolation);
    const std::array<double, 2> nan_point{NAN, 0.0};
    CHECK_THROWS_AS(eval_objective(kWell, nan_point), DomainError);
    const std::array<double, 2> inf_point{0.0, INFINITY};
    CHECK_THROWS_AS(eval_objective(kWell, inf_point), DomainError);
}

TEST_CASE("smoke-test objectives") {
    const ObjectiveSpec sphere{ObjectiveKind::sphere, 1, 1, 2};
    CHECK(eval_objective(sphere, std::array<double, 2>{3, 4}) == 25.0);
    const ObjectiveSpec rosen{ObjectiveKind::rosenbrock, 1, 1, 2};
    CHECK(eval_objective(rosen, std::array<double, 2>{1, 1}) == 0.0);
    CHECK(eval_objective(rosen, std::array<double, 2>{0, 0}) == 1.0);
    CHECK(eval_objective(rosen, std::array<double, 2>{-1.2, 1}) == doctest::Approx(24.2));
}

TEST_CASE("spec validation") {
    CHECK_THROWS_AS((ObjectiveSpec{ObjectiveKind::exp_well, 0.0, 0.05, 2}.validate()), ConfigError);
    CHECK_THROWS_AS((ObjectiveSpec{ObjectiveKind::exp_well, 15, -1.0, 2}.validate()), ConfigError);
    CHECK_THROWS_AS((ObjectiveSpec{ObjectiveKind::exp_well, 15, 0.05, 0}.validate()), ConfigError);
    CHECK_THROWS_AS((ObjectiveSpec{ObjectiveKind::rosenbrock, 1, 1, 1}.validate()), ConfigError);
    CHECK_NOTHROW((ObjectiveSpec{ObjectiveKind::sphere, 0.0, 0.0, 1}.validate()));
    CHECK(objective_kind_from_string("sphere") == ObjectiveKind::sphere);
    CHECK_THROWS_AS(objective_kind_from_string("ackley"), ConfigError);
}

TEST_CASE("ulp and rounding agree with hardware formats") {
    CHECK(ulp(15.0) == std::nextafter(15.0, INFINITY) - 15.0);
    CHECK(ulp(1.0) == DBL_EPSILON);
    CHECK(ulp(1.0, {24}) == FLT_EPSILON);
    CHECK(ulp(15.0, {24}) == double(std::nextafter(15.0f, INFINITY) - 15.0f));

    // Single-rounded products and sums of floats must match float arithmetic.
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<float> dist(-1000.0f, 1000.0f);
    for (int i = 0; i < 2000; ++i) {
        const float a = dist(rng);
        const float b = dist(rng);
        CHECK(round_to_precision(double(a) * double(b), {24}) == double(a * b));
        CHECK(round_to_precision(double(a) + double(b), {24}) == double(a + b));
    }
    CHECK(round_to_precision(0.1, {53}) == 0.1);
    CHECK(round_to_precision(0.0, {24}) == 0.0);
}

TEST_CASE("plateau_radius") {
    SUBCASE("53-bit radius") {
        CHECK(plateau_radius(kWell) == doctest::Approx(kRadius53).epsilon(1e-12));
        CHECK(plateau_radius(kWell) == doctest::Approx(747.3).epsilon(0.1 / 747.3));
        // (600,600) has norm ~848.5, well past the radius.
        CHECK(std::hypot(600.0, 600.0) > plateau_radius(kWell));
    }
    SUBCASE("doubling mu halves the radius") {
        ObjectiveSpec steep = kWell;
        steep.mu = 0.1;
        CHECK(plateau_radius(steep) == doctest::Approx(0.5 * plateau_radius(kWell)));
        CHECK(plateau_radius(steep) == doctest::Approx(kRadius53Mu01).epsilon(1e-12));
    }
    SUBCASE("24-bit radius is smaller") {
        const double r24 = plateau_radius(kWell, {24});
        CHECK(r24 < plateau_radius(kWell));
        CHECK(r24 == doctest::Approx(kRadius24).epsilon(1e-12));
    }
    SUBCASE("only defined for exp_well") {
        CHECK_THROWS_AS(plateau_radius({ObjectiveKind::sphere, 1, 1, 2}), UnsupportedObjective);
        CHECK_THROWS_AS(is_on_plateau({ObjectiveKind::sphere, 1, 1, 2}, std::array<double, 2>{}),
                        UnsupportedObjective);
    }
}

TEST_CASE("is_on_plateau examples") {
    CHECK(is_on_plateau(kWell, std::array<double, 2>{600, 600}));
    CHECK_FALSE(is_on_plateau(kWell, std::array<double, 2>{0, 0}));
    // 15 - 7.8e-12 is thousands of ulps below 15.
    CHECK_FALSE(is_on_plateau(kWell, std::array<double, 2>{400, 400}));
}

TEST_CASE("property: range, plateau exactness and sub-plateau visibility") {
    std::mt19937_64 rng(20231016);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
    const double radius = plateau_radius(kWell);

    std::uniform_real_distribution<double> far(radius + 1.0, 1e6);
    for (int i = 0; i < 1000; ++i) {
        const auto p = point_at(far(rng), angle(rng));
        CHECK(eval_objective(kWell, p) == 15.0);
    }

    std::uniform_real_distribution<double> near(0.0, radius - 1.0);
    for (int i = 0; i < 1000; ++i) {
        const auto p = point_at(near(rng), angle(rng));
        const double v = eval_objective(kWell, p);
        CHECK(v < 15.0);
        CHECK(v >= 0.0);
    }

    std::uniform_real_distribution<double> any(-1e4, 1e4);
    for (int i = 0; i < 1000; ++i) {
        const std::array<double, 2> p{any(rng), any(rng)};
        const double v = eval_objective(kWell, p);
        CHECK(v >= 0.0);
        CHECK(v <= 15.0);
    }
}

TEST_CASE("property: 24-bit plateau") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
    const PrecisionModel single{24};
    const double radius = plateau_radius(kWell, single);
    std::uniform_real_distribution<double> far(radius + 1.0, 1e5);
    std::uniform_real_distribution<double> near(0.0, radius - 1.0);
    for (int i = 0; i < 500; ++i) {
        CHECK(is_on_plateau(kWell, point_at(far(rng), angle(rng)), single));
        CHECK_FALSE(is_on_plateau(kWell, point_at(near(rng), angle(rng)), single));
    }
}

TEST_CASE("property: radial monotonicity below the plateau") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
    const double radius = plateau_radius(kWell);
    std::uniform_real_distribution<double> norm(0.0, radius);
    const double margin = ulp(15.0);
    for (int i = 0; i < 1000; ++i) {
        double r1 = norm(rng);
        double r2 = norm(rng);
        if (r1 > r2) std::swap(r1, r2);
        const double v1 = eval_objective(kWell, point_at(r1, angle(rng)));
        const double v2 = eval_objective(kWell, point_at(r2, angle(rng)));
        CHECK(v1 <= v2 + margin);
    }
}

TEST_CASE("Objective wrapper") {
    const Objective well(kWell);
    CHECK(well.dimension() == 2);
    CHECK(well.name() == "exp_well");
    CHECK(well(std::array<double, 2>{0, 0}) == 0.0);

    int calls = 0;
    const Objective counted(3, [&](std::span<const double> p) {
        ++calls;
        return p[0] + p[1] + p[2];
    });
    CHECK(counted(std::array<double, 3>{1, 2, 3}) == 6.0);
    CHECK_THROWS_AS(counted(std::array<double, 2>{1, 2}), ContractViolation);
    CHECK_THROWS_AS(counted(std::array<double, 3>{1, NAN, 3}), DomainError);
    CHECK(calls == 1);
    CHECK_THROWS_AS(Objective(0, [](std::span<const double>) { return 0.0; }), ConfigError);
}
