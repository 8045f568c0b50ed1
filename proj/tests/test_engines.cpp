#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "engines.hpp"
#include "errors.hpp"
#include "rng.hpp"

#include <cmath>
#include <limits>
#include <vector>

using namespace specshift;

namespace {

std::pair<double, double> window(const HermitianOperator& a, const HermitianOperator& b) {
    const auto& ea = a.eigensystem().eigenvalues;
    const auto& eb = b.eigensystem().eigenvalues;
    return {std::min(ea(0), eb(0)),
            std::max(ea(ea.size() - 1), eb(eb.size() - 1))};
}

} // namespace

TEST_CASE("counting SSF of a single moving eigenvalue") {
    const HermitianOperator h0 = HermitianOperator::diagonal({0.0});
    const HermitianOperator h1 = HermitianOperator::diagonal({1.0});
    const StepFunction xi = ssf_counting(h0, h1);
    CHECK(xi.breakpoints() == std::vector<double>{0.0, 1.0});
    CHECK(xi.values() == std::vector<std::int64_t>{1});
}

TEST_CASE("counting SSF vanishes for identical endpoints") {
    const HermitianOperator h = HermitianOperator::diagonal({-1.0, 2.0});
    CHECK(ssf_counting(h, h).is_zero());
}

TEST_CASE("counting SSF of a uniform shift of diag(-1, 1)") {
    const HermitianOperator h0 = HermitianOperator::diagonal({-1.0, 1.0});
    const HermitianOperator h1 = HermitianOperator::diagonal({-0.5, 1.5});
    const StepFunction xi = ssf_counting(h0, h1);
    CHECK(xi.breakpoints() == std::vector<double>{-1.0, -0.5, 1.0, 1.5});
    CHECK(xi.values() == std::vector<std::int64_t>{1, 0, 1});
}

TEST_CASE("counting SSF rejects mismatched dimensions") {
    const HermitianOperator h0 = HermitianOperator::diagonal({0.0});
    const HermitianOperator h1 = HermitianOperator::diagonal({0.0, 1.0});
    CHECK_THROWS_AS(ssf_counting(h0, h1), Error);
    try {
        ssf_counting(h0, h1);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DimensionMismatch);
    }
}

TEST_CASE("trace_difference basics") {
    const HermitianOperator h = HermitianOperator::diagonal({-1.0, 2.0});
    const TestFunction f(TestFamily::SmoothBump, -2.0, 3.0, 1.0);
    CHECK(std::abs(trace_difference(h, h, f)) <= 1e-12);

    const HermitianOperator a = HermitianOperator::diagonal({0.0});
    const HermitianOperator b = HermitianOperator::diagonal({1.0});
    CHECK(trace_difference(a, b, f) ==
          doctest::Approx(f.evaluate(1.0, 0) - f.evaluate(0.0, 0)).epsilon(1e-14));
}

TEST_CASE("trace formula: trace_difference equals the paired counting SSF") {
    CounterRng rng(201);
    for (int c = 0; c < 20; ++c) {
        const HermitianOperator h0 = random_hermitian(rng, 6);
        const HermitianOperator h1 = h0.add_scaled(random_hermitian(rng, 6), 1.0);
        const auto [lo, hi] = window(h0, h1);
        const TestFunction f = random_test_function(rng, lo - 1.0, hi + 1.0);
        const double lhs = trace_difference(h0, h1, f);
        const double rhs = pair_derivative(ssf_counting(h0, h1), f);
        CHECK(std::abs(lhs - rhs) <= 1e-10);
    }
}

TEST_CASE("averaging on a 1x1 path reduces to the integral of phi") {
    const HermitianOperator h0 = HermitianOperator::diagonal({0.0});
    const HermitianOperator v = HermitianOperator::diagonal({1.0});
    const PerturbationPath path(h0, v);
    const TestFunction f(TestFamily::SmoothBump, -0.2, 1.1, 1.7);
    const double tol = 1e-8;

    const double averaged = ssf_averaging(path, f, tol);
    const StepFunction unit({0.0, 1.0}, {1});
    CHECK(std::abs(averaged - pair_density(unit, f, 1e-8)) <= tol + 1e-8);
}

TEST_CASE("averaging of the zero perturbation is exactly zero") {
    const HermitianOperator h0 = HermitianOperator::diagonal({-1.0, 1.0});
    const PerturbationPath path(h0, HermitianOperator::zero(2));
    const TestFunction f(TestFamily::RaisedCosine, -2.0, 2.0, 1.0);
    CHECK(ssf_averaging(path, f, 1e-8) == 0.0);
}

TEST_CASE("averaging agrees with the counting engine on seeded paths") {
    CounterRng rng(202);
    for (int c = 0; c < 10; ++c) {
        const HermitianOperator h0 = random_hermitian(rng, 4);
        const HermitianOperator v = random_hermitian(rng, 4);
        const PerturbationPath path(h0, v);
        const auto [lo, hi] = window(h0, path.at(1.0));
        const TestFunction f = random_test_function(rng, lo - 0.5, hi + 0.5);
        const double averaged = ssf_averaging(path, f, 1e-8);
        const double counted = pair_density(ssf_counting(h0, path.at(1.0)), f, 1e-8);
        CHECK(std::abs(averaged - counted) <= 1e-6);
    }
}

TEST_CASE("averaging reports quadrature failure for unreachable tolerances") {
    CounterRng rng(203);
    const HermitianOperator h0 = random_hermitian(rng, 3);
    const HermitianOperator v = random_hermitian(rng, 3);
    const auto [lo, hi] = window(h0, h0.add_scaled(v, 1.0));
    const TestFunction f(TestFamily::SmoothBump, lo - 0.5, hi + 0.5, 1.0);
    CHECK_THROWS_AS(ssf_averaging(PerturbationPath(h0, v), f, 1e-30), Error);
    try {
        ssf_averaging(PerturbationPath(h0, v), f, 1e-30);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::QuadratureFailure);
    }
}

TEST_CASE("krein engine on the 1x1 model") {
    const HermitianOperator h0 = HermitianOperator::diagonal({0.0});
    const HermitianOperator v = HermitianOperator::diagonal({1.0});
    const PerturbationPath path(h0, v);

    KreinSchedule sched;
    sched.lambda_grid = {0.5, 2.0};
    const auto estimates = ssf_krein(path, sched);
    CHECK(std::abs(estimates[0].second - 1.0) <= 1e-3);
    CHECK(std::abs(estimates[1].second - 0.0) <= 1e-3);
}

TEST_CASE("krein engine matches counting on a seeded 4x4 grid") {
    CounterRng rng(204);
    const HermitianOperator h0 = random_hermitian(rng, 4);
    const HermitianOperator v = random_hermitian(rng, 4);
    const PerturbationPath path(h0, v);
    const HermitianOperator h1 = path.at(1.0);
    const StepFunction xi = ssf_counting(h0, h1);
    const auto [lo, hi] = window(h0, h1);

    const auto& e0 = h0.eigensystem().eigenvalues;
    const auto& e1 = h1.eigensystem().eigenvalues;
    KreinSchedule sched;
    sched.epsilon_start = 0.1 * (hi - lo);
    sched.epsilon_min = 1e-13 * (hi - lo);
    for (int g = 0; g < 40; ++g) {
        const double lambda = lo - 0.5 + (hi - lo + 1.0) * static_cast<double>(g) / 39.0;
        double dist = std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < e0.size(); ++i)
            dist = std::min(dist, std::abs(e0(i) - lambda));
        for (Eigen::Index i = 0; i < e1.size(); ++i)
            dist = std::min(dist, std::abs(e1(i) - lambda));
        if (dist >= 2e-6 * (hi - lo)) sched.lambda_grid.push_back(lambda);
    }

    for (const auto& [lambda, estimate] : ssf_krein(path, sched))
        CHECK(std::abs(estimate - static_cast<double>(xi.evaluate(lambda))) <= 1e-3);
}

TEST_CASE("krein engine guards the grid and the refinement floor") {
    const HermitianOperator h0 = HermitianOperator::diagonal({0.0, 2.0});
    const HermitianOperator v = HermitianOperator::diagonal({1.0, -0.5});
    const PerturbationPath path(h0, v);

    KreinSchedule on_eigenvalue;
    on_eigenvalue.lambda_grid = {2.0};
    CHECK_THROWS_AS(ssf_krein(path, on_eigenvalue), Error);
    try {
        ssf_krein(path, on_eigenvalue);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::GuardViolation);
    }

    KreinSchedule no_room;
    no_room.lambda_grid = {0.5};
    no_room.epsilon_start = 0.1;
    no_room.epsilon_min = 0.09;
    no_room.refinement_factor = 0.5;
    CHECK_THROWS_AS(ssf_krein(path, no_room), Error);
    try {
        ssf_krein(path, no_room);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::BranchAmbiguity);
    }
}

TEST_CASE("additivity residual vanishes when v1 is zero") {
    CounterRng rng(205);
    const HermitianOperator h0 = random_hermitian(rng, 4);
    const HermitianOperator v2 = random_hermitian(rng, 4);
    const HermitianOperator v1 = HermitianOperator::zero(4);
    const auto [lo, hi] = window(h0, h0.add_scaled(v2, 1.0));
    const TestFunction f(TestFamily::CubicHat, lo - 1.0, hi + 1.0, 1.0);

    CHECK(additivity_residual(h0, v1, v2, f, EngineChoice::Counting, 1e-8) == 0.0);
    CHECK(additivity_residual(h0, v1, v2, f, EngineChoice::Averaging, 1e-8) == 0.0);
}

TEST_CASE("additivity residual: counting is exact, averaging within budget") {
    CounterRng rng(206);
    for (int c = 0; c < 6; ++c) {
        const HermitianOperator h0 = random_hermitian(rng, 5);
        const HermitianOperator v1 = random_hermitian(rng, 5);
        const HermitianOperator v2 = random_hermitian(rng, 5);
        const auto [lo, hi] =
            window(h0, h0.add_scaled(v1, 1.0).add_scaled(v2, 1.0));
        const TestFunction f = random_test_function(rng, lo - 2.0, hi + 2.0);

        CHECK(additivity_residual(h0, v1, v2, f, EngineChoice::Counting, 1e-8) == 0.0);
        CHECK(additivity_residual(h0, v1, v2, f, EngineChoice::Averaging, 1e-8) <=
              3e-8);
    }
}

TEST_CASE("additivity residual rejects the krein engine") {
    const HermitianOperator h0 = HermitianOperator::diagonal({0.0});
    const TestFunction f(TestFamily::SmoothBump, -1.0, 1.0, 1.0);
    CHECK_THROWS_AS(
        additivity_residual(h0, h0, h0, f, EngineChoice::Krein, 1e-8), Error);
}

TEST_CASE("antisymmetry: reversing the pair negates the step function exactly") {
    CounterRng rng(207);
    for (int c = 0; c < 10; ++c) {
        const std::size_t dim = 1 + rng.below(6);
        const HermitianOperator h0 = random_hermitian(rng, dim);
        const HermitianOperator h1 = h0.add_scaled(random_hermitian(rng, dim), 1.0);
        const StepFunction forward = ssf_counting(h0, h1);
        const StepFunction backward = ssf_counting(h1, h0);
        CHECK(forward.plus(backward).is_zero());
        CHECK(backward == forward.negated());

        const auto [lo, hi] = window(h0, h1);
        const TestFunction f = random_test_function(rng, lo - 1.0, hi + 1.0);
        CHECK(pair_density(forward, f, 1e-9) == -pair_density(backward, f, 1e-9));
    }
}

TEST_CASE("averaging bound by the trace norm of the perturbation") {
    CounterRng rng(208);
    for (int c = 0; c < 10; ++c) {
        const HermitianOperator h0 = random_hermitian(rng, 4);
        const HermitianOperator v = random_hermitian(rng, 4);
        const PerturbationPath path(h0, v);
        const auto [lo, hi] = window(h0, path.at(1.0));
        const TestFunction f = random_test_function(rng, lo - 1.0, hi + 1.0);
        const double tol = 1e-8;
        CHECK(std::abs(ssf_averaging(path, f, tol)) <=
              trace_norm(v) * f.sup_norm() + tol);
    }
}

TEST_CASE("mass of the counting SSF is the trace of the perturbation") {
    CounterRng rng(209);
    for (int c = 0; c < 10; ++c) {
        const std::size_t dim = 1 + rng.below(8);
        const HermitianOperator h0 = random_hermitian(rng, dim);
        const HermitianOperator v = random_hermitian(rng, dim);
        const StepFunction xi = ssf_counting(h0, h0.add_scaled(v, 1.0));
        CHECK(std::abs(xi.mass() - trace(v)) <= 1e-10);
    }
}

TEST_CASE("counting SSF is invariant under unitary conjugation") {
    CounterRng rng(210);
    const HermitianOperator h0 = random_hermitian(rng, 5);
    const HermitianOperator h1 = h0.add_scaled(random_hermitian(rng, 5), 1.0);
    const Matrix u = random_unitary(rng, 5);
    const StepFunction xi = ssf_counting(h0, h1);
    const StepFunction conjugated = ssf_counting(h0.conjugated_by(u), h1.conjugated_by(u));

    REQUIRE(conjugated.values() == xi.values());
    for (std::size_t k = 0; k < xi.breakpoints().size(); ++k)
        CHECK(std::abs(conjugated.breakpoints()[k] - xi.breakpoints()[k]) <= 1e-10);
}

TEST_CASE("counting SSF commutes with spectral shifts") {
    CounterRng rng(211);
    const HermitianOperator h0 = random_hermitian(rng, 4);
    const HermitianOperator h1 = h0.add_scaled(random_hermitian(rng, 4), 1.0);
    const double c = 2.75;
    const HermitianOperator shift = HermitianOperator::identity(4);
    const StepFunction xi = ssf_counting(h0, h1);
    const StepFunction shifted =
        ssf_counting(h0.add_scaled(shift, c), h1.add_scaled(shift, c));

    REQUIRE(shifted.values() == xi.values());
    for (std::size_t k = 0; k < xi.breakpoints().size(); ++k)
        CHECK(std::abs(shifted.breakpoints()[k] - (xi.breakpoints()[k] + c)) <= 1e-10);
}
