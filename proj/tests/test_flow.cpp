#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "engines.hpp"
#include "errors.hpp"
#include "flow.hpp"
#include "rng.hpp"

#include <cmath>
#include <limits>

using namespace specshift;

namespace {

double regular_level(CounterRng& rng, const HermitianOperator& h0,
                     const HermitianOperator& h1) {
    const auto& e0 = h0.eigensystem().eigenvalues;
    const auto& e1 = h1.eigensystem().eigenvalues;
    const double lo = std::min(e0(0), e1(0));
    const double hi = std::max(e0(e0.size() - 1), e1(e1.size() - 1));
    const double margin = 1e-6 * std::max(hi - lo, 1.0);
    for (;;) {
        const double lambda = lo - 1.0 + (hi - lo + 2.0) * rng.uniform01();
        double dist = std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < e0.size(); ++i)
            dist = std::min(dist, std::abs(e0(i) - lambda));
        for (Eigen::Index i = 0; i < e1.size(); ++i)
            dist = std::min(dist, std::abs(e1(i) - lambda));
        if (dist >= margin) return lambda;
    }
}

} // namespace

TEST_CASE("tracking a single linear eigenvalue") {
    const PerturbationPath path(HermitianOperator::diagonal({-1.0}),
                                HermitianOperator::diagonal({2.0}));
    const EigenPath track = track_eigenvalues(path, 0.25);
    REQUIRE(track.parameters.front() == 0.0);
    REQUIRE(track.parameters.back() == 1.0);
    for (std::size_t k = 0; k < track.parameters.size(); ++k)
        CHECK(track.curves[k](0) ==
              doctest::Approx(-1.0 + 2.0 * track.parameters[k]).epsilon(1e-14));
}

TEST_CASE("tracking a constant path yields constant curves") {
    CounterRng rng(401);
    const HermitianOperator h0 = random_hermitian(rng, 3);
    const PerturbationPath path(h0, HermitianOperator::zero(3));
    const EigenPath track = track_eigenvalues(path, 0.5);
    for (std::size_t k = 1; k < track.parameters.size(); ++k)
        CHECK((track.curves[k] - track.curves[0]).norm() == 0.0);
}

TEST_CASE("adjacent samples respect the Weyl bound") {
    CounterRng rng(402);
    const HermitianOperator h0 = random_hermitian(rng, 4);
    const HermitianOperator v = random_hermitian(rng, 4);
    const PerturbationPath path(h0, v);
    const double vnorm = operator_norm(v);

    const EigenPath track = track_eigenvalues(path, 1.0 / 16.0);
    for (std::size_t k = 0; k + 1 < track.parameters.size(); ++k) {
        const double dr = track.parameters[k + 1] - track.parameters[k];
        CHECK(dr <= 1.0 / 16.0 + 1e-15);
        for (int i = 0; i < 4; ++i)
            CHECK(std::abs(track.curves[k + 1](i) - track.curves[k](i)) <=
                  1.01 * vnorm * dr + 1e-14);
    }
}

TEST_CASE("flow of a single upward and downward crossing") {
    const PerturbationPath up(HermitianOperator::diagonal({-1.0}),
                              HermitianOperator::diagonal({2.0}));
    CHECK(spectral_flow(up, 0.0, 1.0 / 64.0) == 1);

    const auto events = crossing_events(up, 0.0, 1.0 / 64.0);
    REQUIRE(events.size() == 1);
    CHECK(events[0].direction == 1);
    CHECK(events[0].curve_index == 0);
    CHECK(std::abs(events[0].r_star - 0.5) <= 1e-9);

    const PerturbationPath down(HermitianOperator::diagonal({1.0}),
                                HermitianOperator::diagonal({-2.0}));
    CHECK(spectral_flow(down, 0.0, 1.0 / 64.0) == -1);
}

TEST_CASE("endpoint degeneracy is rejected") {
    const PerturbationPath path(HermitianOperator::diagonal({0.0, 2.0}),
                                HermitianOperator::diagonal({1.0, 1.0}));
    CHECK_THROWS_AS(spectral_flow(path, 2.0, 0.125), Error);
    try {
        spectral_flow(path, 2.0, 0.125);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::EndpointDegeneracy);
    }
}

TEST_CASE("flow equals the counting SSF at seeded regular levels") {
    CounterRng rng(403);
    for (int c = 0; c < 10; ++c) {
        const std::size_t dim = 2 + rng.below(4);
        const HermitianOperator h0 = random_hermitian(rng, dim);
        const HermitianOperator v = random_hermitian(rng, dim);
        const PerturbationPath path(h0, v);
        const HermitianOperator h1 = path.at(1.0);
        const StepFunction xi = ssf_counting(h0, h1);
        for (int l = 0; l < 3; ++l) {
            const double lambda = regular_level(rng, h0, h1);
            CHECK(spectral_flow(path, lambda, 1.0 / 32.0) == xi.evaluate(lambda));
        }
    }
}

TEST_CASE("flow is additive across a split of the parameter interval") {
    CounterRng rng(404);
    const HermitianOperator h0 = random_hermitian(rng, 5);
    const HermitianOperator v = random_hermitian(rng, 5);
    const PerturbationPath path(h0, v);
    const double s = 0.375;
    const HermitianOperator hs = path.at(s);
    const PerturbationPath first(h0, v.scaled(s));
    const PerturbationPath second(hs, v.scaled(1.0 - s));

    for (int l = 0; l < 5; ++l) {
        // A level regular for all three endpoint operators.
        double lambda = 0.0;
        for (;;) {
            lambda = regular_level(rng, h0, path.at(1.0));
            const auto& es = hs.eigensystem().eigenvalues;
            double dist = std::numeric_limits<double>::infinity();
            for (Eigen::Index i = 0; i < es.size(); ++i)
                dist = std::min(dist, std::abs(es(i) - lambda));
            if (dist >= 1e-6) break;
        }
        const std::int64_t whole = spectral_flow(path, lambda, 1.0 / 32.0);
        const std::int64_t split = spectral_flow(first, lambda, 1.0 / 32.0) +
                                   spectral_flow(second, lambda, 1.0 / 32.0);
        CHECK(whole == split);
    }
}

TEST_CASE("doubling the sampling resolution never changes the flow") {
    CounterRng rng(405);
    for (int c = 0; c < 5; ++c) {
        const HermitianOperator h0 = random_hermitian(rng, 4);
        const HermitianOperator v = random_hermitian(rng, 4);
        const PerturbationPath path(h0, v);
        const double lambda = regular_level(rng, h0, path.at(1.0));
        const std::int64_t coarse = spectral_flow(path, lambda, 1.0 / 8.0);
        const std::int64_t fine = spectral_flow(path, lambda, 1.0 / 16.0);
        const std::int64_t finer = spectral_flow(path, lambda, 1.0 / 32.0);
        CHECK(coarse == fine);
        CHECK(fine == finer);
    }
}
