#include "rng.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>

namespace specshift {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;
constexpr std::uint64_t kStreamSalt = 0xD2B74407B1CE6E93ull;

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

} // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : state_(seed ^ ((stream + 1) * kStreamSalt)) {}

std::uint64_t CounterRng::next_u64() {
    state_ += kGolden;
    return mix64(state_);
}

double CounterRng::uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double CounterRng::symmetric() { return 2.0 * uniform01() - 1.0; }

std::uint64_t CounterRng::below(std::uint64_t n) { return next_u64() % n; }

HermitianOperator random_hermitian(CounterRng& rng, std::size_t dim) {
    Matrix a(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            const double re = rng.symmetric();
            const double im = rng.symmetric();
            a(i, j) = std::complex<double>(re, im);
        }
    return HermitianOperator(0.5 * (a + a.adjoint().eval()));
}

Matrix random_unitary(CounterRng& rng, std::size_t dim) {
    Matrix a(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            const double re = rng.symmetric();
            const double im = rng.symmetric();
            a(i, j) = std::complex<double>(re, im);
        }
    Eigen::HouseholderQR<Matrix> qr(a);
    return qr.householderQ();
}

StepFunction random_step_function(CounterRng& rng, std::size_t max_pieces) {
    for (;;) {
        const std::size_t pieces = 1 + rng.below(max_pieces);
        std::vector<double> bp(pieces + 1);
        double x = -4.0 + 2.0 * rng.uniform01();
        for (double& b : bp) {
            b = x;
            x += 0.1 + 2.0 * rng.uniform01();
        }
        std::vector<std::int64_t> vv(pieces);
        for (std::int64_t& v : vv)
            v = static_cast<std::int64_t>(rng.below(7)) - 3;
        StepFunction s(std::move(bp), std::move(vv));
        if (!s.is_zero()) return s;
    }
}

TestFunction random_test_function(CounterRng& rng, double window_lo, double window_hi) {
    static const TestFamily families[3] = {TestFamily::SmoothBump,
                                           TestFamily::RaisedCosine,
                                           TestFamily::CubicHat};
    const TestFamily family = families[rng.below(3)];
    const double span = window_hi - window_lo;
    const double center = window_lo + span * rng.uniform01();
    const double half_width = 0.25 * span + 0.75 * span * rng.uniform01();
    double amplitude = (0.25 + 1.75 * rng.uniform01());
    if (rng.below(2) == 1) amplitude = -amplitude;
    return TestFunction(family, center - half_width, center + half_width, amplitude);
}

LabeledOperator random_labeled(CounterRng& rng, std::size_t ac_dim,
                               std::size_t sing_dim) {
    std::vector<LabeledBlock> blocks;
    blocks.push_back({random_hermitian(rng, ac_dim), PartLabel::AC});
    blocks.push_back({random_hermitian(rng, sing_dim), PartLabel::Sing});
    return LabeledOperator(std::move(blocks));
}

} // namespace specshift
