#pragma once

#include "decomposition.hpp"
#include "hermitian.hpp"
#include "testfn.hpp"

#include <cstdint>
#include <vector>

namespace specshift {

// SplitMix64 counter generator. Stream k of seed s produces
//   value_i = mix64(s ^ ((k + 1) * 0xD2B74407B1CE6E93) + (i + 1) * GOLDEN)
// where GOLDEN = 0x9E3779B97F4A7C15 and mix64 is the SplitMix64 finalizer.
// Pure 64-bit integer arithmetic, so every suite replays exactly for a fixed
// seed. Uniform doubles take the top 53 bits.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t next_u64();
    double uniform01();            // [0, 1)
    double symmetric();            // [-1, 1)
    std::uint64_t below(std::uint64_t n); // {0, ..., n-1}

private:
    std::uint64_t state_;
};

// Hermitian matrix with independent unit-scale entries, symmetrized:
// every entry of A gets re and im drawn from [-1, 1), then H = (A + A*)/2.
HermitianOperator random_hermitian(CounterRng& rng, std::size_t dim);

// Unitary from the Householder QR of a random complex matrix.
Matrix random_unitary(CounterRng& rng, std::size_t dim);

// Canonical nonzero step function with up to max_pieces pieces and values
// in [-3, 3].
StepFunction random_step_function(CounterRng& rng, std::size_t max_pieces);

// Random family/support/amplitude over the given spectral window.
TestFunction random_test_function(CounterRng& rng, double window_lo, double window_hi);

// Block-labeled model: AC block of dim ac_dim, SING block of dim sing_dim.
LabeledOperator random_labeled(CounterRng& rng, std::size_t ac_dim, std::size_t sing_dim);

} // namespace specshift
