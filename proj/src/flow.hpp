#pragma once

#include "hermitian.hpp"

#include <cstdint>
#include <vector>

namespace specshift {

// Sorted-eigenvalue curves of H_r = H0 + rV sampled over [0, 1]. Sorted
// eigenvalues of a Hermitian path are continuous, and the signed count
// through a level depends only on endpoint counting, so individual analytic
// branches through exact degeneracies are never resolved.
struct EigenPath {
    std::vector<double> parameters;            // ascending, first 0, last 1
    std::vector<Eigen::VectorXd> curves;       // curves[k](i) = lambda_i at r_k
};

// One detected level crossing: curve `curve_index` passes through lambda at
// r_star, moving up (+1) or down (-1).
struct CrossingEvent {
    double r_star;
    int curve_index;
    int direction;
};

// Samples the sorted-eigenvalue curves, refining until adjacent samples obey
// the Weyl bound |lambda_i(r) - lambda_i(r')| <= 1.01 ||V||_op |r - r'| and
// the step is at most max_step.
EigenPath track_eigenvalues(const PerturbationPath& path, double max_step);

// All crossings of the level lambda, each bracket refined by bisection to
// r-resolution 1e-10. lambda must not be an eigenvalue of H0 or H1
// (EndpointDegeneracy within 1e-9 of the spectral diameter).
std::vector<CrossingEvent> crossing_events(const PerturbationPath& path,
                                           double lambda, double max_step);

// Sum of crossing directions: the net signed flow of eigenvalues through
// lambda along the path. Equals the counting-engine SSF at lambda.
std::int64_t spectral_flow(const PerturbationPath& path, double lambda,
                           double max_step);

} // namespace specshift
