#pragma once

#include "hermitian.hpp"
#include "testfn.hpp"

#include <utility>
#include <vector>

namespace specshift {

enum class EngineChoice { Counting, Averaging, Krein };

// xi = N_{H0} - N_{H1} as a canonical step function, built from the two
// eigenvalue lists with exact integer arithmetic. In finite dimension this
// is the unique step density satisfying the trace formula
// Tr(phi(H1) - phi(H0)) = integral of xi * phi'; the trace_difference
// cross-check below keeps that honest.
StepFunction ssf_counting(const HermitianOperator& h0, const HermitianOperator& h1);

// Tr(phi(H1)) - Tr(phi(H0)) through the functional calculus route.
double trace_difference(const HermitianOperator& h0, const HermitianOperator& h1,
                        const TestFunction& f);

// Birman-Solomyak averaging: xi(phi) = integral over r in [0,1] of
// Tr(V phi(H0 + rV)), adaptive to absolute error <= tol. The integrand is
// piecewise smooth in r (kinks where eigenvalues cross the support edges of
// phi), hence bisection-based adaptivity.
double ssf_averaging(const PerturbationPath& path, const TestFunction& f, double tol);

// Evaluation schedule for the perturbation-determinant engine.
struct KreinSchedule {
    std::vector<double> lambda_grid; // ascending, away from both spectra
    double epsilon_start = 0.1;
    double epsilon_min = 1e-13;
    double refinement_factor = 0.25;
};

// Perturbation-determinant engine: xi(lambda) is recovered from the unwound
// argument of det((H1 - z)(H0 - z)^{-1}) at z = lambda + i*eps, continued
// along the horizontal line from an anchor placed below the joint spectrum
// (where xi vanishes, so the argument is normalized to ~0). eps is decreased
// by refinement_factor until two successive estimates differ by < 1e-3.
//
// Grid points must keep |lambda - eigenvalue| >= 1e-6 * spectral diameter
// (GuardViolation otherwise); the argument is discontinuous at eigenvalues.
std::vector<std::pair<double, double>> ssf_krein(const PerturbationPath& path,
                                                 const KreinSchedule& sched);

// Residual of the Krein chain rule xi_{H2,H0} - xi_{H2,H1} - xi_{H1,H0}
// evaluated on phi, with H1 = H0 + V1 and H2 = H0 + V2. The counting engine
// combines the three step functions with exact integer arithmetic before
// pairing; the averaging engine pays for three quadratures (error <= 3 tol).
double additivity_residual(const HermitianOperator& h0, const HermitianOperator& v1,
                           const HermitianOperator& v2, const TestFunction& f,
                           EngineChoice engine, double tol);

} // namespace specshift
