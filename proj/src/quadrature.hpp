#pragma once

#include <functional>
#include <vector>

namespace specshift {

// Adaptive quadrature: 15-point Gauss-Legendre per interval with recursive
// bisection. A segment is accepted when the defect between its one-panel
// value and the sum over its halves is below the proportional share of the
// absolute tolerance, with a safety factor so the achieved error sits well
// under the requested one.
//
// Throws QuadratureFailure when the node budget or recursion depth is
// exhausted before the tolerance is met.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol);

// Same, but the domain is pre-split at the given points (kinks or seams of
// the integrand). Split points outside (a, b) are ignored. The tolerance is
// budgeted across pieces by width.
double integrate_split(const std::function<double(double)>& f, double a, double b,
                       const std::vector<double>& split_points, double abs_tol);

} // namespace specshift
