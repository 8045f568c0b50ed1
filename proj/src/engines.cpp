#include "engines.hpp"

#include "errors.hpp"
#include "quadrature.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>

namespace specshift {

namespace {

constexpr double kGuardFactor = 1e-6;
constexpr double kKreinConvergence = 1e-3;
constexpr double kMaxArgIncrement = M_PI / 2.0;

double spectral_diameter(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    const double lo = std::min(a(0), b(0));
    const double hi = std::max(a(a.size() - 1), b(b.size() - 1));
    return hi - lo;
}

double distance_to_spectrum(double lambda, const Eigen::VectorXd& ev) {
    double d = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        d = std::min(d, std::abs(lambda - ev(i)));
    return d;
}

// det((H0 - z)^{-1} (H1 - z)); the quotient form keeps the magnitude tame.
std::complex<double> perturbation_determinant(const Matrix& h0, const Matrix& h1,
                                              std::complex<double> z) {
    const Eigen::Index n = h0.rows();
    Matrix a = h0 - z * Matrix::Identity(n, n);
    Matrix b = h1 - z * Matrix::Identity(n, n);
    Matrix q = a.partialPivLu().solve(b);
    return q.determinant();
}

double wrap_to_pi(double delta) {
    return delta - 2.0 * M_PI * std::round(delta / (2.0 * M_PI));
}

// One sweep at height eps: continue arg(D) from the anchor through the grid,
// keeping each increment below pi/2 by bisecting the horizontal step.
// Returns the unwound argument at every grid point.
std::vector<double> sweep_argument(const Matrix& h0, const Matrix& h1, double anchor,
                                   const std::vector<double>& grid, double eps) {
    std::vector<double> args(grid.size());
    double x = anchor;
    double current = std::arg(perturbation_determinant(h0, h1, {x, eps}));
    double unwound = current; // near zero below the joint spectrum

    const double min_step = eps * 1e-9;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        while (x < grid[j]) {
            double step = grid[j] - x;
            for (;;) {
                const double trial =
                    std::arg(perturbation_determinant(h0, h1, {x + step, eps}));
                const double inc = wrap_to_pi(trial - current);
                if (std::abs(inc) < kMaxArgIncrement) {
                    x += step;
                    current = trial;
                    unwound += inc;
                    break;
                }
                step *= 0.5;
                if (step < min_step)
                    raise(ErrorCode::BranchAmbiguity, "ssf_krein",
                          "argument increment bound unattainable near lambda = " +
                              std::to_string(x) + " at eps = " + std::to_string(eps));
            }
        }
        args[j] = unwound;
    }
    return args;
}

} // namespace

StepFunction ssf_counting(const HermitianOperator& h0, const HermitianOperator& h1) {
    if (h0.dim() != h1.dim())
        raise(ErrorCode::DimensionMismatch, "ssf_counting",
              "h0 dim " + std::to_string(h0.dim()) + ", h1 dim " +
                  std::to_string(h1.dim()));
    const Eigen::VectorXd& ev0 = h0.eigensystem().eigenvalues;
    const Eigen::VectorXd& ev1 = h1.eigensystem().eigenvalues;

    // N_{H0} jumps +1 at each eigenvalue of H0, N_{H1} subtracts likewise.
    std::vector<std::pair<double, std::int64_t>> jumps;
    jumps.reserve(static_cast<std::size_t>(ev0.size() + ev1.size()));
    for (Eigen::Index i = 0; i < ev0.size(); ++i) jumps.emplace_back(ev0(i), +1);
    for (Eigen::Index i = 0; i < ev1.size(); ++i) jumps.emplace_back(ev1(i), -1);
    return StepFunction::from_jumps(std::move(jumps));
}

double trace_difference(const HermitianOperator& h0, const HermitianOperator& h1,
                        const TestFunction& f) {
    if (h0.dim() != h1.dim())
        raise(ErrorCode::DimensionMismatch, "trace_difference",
              "h0 dim " + std::to_string(h0.dim()) + ", h1 dim " +
                  std::to_string(h1.dim()));
    const auto phi = [&f](double x) { return f.evaluate(x, 0); };
    return trace(apply_function(h1, phi)) - trace(apply_function(h0, phi));
}

double ssf_averaging(const PerturbationPath& path, const TestFunction& f, double tol) {
    if (!(tol > 0.0))
        raise(ErrorCode::InvalidArgument, "ssf_averaging", "tol must be positive");

    const Matrix& v = path.v().entries();
    const auto integrand = [&path, &v, &f](double r) {
        const HermitianOperator h_r = path.at(r);
        const EigenSystem& sys = h_r.eigensystem();
        const Matrix vu = sys.eigenvectors.adjoint() * v * sys.eigenvectors;
        double sum = 0.0;
        for (Eigen::Index k = 0; k < sys.eigenvalues.size(); ++k)
            sum += f.evaluate(sys.eigenvalues(k), 0) * vu(k, k).real();
        return sum;
    };
    return integrate(integrand, 0.0, 1.0, tol);
}

std::vector<std::pair<double, double>> ssf_krein(const PerturbationPath& path,
                                                 const KreinSchedule& sched) {
    if (sched.lambda_grid.empty())
        raise(ErrorCode::InvalidArgument, "ssf_krein", "empty lambda grid");
    if (!std::is_sorted(sched.lambda_grid.begin(), sched.lambda_grid.end()))
        raise(ErrorCode::InvalidArgument, "ssf_krein", "lambda grid must ascend");
    if (!(sched.epsilon_start > 0.0) || !(sched.epsilon_min > 0.0) ||
        sched.epsilon_min > sched.epsilon_start)
        raise(ErrorCode::InvalidArgument, "ssf_krein",
              "need 0 < epsilon_min <= epsilon_start");
    if (!(sched.refinement_factor > 0.0) || !(sched.refinement_factor < 1.0))
        raise(ErrorCode::InvalidArgument, "ssf_krein",
              "refinement factor must lie in (0, 1)");

    const HermitianOperator h1 = path.at(1.0);
    const Eigen::VectorXd& ev0 = path.h0().eigensystem().eigenvalues;
    const Eigen::VectorXd& ev1 = h1.eigensystem().eigenvalues;
    const double diameter = spectral_diameter(ev0, ev1);
    const double guard = kGuardFactor * diameter;

    std::vector<double> spectrum_distance(sched.lambda_grid.size());
    for (std::size_t j = 0; j < sched.lambda_grid.size(); ++j) {
        const double lambda = sched.lambda_grid[j];
        const double dist =
            std::min(distance_to_spectrum(lambda, ev0), distance_to_spectrum(lambda, ev1));
        if (dist < guard || dist == 0.0)
            raise(ErrorCode::GuardViolation, "ssf_krein",
                  "lambda = " + std::to_string(lambda) + " within " +
                      std::to_string(dist) + " of an eigenvalue (guard " +
                      std::to_string(guard) + ")");
        spectrum_distance[j] = dist;
    }

    // xi vanishes below the joint spectrum, so the argument is anchored there.
    const double anchor = std::min(ev0(0), ev1(0)) - trace_norm(path.v()) -
                          std::max(1.0, 0.125 * diameter);

    const Matrix& m0 = path.h0().entries();
    const Matrix& m1 = h1.entries();
    const std::size_t n = sched.lambda_grid.size();

    std::vector<double> previous;
    std::vector<double> estimate(n, 0.0);
    std::vector<bool> converged(n, false);
    std::size_t remaining = n;

    // Successive estimates can sit on a false plateau while eps is still
    // large against the distance to the nearest eigenvalue (both boundary
    // arguments hover near -pi/2 there), so agreement only counts once eps
    // has dropped into the linear regime of the point.
    double eps_previous = 0.0;
    for (double eps = sched.epsilon_start; remaining > 0;
         eps *= sched.refinement_factor) {
        const std::vector<double> args =
            sweep_argument(m0, m1, anchor, sched.lambda_grid, eps);
        if (!previous.empty()) {
            for (std::size_t j = 0; j < n; ++j) {
                if (converged[j] || eps_previous > 0.5 * spectrum_distance[j])
                    continue;
                const double cur = args[j] / M_PI;
                if (std::abs(cur - previous[j] / M_PI) < kKreinConvergence) {
                    estimate[j] = cur;
                    converged[j] = true;
                    --remaining;
                }
            }
        }
        previous = args;
        eps_previous = eps;
        if (remaining > 0 && eps * sched.refinement_factor < sched.epsilon_min)
            raise(ErrorCode::BranchAmbiguity, "ssf_krein",
                  "estimates did not stabilize before epsilon_min at " +
                      std::to_string(remaining) + " grid point(s)");
    }

    std::vector<std::pair<double, double>> out;
    out.reserve(n);
    for (std::size_t j = 0; j < n; ++j)
        out.emplace_back(sched.lambda_grid[j], estimate[j]);
    return out;
}

double additivity_residual(const HermitianOperator& h0, const HermitianOperator& v1,
                           const HermitianOperator& v2, const TestFunction& f,
                           EngineChoice engine, double tol) {
    if (h0.dim() != v1.dim() || h0.dim() != v2.dim())
        raise(ErrorCode::DimensionMismatch, "additivity_residual",
              "h0 dim " + std::to_string(h0.dim()) + ", v1 dim " +
                  std::to_string(v1.dim()) + ", v2 dim " + std::to_string(v2.dim()));

    const HermitianOperator h1 = h0.add_scaled(v1, 1.0);
    const HermitianOperator h2 = h0.add_scaled(v2, 1.0);

    switch (engine) {
        case EngineChoice::Counting: {
            const StepFunction combined = ssf_counting(h0, h2)
                                              .minus(ssf_counting(h1, h2))
                                              .minus(ssf_counting(h0, h1));
            if (combined.is_zero()) return 0.0;
            return std::abs(pair_density(combined, f, tol > 0.0 ? tol : 1e-10));
        }
        case EngineChoice::Averaging: {
            if (!(tol > 0.0))
                raise(ErrorCode::InvalidArgument, "additivity_residual",
                      "tol must be positive for the averaging engine");
            const double full = ssf_averaging(PerturbationPath(h0, v2), f, tol);
            const double upper =
                ssf_averaging(PerturbationPath(h1, v2.add_scaled(v1, -1.0)), f, tol);
            const double lower = ssf_averaging(PerturbationPath(h0, v1), f, tol);
            return std::abs(full - upper - lower);
        }
        case EngineChoice::Krein:
            raise(ErrorCode::InvalidArgument, "additivity_residual",
                  "krein engine has no phi-pairing; use counting or averaging");
    }
    return 0.0;
}

} // namespace specshift
