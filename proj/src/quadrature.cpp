#include "quadrature.hpp"

#include "errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace specshift {

namespace {

constexpr int kOrder = 15;
constexpr int kMaxDepth = 48;
constexpr long kMaxEvals = 8'000'000;
constexpr double kSafety = 0.1;

struct GaussRule {
    std::array<double, kOrder> nodes;   // on [-1, 1]
    std::array<double, kOrder> weights;
};

// Nodes are the roots of the Legendre polynomial P_15, found by Newton
// iteration from the Chebyshev initial guesses; weights via the standard
// 2 / ((1 - x^2) P'_n(x)^2) formula. Deterministic to the last bit.
GaussRule build_rule() {
    GaussRule rule{};
    const int n = kOrder;
    for (int i = 0; i < n; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        rule.nodes[i] = x;
        rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

const GaussRule& rule() {
    static const GaussRule r = build_rule();
    return r;
}

double gauss_panel(const std::function<double(double)>& f, double a, double b,
                   long& evals) {
    const GaussRule& r = rule();
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (int i = 0; i < kOrder; ++i)
        sum += r.weights[i] * f(mid + half * r.nodes[i]);
    evals += kOrder;
    return half * sum;
}

double adaptive(const std::function<double(double)>& f, double a, double b,
                double whole, double tol, int depth, long& evals) {
    if (evals > kMaxEvals)
        raise(ErrorCode::QuadratureFailure, "integrate",
              "node budget exhausted on [" + std::to_string(a) + ", " +
                  std::to_string(b) + "]");
    const double mid = 0.5 * (a + b);
    const double left = gauss_panel(f, a, mid, evals);
    const double right = gauss_panel(f, mid, b, evals);
    const double defect = std::abs(left + right - whole);
    if (defect <= kSafety * tol || b - a < 1e-300)
        return left + right;
    if (depth >= kMaxDepth)
        raise(ErrorCode::QuadratureFailure, "integrate",
              "recursion depth exhausted near x = " + std::to_string(mid));
    return adaptive(f, a, mid, left, 0.5 * tol, depth + 1, evals) +
           adaptive(f, mid, b, right, 0.5 * tol, depth + 1, evals);
}

} // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol) {
    if (!(abs_tol > 0.0))
        raise(ErrorCode::InvalidArgument, "integrate", "tolerance must be positive");
    if (a >= b) return 0.0;
    long evals = 0;
    const double whole = gauss_panel(f, a, b, evals);
    return adaptive(f, a, b, whole, abs_tol, 0, evals);
}

double integrate_split(const std::function<double(double)>& f, double a, double b,
                       const std::vector<double>& split_points, double abs_tol) {
    if (a >= b) return 0.0;
    std::vector<double> cuts;
    cuts.push_back(a);
    for (double s : split_points)
        if (s > a && s < b) cuts.push_back(s);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    const double total = b - a;
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double w = cuts[i + 1] - cuts[i];
        if (w <= 0.0) continue;
        sum += integrate(f, cuts[i], cuts[i + 1], abs_tol * (w / total));
    }
    return sum;
}

} // namespace specshift
