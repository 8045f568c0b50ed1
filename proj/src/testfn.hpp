#pragma once

#include <cstdint>
#include <vector>

namespace specshift {

enum class TestFamily {
    SmoothBump,   // exp(-1/(1-t^2)) profile, peak constant 1/e
    RaisedCosine, // (1 + cos(pi t))/2, peak constant 1
    CubicHat,     // (1-|t|)^2 (1+2|t|), peak constant 1
    PlateauBump,  // smooth-step ramps, identically amplitude on [p, q]
};

// Compactly supported test function with a closed-form derivative. Both the
// value and the derivative are exactly zero outside the support interval.
class TestFunction {
public:
    TestFunction(TestFamily family, double a, double b, double amplitude);

    // Plateau variant: identically `amplitude` on [p, q], smooth ramps on
    // [a, p] and [q, b]. Requires a < p <= q < b.
    static TestFunction plateau(double a, double p, double q, double b,
                                double amplitude);

    double evaluate(double x, int order) const;
    double operator()(double x) const { return evaluate(x, 0); }

    double support_min() const { return a_; }
    double support_max() const { return b_; }
    double amplitude() const { return amplitude_; }
    TestFamily family() const { return family_; }

    // |amplitude| * family peak constant, in closed form.
    double sup_norm() const;

    // Interior points where the family formula changes piece; quadrature
    // splits there.
    std::vector<double> seams() const;

private:
    TestFunction() = default;

    TestFamily family_ = TestFamily::SmoothBump;
    double a_ = 0.0;
    double b_ = 1.0;
    double amplitude_ = 1.0;
    double plateau_lo_ = 0.0;
    double plateau_hi_ = 0.0;
};

// Integer-valued, compactly supported, right-open step function in canonical
// form: strictly ascending breakpoints b_0 < ... < b_m, integer values
// v_1..v_m on [b_{k-1}, b_k), zero outside [b_0, b_m), adjacent values
// distinct, first and last values nonzero. The zero function has no
// breakpoints.
class StepFunction {
public:
    StepFunction() = default; // zero function
    StepFunction(std::vector<double> breakpoints, std::vector<std::int64_t> values);

    // Accumulates signed jumps (position, delta). The deltas must sum to
    // zero so the result is compactly supported.
    static StepFunction from_jumps(std::vector<std::pair<double, std::int64_t>> jumps);

    bool is_zero() const { return breakpoints_.empty(); }
    const std::vector<double>& breakpoints() const { return breakpoints_; }
    const std::vector<std::int64_t>& values() const { return values_; }

    std::int64_t evaluate(double x) const;

    double mass() const;     // integral of the function
    double abs_mass() const; // integral of its absolute value

    StepFunction negated() const;
    StepFunction plus(const StepFunction& other) const;
    StepFunction minus(const StepFunction& other) const;

    bool operator==(const StepFunction& other) const = default;

private:
    std::vector<double> breakpoints_; // size m+1, or empty
    std::vector<std::int64_t> values_; // size m
};

// xi(phi) = integral of xi * phi, adaptive per step interval intersected
// with supp phi, absolute error <= tol.
double pair_density(const StepFunction& xi, const TestFunction& f, double tol);

// integral of xi * phi' by the exact telescoping form
// sum_k v_k (phi(b_k) - phi(b_{k-1})); no quadrature error.
double pair_derivative(const StepFunction& xi, const TestFunction& f);

} // namespace specshift
