#include "testfn.hpp"

#include "errors.hpp"
#include "quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace specshift {

namespace {

// Below this margin the exp(-1/u) factors underflow to zero in double
// precision, so returning 0 matches the IEEE value of the formula.
constexpr double kEdgeCut = 1e-3;

// Stable logistic step S(u): 0 at u=0, 1 at u=1, flat to all orders at both
// ends. S(u) = sigma(-(1/u - 1/(1-u))).
double smooth_step(double u) {
    if (u <= kEdgeCut) return 0.0;
    if (u >= 1.0 - kEdgeCut) return 1.0;
    const double w = 1.0 / u - 1.0 / (1.0 - u);
    if (w >= 0.0) {
        const double e = std::exp(-w);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(w));
}

double smooth_step_derivative(double u) {
    if (u <= kEdgeCut || u >= 1.0 - kEdgeCut) return 0.0;
    const double s = smooth_step(u);
    const double wp = -1.0 / (u * u) - 1.0 / ((1.0 - u) * (1.0 - u));
    return -s * (1.0 - s) * wp;
}

} // namespace

TestFunction::TestFunction(TestFamily family, double a, double b, double amplitude) {
    if (!(a < b))
        raise(ErrorCode::InvalidArgument, "TestFunction",
              "support requires a < b, got [" + std::to_string(a) + ", " +
                  std::to_string(b) + "]");
    family_ = family;
    a_ = a;
    b_ = b;
    amplitude_ = amplitude;
    if (family == TestFamily::PlateauBump) {
        // Default plateau over the middle half of the support.
        plateau_lo_ = a + 0.25 * (b - a);
        plateau_hi_ = b - 0.25 * (b - a);
    }
}

TestFunction TestFunction::plateau(double a, double p, double q, double b,
                                   double amplitude) {
    if (!(a < p && p <= q && q < b))
        raise(ErrorCode::InvalidArgument, "TestFunction::plateau",
              "requires a < p <= q < b");
    TestFunction f;
    f.family_ = TestFamily::PlateauBump;
    f.a_ = a;
    f.b_ = b;
    f.amplitude_ = amplitude;
    f.plateau_lo_ = p;
    f.plateau_hi_ = q;
    return f;
}

double TestFunction::evaluate(double x, int order) const {
    if (order != 0 && order != 1)
        raise(ErrorCode::InvalidArgument, "TestFunction::evaluate",
              "order must be 0 or 1, got " + std::to_string(order));
    if (x <= a_ || x >= b_) return 0.0;

    const double width = b_ - a_;
    const double t = (2.0 * x - (a_ + b_)) / width; // in (-1, 1)
    const double dt_dx = 2.0 / width;

    switch (family_) {
        case TestFamily::SmoothBump: {
            const double u = 1.0 - t * t;
            if (u <= kEdgeCut) return 0.0; // exp(-1/u) underflows
            const double core = std::exp(-1.0 / u);
            if (order == 0) return amplitude_ * core;
            return amplitude_ * core * (-2.0 * t / (u * u)) * dt_dx;
        }
        case TestFamily::RaisedCosine: {
            if (order == 0) return amplitude_ * 0.5 * (1.0 + std::cos(M_PI * t));
            return amplitude_ * (-0.5 * M_PI * std::sin(M_PI * t)) * dt_dx;
        }
        case TestFamily::CubicHat: {
            const double s = std::abs(t);
            if (order == 0) return amplitude_ * (1.0 - s) * (1.0 - s) * (1.0 + 2.0 * s);
            const double sign = t >= 0.0 ? 1.0 : -1.0;
            return amplitude_ * sign * (-6.0 * s * (1.0 - s)) * dt_dx;
        }
        case TestFamily::PlateauBump: {
            if (x >= plateau_lo_ && x <= plateau_hi_)
                return order == 0 ? amplitude_ : 0.0;
            if (x < plateau_lo_) {
                const double ramp = plateau_lo_ - a_;
                const double u = (x - a_) / ramp;
                if (order == 0) return amplitude_ * smooth_step(u);
                return amplitude_ * smooth_step_derivative(u) / ramp;
            }
            const double ramp = b_ - plateau_hi_;
            const double u = (b_ - x) / ramp;
            if (order == 0) return amplitude_ * smooth_step(u);
            return -amplitude_ * smooth_step_derivative(u) / ramp;
        }
    }
    return 0.0;
}

double TestFunction::sup_norm() const {
    const double peak =
        family_ == TestFamily::SmoothBump ? std::exp(-1.0) : 1.0;
    return std::abs(amplitude_) * peak;
}

std::vector<double> TestFunction::seams() const {
    switch (family_) {
        case TestFamily::CubicHat:
            return {0.5 * (a_ + b_)};
        case TestFamily::PlateauBump:
            return {plateau_lo_, plateau_hi_};
        default:
            return {};
    }
}

StepFunction::StepFunction(std::vector<double> breakpoints,
                           std::vector<std::int64_t> values) {
    if (breakpoints.empty() && values.empty()) return;
    if (breakpoints.size() != values.size() + 1)
        raise(ErrorCode::InvalidArgument, "StepFunction",
              "need one more breakpoint than values");
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i)
        if (!(breakpoints[i] < breakpoints[i + 1]))
            raise(ErrorCode::InvalidArgument, "StepFunction",
                  "breakpoints must be strictly ascending");

    // Canonicalize: merge equal neighbours, then trim zero-valued ends.
    std::vector<double> bp;
    std::vector<std::int64_t> vv;
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (!vv.empty() && vv.back() == values[k]) continue;
        bp.push_back(breakpoints[k]);
        vv.push_back(values[k]);
    }
    bp.push_back(breakpoints.back());

    std::size_t lo = 0;
    std::size_t hi = vv.size();
    while (lo < hi && vv[lo] == 0) ++lo;
    while (hi > lo && vv[hi - 1] == 0) --hi;
    if (lo == hi) return; // identically zero

    breakpoints_.assign(bp.begin() + static_cast<std::ptrdiff_t>(lo),
                        bp.begin() + static_cast<std::ptrdiff_t>(hi + 1));
    values_.assign(vv.begin() + static_cast<std::ptrdiff_t>(lo),
                   vv.begin() + static_cast<std::ptrdiff_t>(hi));
}

StepFunction StepFunction::from_jumps(
    std::vector<std::pair<double, std::int64_t>> jumps) {
    std::sort(jumps.begin(), jumps.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });

    std::vector<double> positions;
    std::vector<std::int64_t> deltas;
    for (const auto& [pos, delta] : jumps) {
        if (!positions.empty() && positions.back() == pos) {
            deltas.back() += delta;
        } else {
            positions.push_back(pos);
            deltas.push_back(delta);
        }
    }

    std::int64_t level = 0;
    std::vector<double> bp;
    std::vector<std::int64_t> vv;
    for (std::size_t i = 0; i < positions.size(); ++i) {
        level += deltas[i];
        if (i + 1 < positions.size()) {
            bp.push_back(positions[i]);
            vv.push_back(level);
        }
    }
    if (level != 0)
        raise(ErrorCode::InvalidArgument, "StepFunction::from_jumps",
              "jump deltas must sum to zero for compact support");
    if (!positions.empty()) bp.push_back(positions.back());
    if (bp.size() == 1) return StepFunction{};
    return StepFunction(std::move(bp), std::move(vv));
}

std::int64_t StepFunction::evaluate(double x) const {
    if (breakpoints_.empty() || x < breakpoints_.front() || x >= breakpoints_.back())
        return 0;
    const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
    const std::size_t k = static_cast<std::size_t>(it - breakpoints_.begin());
    return values_[k - 1];
}

double StepFunction::mass() const {
    double m = 0.0;
    for (std::size_t k = 0; k < values_.size(); ++k)
        m += static_cast<double>(values_[k]) * (breakpoints_[k + 1] - breakpoints_[k]);
    return m;
}

double StepFunction::abs_mass() const {
    double m = 0.0;
    for (std::size_t k = 0; k < values_.size(); ++k)
        m += std::abs(static_cast<double>(values_[k])) *
             (breakpoints_[k + 1] - breakpoints_[k]);
    return m;
}

StepFunction StepFunction::negated() const {
    std::vector<std::int64_t> vv(values_.size());
    for (std::size_t k = 0; k < values_.size(); ++k) vv[k] = -values_[k];
    StepFunction out;
    out.breakpoints_ = breakpoints_;
    out.values_ = std::move(vv);
    return out;
}

StepFunction StepFunction::plus(const StepFunction& other) const {
    std::vector<std::pair<double, std::int64_t>> jumps;
    auto push = [&jumps](const StepFunction& s) {
        std::int64_t prev = 0;
        for (std::size_t k = 0; k < s.values_.size(); ++k) {
            jumps.emplace_back(s.breakpoints_[k], s.values_[k] - prev);
            prev = s.values_[k];
        }
        if (!s.breakpoints_.empty()) jumps.emplace_back(s.breakpoints_.back(), -prev);
    };
    push(*this);
    push(other);
    return from_jumps(std::move(jumps));
}

StepFunction StepFunction::minus(const StepFunction& other) const {
    return plus(other.negated());
}

double pair_density(const StepFunction& xi, const TestFunction& f, double tol) {
    if (!(tol > 0.0))
        raise(ErrorCode::InvalidArgument, "pair_density", "tol must be positive");
    if (xi.is_zero()) return 0.0;

    const auto& bp = xi.breakpoints();
    const auto& vv = xi.values();
    const std::vector<double> seams = f.seams();

    // Width-proportional tolerance budget over the busy pieces.
    double busy = 0.0;
    for (std::size_t k = 0; k < vv.size(); ++k) {
        const double lo = std::max(bp[k], f.support_min());
        const double hi = std::min(bp[k + 1], f.support_max());
        if (vv[k] != 0 && hi > lo) busy += hi - lo;
    }
    if (busy == 0.0) return 0.0;

    double total = 0.0;
    for (std::size_t k = 0; k < vv.size(); ++k) {
        if (vv[k] == 0) continue;
        const double lo = std::max(bp[k], f.support_min());
        const double hi = std::min(bp[k + 1], f.support_max());
        if (hi <= lo) continue;
        const double v = static_cast<double>(vv[k]);
        total += integrate_split([&f, v](double x) { return v * f.evaluate(x, 0); },
                                 lo, hi, seams, tol * ((hi - lo) / busy));
    }
    return total;
}

double pair_derivative(const StepFunction& xi, const TestFunction& f) {
    const auto& bp = xi.breakpoints();
    const auto& vv = xi.values();
    double total = 0.0;
    for (std::size_t k = 0; k < vv.size(); ++k)
        total += static_cast<double>(vv[k]) *
                 (f.evaluate(bp[k + 1], 0) - f.evaluate(bp[k], 0));
    return total;
}

} // namespace specshift
