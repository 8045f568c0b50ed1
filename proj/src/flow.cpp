#include "flow.hpp"

#include "errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace specshift {

namespace {

constexpr double kLipschitzSlack = 1.01;
constexpr double kBisectResolution = 1e-10;
constexpr double kEndpointGuardFactor = 1e-9;
constexpr double kTieSlope = 1e-12;

double max_index_gap(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    double m = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a(i) - b(i)));
    return m;
}

double min_distance(const Eigen::VectorXd& ev, double lambda) {
    double d = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        d = std::min(d, std::abs(ev(i) - lambda));
    return d;
}

} // namespace

EigenPath track_eigenvalues(const PerturbationPath& path, double max_step) {
    if (!(max_step > 0.0))
        raise(ErrorCode::InvalidArgument, "track_eigenvalues",
              "max_step must be positive");

    const double vnorm = operator_norm(path.v());
    const auto sample = [&path](double r) {
        const HermitianOperator h_r = path.at(r);
        return h_r.eigensystem().eigenvalues;
    };

    const std::size_t initial =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(1.0 / max_step)));
    std::vector<double> params(initial + 1);
    std::vector<Eigen::VectorXd> curves(initial + 1);
    for (std::size_t k = 0; k <= initial; ++k) {
        params[k] = static_cast<double>(k) / static_cast<double>(initial);
        curves[k] = sample(params[k]);
    }
    params.front() = 0.0;
    params.back() = 1.0;

    // Insert midpoints wherever an adjacent pair breaks the Weyl bound. The
    // bound holds mathematically, so this only fires on solver noise.
    for (std::size_t k = 0; k + 1 < params.size();) {
        const double dr = params[k + 1] - params[k];
        if (max_index_gap(curves[k], curves[k + 1]) <= kLipschitzSlack * vnorm * dr ||
            dr <= kBisectResolution) {
            ++k;
            continue;
        }
        const double mid = 0.5 * (params[k] + params[k + 1]);
        params.insert(params.begin() + static_cast<std::ptrdiff_t>(k) + 1, mid);
        curves.insert(curves.begin() + static_cast<std::ptrdiff_t>(k) + 1, sample(mid));
    }

    EigenPath out;
    out.parameters = std::move(params);
    out.curves = std::move(curves);
    return out;
}

std::vector<CrossingEvent> crossing_events(const PerturbationPath& path,
                                           double lambda, double max_step) {
    const HermitianOperator h1 = path.at(1.0);
    const Eigen::VectorXd& ev0 = path.h0().eigensystem().eigenvalues;
    const Eigen::VectorXd& ev1 = h1.eigensystem().eigenvalues;
    const double lo = std::min(ev0(0), ev1(0));
    const double hi = std::max(ev0(ev0.size() - 1), ev1(ev1.size() - 1));
    const double guard = kEndpointGuardFactor * (hi - lo);
    const double dist = std::min(min_distance(ev0, lambda), min_distance(ev1, lambda));
    if (dist < guard || dist == 0.0)
        raise(ErrorCode::EndpointDegeneracy, "spectral_flow",
              "lambda = " + std::to_string(lambda) +
                  " is within " + std::to_string(dist) +
                  " of an endpoint eigenvalue");

    const EigenPath track = track_eigenvalues(path, max_step);
    const auto eigenvalue_at = [&path](double r, int i) {
        const HermitianOperator h_r = path.at(r);
        return h_r.eigensystem().eigenvalues(i);
    };

    std::vector<CrossingEvent> events;
    const int n = static_cast<int>(path.dim());
    for (int i = 0; i < n; ++i) {
        for (std::size_t k = 0; k + 1 < track.parameters.size(); ++k) {
            const bool above_l = track.curves[k](i) >= lambda;
            const bool above_r = track.curves[k + 1](i) >= lambda;
            if (above_l == above_r) continue;

            double rl = track.parameters[k];
            double rh = track.parameters[k + 1];
            double sl = track.curves[k](i) - lambda;
            double sh = track.curves[k + 1](i) - lambda;
            while (rh - rl > kBisectResolution) {
                const double rm = 0.5 * (rl + rh);
                const double sm = eigenvalue_at(rm, i) - lambda;
                if ((sm >= 0.0) == above_r) {
                    rh = rm;
                    sh = sm;
                } else {
                    rl = rm;
                    sl = sm;
                }
            }
            const double slope = (sh - sl) / (rh - rl);
            if (std::abs(slope) < kTieSlope)
                raise(ErrorCode::CrossingAmbiguity, "spectral_flow",
                      "crossing direction unresolved at r = " +
                          std::to_string(0.5 * (rl + rh)));
            events.push_back({0.5 * (rl + rh), i, slope > 0.0 ? +1 : -1});
        }
    }

    std::sort(events.begin(), events.end(), [](const CrossingEvent& a,
                                               const CrossingEvent& b) {
        return a.r_star < b.r_star ||
               (a.r_star == b.r_star && a.curve_index < b.curve_index);
    });
    return events;
}

std::int64_t spectral_flow(const PerturbationPath& path, double lambda,
                           double max_step) {
    std::int64_t flow = 0;
    for (const CrossingEvent& e : crossing_events(path, lambda, max_step))
        flow += e.direction;
    return flow;
}

} // namespace specshift
