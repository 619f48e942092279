#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include "vortex/core.hpp"
#include "vortex/equilibria.hpp"
#include "vortex/errors.hpp"
#include "vortex/integrate.hpp"
#include "vortex/reduced.hpp"
#include "vortex/slice.hpp"

// Numerical Poincare sections of the reduced dynamics near the equilateral
// equilibrium, and the full-system crawl experiment.

namespace vortex {

/// Section {theta = 0 mod 2pi} records of one reduced run.
struct SectionData {
    std::vector<std::pair<double, double>> points; // (q, p) at the crossings
    std::vector<double> energies;                  // reduced H per crossing
    double alpha_e = 1.0;
    double u = 0.0;
    double gamma = 1.0;
    int n_iters = 0;
    std::pair<double, double> start{0.0, 0.0};     // initial (q, p)
};

/// Integrate the reduced flow from a point on the section (theta = 0, j = 0)
/// and record (q, p) at each upward crossing of theta through a multiple of
/// 2 pi, located by event bisection on dense output.
inline SectionData section_map(const VState& v0, double alpha_e, double gamma,
                               int n_iters, const IntegratorConfig& cfg = {}) {
    if (n_iters < 1) throw UsageError("section_map: n_iters must be positive");
    if (std::abs(std::arg(v0.v1)) > 1e-8)
        throw UsageError("section_map: v0 must lie on the section (v1 real positive)");
    const Strengths g = Strengths::paper(gamma, 3);
    const SliceState s0 = to_slice(v0, alpha_e);
    if (std::abs(s0.j) > 1e-9 * alpha_e * alpha_e)
        throw UsageError("section_map: v0 must lie on the j = 0 momentum level");

    SectionData sd;
    sd.alpha_e = alpha_e;
    sd.u = v0.u;
    sd.gamma = gamma;
    sd.n_iters = n_iters;
    sd.start = {s0.q, s0.p};

    // State (Re v1, Im v1, Re v2, Im v2, theta) with theta unwrapped by
    // theta' = Im(v1' conj(v1)) / |v1|^2.
    const double u = v0.u;
    Field field = [g, u](double, const std::vector<double>& y,
                         std::vector<double>& dydt) {
        const VState vs{cplx(y[0], y[1]), cplx(y[2], y[3]), u};
        const auto [d1, d2] = v_field(vs, g);
        const double n1 = std::norm(vs.v1);
        dydt = {d1.real(), d1.imag(), d2.real(), d2.imag(),
                std::imag(d1 * std::conj(vs.v1)) / n1};
    };

    AdaptiveRk87 stepper(field,
                         {v0.v1.real(), v0.v1.imag(), v0.v2.real(), v0.v2.imag(),
                          std::arg(v0.v1)},
                         0.0, cfg);

    int found = 0;
    std::size_t n_steps = 0;
    const double t_max = 1e9; // generator direction; crossings end the run
    while (found < n_iters) {
        if (++n_steps > 10'000'000)
            throw Error("section_map: step budget exhausted before all crossings");
        DenseStep step = stepper.advance(t_max);
        for (;;) {
            const double target = 2.0 * pi * (found + 1);
            auto hit = find_event_in_step(
                step, [target](double, const std::vector<double>& y) {
                    return y[4] - target;
                },
                EventDirection::up);
            if (!hit) break;
            const VState vs{cplx(hit->y[0], hit->y[1]), cplx(hit->y[2], hit->y[3]), u};
            const SliceState sc = to_slice(vs, alpha_e);
            sd.points.emplace_back(sc.q, sc.p);
            sd.energies.push_back(h_v(vs, g));
            if (++found >= n_iters) break;
        }
    }
    return sd;
}

/// Unwrapped mean angular advance per crossing, in turns, measured about
/// `center` (default: the centroid of the recorded points).
inline double rotation_number(const SectionData& sd,
                              std::optional<std::pair<double, double>> center =
                                  std::nullopt) {
    if (sd.points.size() < 10)
        throw UsageError("rotation_number: need at least 10 section points");
    cplx c;
    if (center) {
        c = cplx(center->first, center->second);
    } else {
        for (const auto& [q, p] : sd.points) c += cplx(q, p);
        c /= static_cast<double>(sd.points.size());
    }
    double max_r = 0.0;
    for (const auto& [q, p] : sd.points)
        max_r = std::max(max_r, std::abs(cplx(q, p) - c));
    if (max_r < 1e-10 * (1.0 + std::abs(c)))
        throw DegenerateDataError("rotation_number: points coincide with the center");

    double total = 0.0;
    double prev = std::arg(cplx(sd.points[0].first, sd.points[0].second) - c);
    for (std::size_t k = 1; k < sd.points.size(); ++k) {
        const double ang =
            std::arg(cplx(sd.points[k].first, sd.points[k].second) - c);
        double d = ang - prev;
        while (d > pi) d -= 2.0 * pi;
        while (d <= -pi) d += 2.0 * pi;
        total += d;
        prev = ang;
    }
    return total / (2.0 * pi * static_cast<double>(sd.points.size() - 1));
}

/// Locate the perturbed periodic point of the first-return map by Newton
/// iteration on the return displacement, starting from the low-order
/// prediction (q, p) = (-3u/4, 0).
inline std::pair<double, double> find_section_fixed_point(
    double alpha_e, double u, double gamma, const IntegratorConfig& cfg = {}) {
    auto ret = [&](double q, double p) {
        const VState v0 = from_slice(SliceState{0.0, 0.0, q, p}, alpha_e, u);
        const SectionData sd = section_map(v0, alpha_e, gamma, 1, cfg);
        return sd.points.front();
    };
    double q = -0.75 * u, p = 0.0;
    const double h = 1e-6 * alpha_e;
    for (int it = 0; it < 16; ++it) {
        const auto [rq, rp] = ret(q, p);
        const double fq = rq - q, fp = rp - p;
        if (std::hypot(fq, fp) < 1e-11 * alpha_e) break;
        const auto [aq, ap] = ret(q + h, p);
        const auto [bq, bp] = ret(q - h, p);
        const auto [cq, cp] = ret(q, p + h);
        const auto [dq, dp] = ret(q, p - h);
        // Jacobian of F = R - id.
        const double j11 = (aq - bq) / (2 * h) - 1.0, j12 = (cq - dq) / (2 * h);
        const double j21 = (ap - bp) / (2 * h), j22 = (cp - dp) / (2 * h) - 1.0;
        const double det = j11 * j22 - j12 * j21;
        if (std::abs(det) < 1e-14)
            throw DegenerateDataError("find_section_fixed_point: singular Newton step");
        q -= (j22 * fq - j12 * fp) / det;
        p -= (-j21 * fq + j11 * fp) / det;
    }
    return {q, p};
}

struct CrawlResult {
    cplx drift;      // least-squares velocity of the configuration mean
    cplx predicted;  // nu / m_e with m_e = 8 pi alpha_e^2 / 3
    Trajectory trajectory;
};

/// Displace the strong vortex of an equilateral equilibrium by i eps / Gamma
/// (which sets nu = eps), integrate, and compare the measured drift of the
/// four-vortex mean against eps / m_e.
inline CrawlResult crawl_experiment(double alpha_e, double gamma, double eps,
                                    double t_end,
                                    const IntegratorConfig& cfg = {}) {
    const ReqSpec spec = make_O(alpha_e, gamma);
    const Strengths g = Strengths::paper(gamma, 3);
    FullState s0 = spec.z;
    s0.z[0] += cplx(0.0, eps / gamma);

    CrawlResult result;
    result.trajectory = simulate(s0, g, 0.0, t_end, cfg);

    const auto& traj = result.trajectory;
    const std::size_t n = traj.times.size();
    std::vector<cplx> mean(n);
    for (std::size_t k = 0; k < n; ++k) {
        cplx m{0.0, 0.0};
        for (const cplx& z : traj.states[k].z) m += z;
        mean[k] = m / static_cast<double>(traj.states[k].z.size());
    }
    double tbar = 0.0;
    cplx mbar{0.0, 0.0};
    for (std::size_t k = 0; k < n; ++k) {
        tbar += traj.times[k];
        mbar += mean[k];
    }
    tbar /= static_cast<double>(n);
    mbar /= static_cast<double>(n);
    double denom = 0.0;
    cplx numer{0.0, 0.0};
    for (std::size_t k = 0; k < n; ++k) {
        const double dt = traj.times[k] - tbar;
        denom += dt * dt;
        numer += dt * (mean[k] - mbar);
    }
    result.drift = numer / denom;

    const double m_e = 8.0 * pi * alpha_e * alpha_e / 3.0;
    result.predicted = cplx(eps, 0.0) / m_e;
    return result;
}

} // namespace vortex
