#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "vortex/core.hpp"
#include "vortex/errors.hpp"
#include "vortex/integrate.hpp"
#include "vortex/resolution.hpp"

// The resolved reduced Hamiltonian system on u-space and v-space, its SO(2)
// gauge momentum, the S3 action, the level-set grid, and gauge
// reconstruction back to the ambient space.

namespace vortex {

namespace detail {

inline void check_vstate(const VState& vs, double guard_rel = 1e-9) {
    if (vs.u < 0.0) throw UsageError("VState: symmetry-breaking parameter must be >= 0");
    const double scale =
        std::max({std::abs(vs.v1), std::abs(vs.v2), vs.u, 1e-300});
    const double guard = guard_rel * scale * scale * scale;
    const cplx c1 = vs.v1 * vs.v1 * vs.v1;
    const cplx c2 = vs.v2 * vs.v2 * vs.v2;
    if (std::abs(c1 - c2) < guard)
        throw CollisionError("VState: satellite collision (v1^3 = v2^3)");
    const cplx w = c1 + c2 - 3.0 * vs.u * (vs.v1 * vs.v2) +
                   vs.u * vs.u * vs.u;
    if (std::abs(w) < guard)
        throw CollisionError("VState: central collision");
}

} // namespace detail

/// Reduced Hamiltonian on u-space (any N):
///   -(1/4pi)(Gamma/N)^2 sum_{m<n} ln|u_m-u_n|^2
///   + (Gamma^2/4piN) sum_m ln|u_m+u|^2,  u = u0/N.
inline double h_u(const UState& us, const Strengths& g, double guard_rel = 1e-9) {
    detail::require_paper(g);
    if (us.n_sat() != g.n_sat) throw UsageError("h_u: satellite count mismatch");
    detail::check_ustate(us, guard_rel);
    const double N = static_cast<double>(g.n_sat);
    const double u = us.u0 / N;
    double scale = u;
    for (const cplx& un : us.u) scale = std::max(scale, std::abs(un));
    const double guard = guard_rel * (scale > 0.0 ? scale : 1.0);
    double pair_sum = 0.0;
    for (std::size_t m = 0; m < us.u.size(); ++m)
        for (std::size_t n = m + 1; n < us.u.size(); ++n)
            pair_sum += std::log(std::norm(us.u[m] - us.u[n]));
    double center_sum = 0.0;
    for (const cplx& un : us.u) {
        if (std::abs(un + u) < guard)
            throw CollisionError("h_u: satellite meets the central vortex");
        center_sum += std::log(std::norm(un + u));
    }
    const double gn = g.gamma / N;
    return -gn * gn / (4.0 * pi) * pair_sum +
           g.gamma * g.gamma / (4.0 * pi * N) * center_sum;
}

/// Reduced Hamiltonian on v-space (N = 3), written with the common
/// (v1^3+v2^3) factor cancelled so it stays finite wherever the state is
/// collision-free:
///   -(Gamma^2/18pi) ( ln|v1^3-v2^3| - 3 ln|v1^3+v2^3-3uv1v2+u^3| ).
inline double h_v(const VState& vs, const Strengths& g, double guard_rel = 1e-9) {
    detail::require_paper(g);
    if (g.n_sat != 3) throw UsageError("h_v: defined for N = 3 only");
    detail::check_vstate(vs, guard_rel);
    const cplx c1 = vs.v1 * vs.v1 * vs.v1;
    const cplx c2 = vs.v2 * vs.v2 * vs.v2;
    const cplx w = c1 + c2 - 3.0 * vs.u * (vs.v1 * vs.v2) + vs.u * vs.u * vs.u;
    return -g.gamma * g.gamma / (18.0 * pi) *
           (std::log(std::abs(c1 - c2)) - 3.0 * std::log(std::abs(w)));
}

/// dv_n/dt = (2i/Gamma) dH/dvbar_n, evaluated analytically.  At u = 0 this
/// reduces to the closed form
///   dv1/dt = -(i Gamma/3pi) (v1^6-v2^6)/|v1^6-v2^6|^2 vbar1^2 (2 vbar2^3 - vbar1^3)
/// and its v1 <-> v2 exchange.
inline std::pair<cplx, cplx> v_field(const VState& vs, const Strengths& g,
                                     double guard_rel = 1e-9) {
    detail::require_paper(g);
    if (g.n_sat != 3) throw UsageError("v_field: defined for N = 3 only");
    detail::check_vstate(vs, guard_rel);
    const cplx c1 = vs.v1 * vs.v1 * vs.v1;
    const cplx c2 = vs.v2 * vs.v2 * vs.v2;
    const cplx w = c1 + c2 - 3.0 * vs.u * (vs.v1 * vs.v2) + vs.u * vs.u * vs.u;
    const cplx iG = cplx(0.0, g.gamma / (6.0 * pi));
    auto one = [&](cplx p, cplx q, cplx pc, cplx qc) {
        // d(p)/dt with (p, q) = (v1, v2) or swapped; pc, qc their cubes.
        return -iG * std::conj(p * p / (pc - qc) -
                               3.0 * (p * p - vs.u * q) / w);
    };
    return {one(vs.v1, vs.v2, c1, c2), one(vs.v2, vs.v1, c2, c1)};
}

/// Momentum of the diagonal SO(2) action: (Gamma/2)(|v1|^2 + |v2|^2).
inline double so2_momentum(const VState& vs, const Strengths& g) {
    return 0.5 * g.gamma * (std::norm(vs.v1) + std::norm(vs.v2));
}

/// Permutation of three satellites, stored as 0-based images sigma(i).
using Perm3 = std::array<int, 3>;

inline bool perm3_is_odd(const Perm3& p) {
    int inv = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (p[i] > p[j]) ++inv;
    return (inv % 2) == 1;
}

/// S3 action on (v1, v2), generated by
///   (1,2,3) . (v1, v2) = (th v1, th^{-1} v2),   (2,3) . (v1, v2) = (v2, v1).
/// It corresponds to permuting the satellite coordinates as
/// (sigma . u)_i = u_{sigma(i)}.
inline VState s3_act(const Perm3& perm, const VState& vs) {
    Perm3 sorted = perm;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != Perm3{0, 1, 2}) throw UsageError("s3_act: not a permutation of {0,1,2}");
    const int k = perm[0];
    const cplx rot = std::pow(theta3, k);
    VState out{rot * vs.v1, std::conj(rot) * vs.v2, vs.u};
    if (perm3_is_odd(perm)) std::swap(out.v1, out.v2);
    return out;
}

/// Level-set data of the SO(2)-reduced Hamiltonian in the single complex
/// coordinate v = v2/v1 at momentum level mu.
struct ReducedEnergyGrid {
    double mu = 0.0;
    double re_min = -1.0, re_max = 1.0, im_min = -1.0, im_max = 1.0;
    int resolution = 0;
    std::vector<double> values;        // row-major, NaN on flagged cells
    std::vector<std::uint8_t> flags;   // 1 = singular cell

    double re_at(int ix) const {
        return re_min + (re_max - re_min) * ix / (resolution - 1);
    }
    double im_at(int iy) const {
        return im_min + (im_max - im_min) * iy / (resolution - 1);
    }
    double& at(int iy, int ix) { return values[iy * resolution + ix]; }
    double at(int iy, int ix) const { return values[iy * resolution + ix]; }
    bool flagged(int iy, int ix) const { return flags[iy * resolution + ix] != 0; }
};

/// Sample H(v) = -(Gamma^2/18pi) ln| (Gamma/2mu)^3 (1+|v|^2)^3 (1-v^3)/(1+v^3)^3 |
/// over a grid.  Cells within a cell-size of a collision state (v^3 = +-1)
/// are flagged, not errored.
inline ReducedEnergyGrid energy_grid(double mu, double re_min, double re_max,
                                     double im_min, double im_max,
                                     int resolution, const Strengths& g) {
    detail::require_paper(g);
    if (g.n_sat != 3) throw UsageError("energy_grid: defined for N = 3 only");
    if (mu * g.gamma <= 0.0)
        throw UsageError("energy_grid: mu Gamma must be positive");
    if (resolution < 2) throw UsageError("energy_grid: resolution must be >= 2");
    ReducedEnergyGrid grid;
    grid.mu = mu;
    grid.re_min = re_min;
    grid.re_max = re_max;
    grid.im_min = im_min;
    grid.im_max = im_max;
    grid.resolution = resolution;
    grid.values.assign(static_cast<std::size_t>(resolution) * resolution, 0.0);
    grid.flags.assign(grid.values.size(), 0);

    const double dx = (re_max - re_min) / (resolution - 1);
    const double dy = (im_max - im_min) / (resolution - 1);
    const double sing_tol = 2.4 * std::max(dx, dy);
    const double pref = std::pow(g.gamma / (2.0 * mu), 3);
    for (int iy = 0; iy < resolution; ++iy) {
        for (int ix = 0; ix < resolution; ++ix) {
            const cplx v(grid.re_at(ix), grid.im_at(iy));
            const cplx v3 = v * v * v;
            const double d1 = std::abs(1.0 - v3);
            const double d2 = std::abs(1.0 + v3);
            const std::size_t idx = static_cast<std::size_t>(iy) * resolution + ix;
            const double r2 = std::norm(v);
            const double arg = std::abs(pref) * (1.0 + r2) * (1.0 + r2) *
                               (1.0 + r2) * d1 / (d2 * d2 * d2);
            const double val =
                -g.gamma * g.gamma / (18.0 * pi) * std::log(arg);
            if (std::min(d1, d2) < sing_tol || !std::isfinite(val)) {
                grid.flags[idx] = 1;
                grid.values[idx] = std::numeric_limits<double>::quiet_NaN();
            } else {
                grid.values[idx] = val;
            }
        }
    }
    return grid;
}

/// Field adapter for the reduced flow; state is (Re v1, Im v1, Re v2, Im v2)
/// and the symmetry-breaking parameter rides along as a constant.
inline Field make_v_field(const Strengths& g, double u, double guard_rel = 1e-9) {
    return [g, u, guard_rel](double, const std::vector<double>& y,
                             std::vector<double>& dydt) {
        const VState vs{cplx(y[0], y[1]), cplx(y[2], y[3]), u};
        const auto [d1, d2] = v_field(vs, g, guard_rel);
        dydt = {d1.real(), d1.imag(), d2.real(), d2.imag()};
    };
}

/// Reduced evolution: a dense Solution in (v1, v2) plus the frozen u.
struct ReducedRun {
    Solution sol;
    double u = 0.0;

    VState state_at_sample(std::size_t k) const {
        const auto& y = sol.states[k];
        return VState{cplx(y[0], y[1]), cplx(y[2], y[3]), u};
    }
};

inline ReducedRun integrate_reduced(const VState& v0, const Strengths& g,
                                    double t0, double t1,
                                    const IntegratorConfig& cfg = {}) {
    detail::check_vstate(v0);
    ReducedRun run;
    run.u = v0.u;
    run.sol = integrate(make_v_field(g, v0.u, cfg.collision_guard),
                        {v0.v1.real(), v0.v1.imag(), v0.v2.real(), v0.v2.imag()},
                        t0, t1, cfg);
    return run;
}

namespace detail {

// Dense lookup of (v, vdot) at an arbitrary time of a reduced run.
inline void reduced_dense_eval(const ReducedRun& run, double t,
                               std::vector<double>& v, std::vector<double>& vdot) {
    const auto& steps = run.sol.steps;
    if (steps.empty()) throw UsageError("reconstruct: reduced run has no steps");
    std::size_t lo = 0, hi = steps.size() - 1;
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (steps[mid].t_end() < t)
            lo = mid + 1;
        else
            hi = mid;
    }
    steps[lo].eval(t, v);
    steps[lo].eval_derivative(t, vdot);
}

// Solve the overdetermined system  i xi_u d_n + xi_v = r_n  (one complex
// equation per vortex) for xi = (xi_u, xi_v) in the least-squares sense.
inline Se2Vector solve_gauge_generator(const std::vector<cplx>& d,
                                       const std::vector<cplx>& r) {
    double s_dd = 0.0, s_im = 0.0, s_re = 0.0, s_cross = 0.0, s_rr = 0.0,
           s_ri = 0.0;
    const double m = static_cast<double>(d.size());
    for (std::size_t n = 0; n < d.size(); ++n) {
        s_dd += std::norm(d[n]);
        s_im += d[n].imag();
        s_re += d[n].real();
        s_cross += std::imag(std::conj(d[n]) * r[n]);
        s_rr += r[n].real();
        s_ri += r[n].imag();
    }
    // Normal equations for rows (-Im d, 1, 0 | Re r), (Re d, 0, 1 | Im r).
    double a[3][4] = {{s_dd, -s_im, s_re, s_cross},
                      {-s_im, m, 0.0, s_rr},
                      {s_re, 0.0, m, s_ri}};
    for (int c = 0; c < 3; ++c) {
        int piv = c;
        for (int rr = c + 1; rr < 3; ++rr)
            if (std::abs(a[rr][c]) > std::abs(a[piv][c])) piv = rr;
        std::swap(a[c], a[piv]);
        for (int rr = 0; rr < 3; ++rr) {
            if (rr == c) continue;
            const double f = a[rr][c] / a[c][c];
            for (int k = c; k < 4; ++k) a[rr][k] -= f * a[c][k];
        }
    }
    return Se2Vector{a[0][3] / a[0][0], cplx(a[1][3] / a[1][1], a[2][3] / a[2][2])};
}

} // namespace detail

/// Reconstruct the ambient evolution g(t) . section(c(t)) from a reduced run:
/// the gauge curve g(t) solves g' = xi(t) g with xi chosen so the ambient
/// velocity is matched at every vortex (least squares over the N+1 matching
/// equations; on the boundary u0 = 0 the centroid equation degenerates and
/// the remaining ones still determine xi).
inline Trajectory reconstruct(const ReducedRun& run, const Strengths& g,
                              const SE2Element& g0 = SE2Element{},
                              const IntegratorConfig& cfg = {}) {
    detail::require_paper(g);
    if (g.n_sat != 3) throw UsageError("reconstruct: N = 3 reduced runs only");
    const double u = run.u;

    Field gauge_field = [&run, &g, u](double t, const std::vector<double>& y,
                                      std::vector<double>& dydt) {
        std::vector<double> vv, vd;
        detail::reduced_dense_eval(run, t, vv, vd);
        const VState vs{cplx(vv[0], vv[1]), cplx(vv[2], vv[3]), u};
        const cplx v1d(vd[0], vd[1]), v2d(vd[2], vd[3]);

        const UState us = from_v(vs);
        const cplx th2 = theta3 * theta3;
        const cplx ud[3] = {v1d + v2d, theta3 * v1d + th2 * v2d,
                            th2 * v1d + theta3 * v2d};

        const cplx A(y[0], y[1]), a(y[2], y[3]);
        FullState d;
        d.z.resize(4);
        d.z[0] = a;
        for (int n = 0; n < 3; ++n) d.z[n + 1] = A * (us.u[n] + u) + a;
        const std::vector<cplx> X = vector_field(d, g);
        std::vector<cplx> r(4);
        r[0] = X[0];
        for (int n = 0; n < 3; ++n) r[n + 1] = X[n + 1] - A * ud[n];
        const Se2Vector xi = detail::solve_gauge_generator(d.z, r);

        const cplx Adot = cplx(0.0, xi.u) * A;
        const cplx adot = cplx(0.0, xi.u) * a + xi.v;
        dydt = {Adot.real(), Adot.imag(), adot.real(), adot.imag()};
    };

    const std::vector<double>& times = run.sol.times;
    AdaptiveRk87 stepper(gauge_field,
                         {g0.A.real(), g0.A.imag(), g0.a.real(), g0.a.imag()},
                         times.front(), cfg);

    Trajectory traj;
    for (std::size_t k = 0; k < times.size(); ++k) {
        while (!stepper.reached(times[k])) stepper.advance(times[k]);
        const auto& y = stepper.y();
        SE2Element gel{cplx(y[0], y[1]), cplx(y[2], y[3])};
        gel.A /= std::abs(gel.A);
        const VState vs = run.state_at_sample(k);
        const FullState sec = section(from_v(vs), g);
        FullState amb;
        amb.z.resize(sec.z.size());
        for (std::size_t n = 0; n < sec.z.size(); ++n) amb.z[n] = act(gel, sec.z[n]);
        traj.times.push_back(times[k]);
        traj.H.push_back(hamiltonian(amb, g));
        const Se2Momentum mm = momentum(amb, g);
        traj.mu.push_back(mm.mu);
        traj.nu.push_back(mm.nu);
        traj.states.push_back(std::move(amb));
    }
    return traj;
}

} // namespace vortex
