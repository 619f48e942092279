#pragma once

#include <array>
#include <cmath>
#include <complex>

#include "vortex/errors.hpp"
#include "vortex/resolution.hpp"

// Slice coordinates at the equilateral relative equilibrium, the truncated
// Hamiltonian expansions, the (theta, k, w) change, and the closed-form
// return-map estimate.

namespace vortex {

/// Canonical slice coordinates (theta, j, q, p) near v = (alpha_e, 0):
/// theta the group angle, j the momentum offset, (q, p) transverse.
struct SliceState {
    double theta = 0.0;
    double j = 0.0;
    double q = 0.0;
    double p = 0.0;
};

/// Low-order coordinates (theta, k, w): k = j + |z|^2/2, w = e^{i theta} z + 3u/4.
struct WState {
    double theta = 0.0;
    double k = 0.0;
    cplx w{0.0, 0.0};
};

/// Linear estimate of the first-return map: frequencies omega+- and the 2x2
/// matrix conjugate to a rotation by 2 pi omega-.
struct PoincareEstimate {
    double omega_plus = 1.0;
    double omega_minus = 0.0;
    std::array<std::array<double, 2>, 2> matrix{{{1.0, 0.0}, {0.0, 1.0}}};
};

/// v1 = sqrt(alpha_e^2 + 2j - q^2 - p^2) e^{i theta}, v2 = (q - i p) e^{i theta}.
inline VState from_slice(const SliceState& ss, double alpha_e, double u = 0.0) {
    const double rad = alpha_e * alpha_e + 2.0 * ss.j - ss.q * ss.q - ss.p * ss.p;
    if (!(rad > 0.0))
        throw ChartError("from_slice: alpha_e^2 + 2j - q^2 - p^2 must be positive");
    const cplx phase = std::polar(1.0, ss.theta);
    return VState{std::sqrt(rad) * phase, cplx(ss.q, -ss.p) * phase, u};
}

/// Local inverse at the equilibrium: q + i p = v1 vbar2 / |v1|,
/// j = (|v1|^2 + |v2|^2 - alpha_e^2)/2, e^{i theta} = v1/|v1|.
/// Chart condition: | |v1| - alpha_e | < alpha_e, i.e. 0 < |v1| < 2 alpha_e.
inline SliceState to_slice(const VState& vs, double alpha_e) {
    const double f = std::abs(vs.v1);
    if (!(std::abs(f - alpha_e) < alpha_e))
        throw ChartError("to_slice: |v1| outside the chart (0, 2 alpha_e)");
    SliceState ss;
    ss.theta = std::arg(vs.v1);
    const cplx z = vs.v1 * std::conj(vs.v2) / f;
    ss.q = z.real();
    ss.p = z.imag();
    ss.j = 0.5 * (std::norm(vs.v1) + std::norm(vs.v2) - alpha_e * alpha_e);
    return ss;
}

/// Max-norm defect between the pushforward of the canonical slice Poisson
/// structure (1/Gamma)(dtheta^dj + dq^dp brackets) through from_slice and the
/// v-space structure -(1/Gamma) per complex coordinate, measured with
/// finite-difference Jacobians.
inline double slice_symplectic_check(const SliceState& ss, double alpha_e,
                                     double gamma) {
    auto map = [&](const std::array<double, 4>& x) {
        const VState vs = from_slice(SliceState{x[0], x[1], x[2], x[3]}, alpha_e);
        return std::array<double, 4>{vs.v1.real(), vs.v1.imag(), vs.v2.real(),
                                     vs.v2.imag()};
    };
    const std::array<double, 4> x0{ss.theta, ss.j, ss.q, ss.p};
    map(x0); // chart check up front

    double D[4][4];
    for (int col = 0; col < 4; ++col) {
        const double h = 1e-4 * (1.0 + std::abs(x0[col]));
        auto sample = [&](double off) {
            std::array<double, 4> x = x0;
            x[col] += off;
            return map(x);
        };
        const auto fp2 = sample(2 * h), fp1 = sample(h), fm1 = sample(-h),
                   fm2 = sample(-2 * h);
        for (int row = 0; row < 4; ++row)
            D[row][col] =
                (-fp2[row] + 8.0 * fp1[row] - 8.0 * fm1[row] + fm2[row]) /
                (12.0 * h);
    }

    // Pi_slice = (1/Gamma) (J + J) on (theta, j, q, p).
    double Ps[4][4] = {};
    Ps[0][1] = 1.0 / gamma;
    Ps[1][0] = -1.0 / gamma;
    Ps[2][3] = 1.0 / gamma;
    Ps[3][2] = -1.0 / gamma;
    // Pi_v = -(1/Gamma) (J + J) on (x1, y1, x2, y2).
    double Pv[4][4] = {};
    Pv[0][1] = -1.0 / gamma;
    Pv[1][0] = 1.0 / gamma;
    Pv[2][3] = -1.0 / gamma;
    Pv[3][2] = 1.0 / gamma;

    double defect = 0.0;
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            double push = 0.0;
            for (int i = 0; i < 4; ++i)
                for (int k = 0; k < 4; ++k) push += D[a][i] * Ps[i][k] * D[b][k];
            defect = std::max(defect, std::abs(push - Pv[a][b]));
        }
    }
    return defect;
}

/// Taylor expansion of the reduced Hamiltonian in the slice chart, summed by
/// epsilon-row up to `epsilon_order` (2, 3 or 4); the u and u^2 coefficients
/// of each row are included as displayed.
inline double h_slice_trunc0(const SliceState& ss, double u, double alpha_e,
                             double gamma, int epsilon_order) {
    if (epsilon_order < 0 || epsilon_order > 4)
        throw UsageError("h_slice_trunc0: epsilon_order must be 0..4");
    const double g2 = gamma * gamma;
    const double a = alpha_e;
    const cplx z(ss.q, ss.p);
    const cplx eith = std::polar(1.0, ss.theta);
    const double big = 2.0 * ss.j - std::norm(z);

    double h = g2 * std::log(a) / (3.0 * pi);
    if (epsilon_order >= 1)
        h += -g2 / (2.0 * pi * a * a) * std::real(eith * z) * u;
    if (epsilon_order >= 2) {
        h += g2 / (6.0 * pi * a * a) * big;
        h += -3.0 * g2 / (4.0 * pi * std::pow(a, 4)) *
             std::real(z * z * eith * eith) * u * u;
    }
    if (epsilon_order >= 3) {
        h += 2.0 * g2 / (9.0 * pi * std::pow(a, 3)) * std::real(z * z * z);
        h += g2 / (2.0 * pi * std::pow(a, 4)) * big * std::real(eith * z) * u;
    }
    if (epsilon_order >= 4) {
        h += -g2 / (12.0 * pi * std::pow(a, 4)) * big * big;
        h += g2 / (2.0 * pi * std::pow(a, 5)) * std::real(z * z * z * z * eith) * u;
        h += 3.0 * g2 / (2.0 * pi * std::pow(a, 6)) * big *
             std::real(z * z * eith * eith) * u * u;
    }
    return h;
}

/// Rescaled symmetric stage (constants removed, H and form divided by Gamma,
/// time scaled by Gamma/3 pi alpha_e^2):
///   j - |z|^2/2 - (3u/2) Re(e^{i theta} z) + (2/3 alpha_e) Re(z^3).
inline double h_slice_trunc1(const SliceState& ss, double u, double alpha_e) {
    const cplx z(ss.q, ss.p);
    const cplx eith = std::polar(1.0, ss.theta);
    return ss.j - 0.5 * std::norm(z) - 1.5 * u * std::real(eith * z) +
           2.0 / (3.0 * alpha_e) * std::real(z * z * z);
}

/// Canonical change to the low-order coordinates.
inline WState to_w(const SliceState& ss, double u) {
    const cplx z(ss.q, ss.p);
    return WState{ss.theta, ss.j + 0.5 * std::norm(z),
                  std::polar(1.0, ss.theta) * z + 0.75 * u};
}

inline SliceState from_w(const WState& ws, double u) {
    const cplx z = std::polar(1.0, -ws.theta) * (ws.w - 0.75 * u);
    return SliceState{ws.theta, ws.k - 0.5 * std::norm(z), z.real(), z.imag()};
}

/// omega+- = (1 +- sqrt(1 - 36 u^2/alpha_e^2))/2 and the return-map matrix
/// (the linear map w(0) -> w(2 pi) of the truncated w-equation).
inline PoincareEstimate poincare_estimate(double u, double alpha_e) {
    const double s = 36.0 * u * u / (alpha_e * alpha_e);
    if (s > 1.0)
        throw HyperbolicRegimeError("poincare_estimate: 36 u^2 > alpha_e^2");
    PoincareEstimate est;
    const double disc = std::sqrt(1.0 - s);
    est.omega_plus = 0.5 * (1.0 + disc);
    est.omega_minus = 0.5 * (1.0 - disc);

    const double vh = 6.0 * u / alpha_e;
    const double c = std::cos(2.0 * pi * est.omega_minus);
    const double sn = std::sin(2.0 * pi * est.omega_minus);
    if (std::abs(1.0 - std::abs(vh)) < 1e-14) {
        // Parabolic limit of the conjugated rotation.
        est.matrix = {{{-1.0, pi * (1.0 - vh)}, {-pi * (1.0 + vh), -1.0}}};
        return est;
    }
    const double r = std::sqrt((1.0 - vh) / (1.0 + vh));
    est.matrix = {{{c, sn * r}, {-sn / r, c}}};
    return est;
}

/// Closed-form solution of dw/dt = 2iw + (3iu/alpha_e) e^{3it} wbar:
///   w(t) = (A sqrt(omega-) e^{-i omega+ t} - Abar sqrt(omega+) e^{-i omega- t}) e^{2it}.
inline cplx w_solution(double t, cplx a_const, double u, double alpha_e) {
    const double s = 36.0 * u * u / (alpha_e * alpha_e);
    if (s > 1.0) throw HyperbolicRegimeError("w_solution: 36 u^2 > alpha_e^2");
    const double disc = std::sqrt(1.0 - s);
    const double wp = 0.5 * (1.0 + disc);
    const double wm = 0.5 * (1.0 - disc);
    const cplx osc = a_const * std::sqrt(wm) * std::polar(1.0, -wp * t) -
                     std::conj(a_const) * std::sqrt(wp) * std::polar(1.0, -wm * t);
    return osc * std::polar(1.0, 2.0 * t);
}

/// Integration constant with w(0) = w0.
inline cplx w_constant_from(cplx w0, double u, double alpha_e) {
    const double s = 36.0 * u * u / (alpha_e * alpha_e);
    if (s > 1.0) throw HyperbolicRegimeError("w_constant_from: 36 u^2 > alpha_e^2");
    const double disc = std::sqrt(1.0 - s);
    const double wp = 0.5 * (1.0 + disc);
    const double wm = 0.5 * (1.0 - disc);
    return cplx(w0.real() / (std::sqrt(wm) - std::sqrt(wp)),
                w0.imag() / (std::sqrt(wm) + std::sqrt(wp)));
}

} // namespace vortex
