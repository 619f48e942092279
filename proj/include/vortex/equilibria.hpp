#pragma once

#include <cmath>
#include <complex>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "vortex/core.hpp"
#include "vortex/errors.hpp"
#include "vortex/reduced.hpp"
#include "vortex/resolution.hpp"

// Closed-form relative equilibria of the 4-vortex family, their linearization
// spectra, and geometric diagnostics.

namespace vortex {

enum class ReqFamily { O, Y };

/// One relative equilibrium: ambient configuration, reduced representative,
/// and rigid generator.  The configuration is produced with the rotation
/// center at the origin, so the generator is pure rotation (v_e = 0).
struct ReqSpec {
    ReqFamily family = ReqFamily::O;
    double alpha_e = 1.0;
    double gamma = 1.0;
    double u_e = 0.0;   // angular rate Gamma / (3 pi alpha_e^2)
    cplx v_e{0.0, 0.0}; // translational generator component
    double mu_e = 0.0;  // SO(2) momentum Gamma alpha_e^2 / 2
    FullState z;
    VState v;
    cplx center{0.0, 0.0};

    Se2Vector generator() const { return Se2Vector{u_e, v_e}; }
};

/// Radius ratio of the collinear-pair family: r1 = (1 + sqrt(3) - 12^{1/4})/2.
inline double y_radius_root() {
    return 0.5 * (1.0 + std::sqrt(3.0) - std::pow(12.0, 0.25));
}

/// Positive real roots of r^4 - 2 r (r^2+1) cos3theta + 1 = 0, via the
/// palindromic substitution R = r + 1/r, R^2 - 2 R cos3theta - 2 = 0.
/// cos3theta must be +1 or -1 (the only consistent branches).
inline std::vector<double> solve_radial(int cos3theta_branch) {
    if (cos3theta_branch != 1 && cos3theta_branch != -1)
        throw UsageError("solve_radial: branch must be +1 or -1");
    const double c = static_cast<double>(cos3theta_branch);
    std::vector<double> roots;
    for (double R : {c + std::sqrt(3.0), c - std::sqrt(3.0)}) {
        if (R <= 0.0) continue; // r + 1/r > 0 for positive roots
        const double disc = R * R - 4.0;
        if (disc < 0.0) continue;
        const double s = std::sqrt(disc);
        for (double r : {0.5 * (R - s), 0.5 * (R + s)})
            if (r > 0.0) roots.push_back(r);
    }
    return roots;
}

/// Equilateral family: satellites on a circle of radius alpha_e about the
/// strong vortex, rotating rigidly at u_e = Gamma / (3 pi alpha_e^2).
inline ReqSpec make_O(double alpha_e, double gamma) {
    if (alpha_e <= 0.0) throw UsageError("make_O: alpha_e must be positive");
    if (gamma == 0.0) throw UsageError("make_O: gamma must be nonzero");
    ReqSpec spec;
    spec.family = ReqFamily::O;
    spec.alpha_e = alpha_e;
    spec.gamma = gamma;
    spec.u_e = gamma / (3.0 * pi * alpha_e * alpha_e);
    spec.mu_e = 0.5 * gamma * alpha_e * alpha_e;
    spec.v_e = cplx{0.0, 0.0};
    spec.center = cplx{0.0, 0.0};
    spec.z.z = {cplx{0.0, 0.0}, cplx{alpha_e, 0.0}, alpha_e * theta3,
                alpha_e * theta3 * theta3};
    spec.v = VState{cplx{alpha_e, 0.0}, cplx{0.0, 0.0}, 0.0};
    return spec;
}

/// Collinear-pair family: strong vortex and one satellite diametrically
/// opposite on an inner circle, the outer pair on a common circle.  Built
/// from v = (v1, r1 v1) through the standard gauge, then translated so the
/// rotation center sits at the origin.
inline ReqSpec make_Y(double alpha_e, double gamma) {
    if (alpha_e <= 0.0) throw UsageError("make_Y: alpha_e must be positive");
    if (gamma == 0.0) throw UsageError("make_Y: gamma must be nonzero");
    const double r1 = y_radius_root();
    const double v1 = alpha_e / std::sqrt(1.0 + r1 * r1);

    ReqSpec spec;
    spec.family = ReqFamily::Y;
    spec.alpha_e = alpha_e;
    spec.gamma = gamma;
    spec.u_e = gamma / (3.0 * pi * alpha_e * alpha_e);
    spec.mu_e = 0.5 * gamma * alpha_e * alpha_e;
    spec.v = VState{cplx{v1, 0.0}, cplx{r1 * v1, 0.0}, 0.0};

    // Standard gauge, rotation center at (r1+1) v1 / 2 between z0 and z1.
    const cplx z1{(r1 + 1.0) * v1, 0.0};
    const cplx z2{-0.5 * (r1 + 1.0) * v1, 0.5 * std::sqrt(3.0) * (1.0 - r1) * v1};
    const cplx c{0.5 * (r1 + 1.0) * v1, 0.0};
    spec.z.z = {-c, z1 - c, z2 - c, std::conj(z2) - c};
    spec.v_e = cplx{0.0, 0.0};
    spec.center = cplx{0.0, 0.0};
    return spec;
}

/// Residual of the SO(2) relative-equilibrium equations on the boundary
/// system: (dv1/dt - i u_e v1, dv2/dt - i u_e v2) with the u = 0 field.
inline std::pair<cplx, cplx> v_req_residual(const VState& vs, double u_e,
                                            const Strengths& g) {
    VState boundary{vs.v1, vs.v2, 0.0};
    const auto [d1, d2] = v_field(boundary, g);
    return {d1 - cplx(0.0, u_e) * vs.v1, d2 - cplx(0.0, u_e) * vs.v2};
}

struct Linearization {
    Eigen::MatrixXd jacobian;
    std::vector<cplx> eigenvalues;
};

/// Real Jacobian of the relative vector field (field minus rigid generator)
/// in interleaved (x, y) coordinates, by 5-point central differences with one
/// Richardson pass, plus its spectrum from a dense eigensolver.
inline Linearization linearize(const FullState& s, const Strengths& g,
                               const Se2Vector& xi) {
    detail::require_sizes(s, g);
    const int dim = static_cast<int>(2 * s.z.size());

    cplx mean{0.0, 0.0};
    for (const cplx& z : s.z) mean += z;
    mean /= static_cast<double>(s.z.size());
    double scale = 0.0;
    for (const cplx& z : s.z) scale += std::norm(z - mean);
    scale = std::sqrt(scale / static_cast<double>(s.z.size()));
    if (scale == 0.0) scale = 1.0;

    auto resid = [&](const std::vector<double>& y) {
        std::vector<cplx> r = req_residual(unpack(y), g, xi);
        std::vector<double> out(y.size());
        for (std::size_t n = 0; n < r.size(); ++n) {
            out[2 * n] = r[n].real();
            out[2 * n + 1] = r[n].imag();
        }
        return out;
    };
    const std::vector<double> y0 = pack(s);

    auto jac_at = [&](double h) {
        Eigen::MatrixXd J(dim, dim);
        std::vector<double> y = y0;
        for (int col = 0; col < dim; ++col) {
            auto sample = [&](double offset) {
                y[col] = y0[col] + offset;
                std::vector<double> r = resid(y);
                y[col] = y0[col];
                return r;
            };
            const auto rp2 = sample(2 * h), rp1 = sample(h), rm1 = sample(-h),
                       rm2 = sample(-2 * h);
            for (int row = 0; row < dim; ++row)
                J(row, col) = (-rp2[row] + 8.0 * rp1[row] - 8.0 * rm1[row] +
                               rm2[row]) /
                              (12.0 * h);
        }
        return J;
    };

    const double h = 1e-5 * scale;
    const Eigen::MatrixXd J = (16.0 * jac_at(0.5 * h) - jac_at(h)) / 15.0;

    Linearization lin;
    lin.jacobian = J;
    Eigen::EigenSolver<Eigen::MatrixXd> solver(J);
    for (int k = 0; k < dim; ++k)
        lin.eigenvalues.push_back(
            cplx(solver.eigenvalues()[k].real(), solver.eigenvalues()[k].imag()));
    return lin;
}

/// Outer/inner circle radius ratio and the angle (degrees) subtended at the
/// rotation center by the two outer vortices.
inline std::pair<double, double> y_geometry(const ReqSpec& spec) {
    if (spec.family != ReqFamily::Y)
        throw UsageError("y_geometry: spec must be a Y equilibrium");
    const cplx c = spec.center;
    const double inner = std::abs(spec.z.z[0] - c);
    const double outer = std::abs(spec.z.z[2] - c);
    const double ratio = outer / inner;
    const cplx rel = (spec.z.z[2] - c) * std::conj(spec.z.z[3] - c);
    const double angle_deg = std::abs(std::arg(rel)) * 180.0 / pi;
    return {ratio, angle_deg};
}

} // namespace vortex
