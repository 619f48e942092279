#pragma once

#include <cmath>
#include <complex>

#include "vortex/errors.hpp"

namespace vortex {

using cplx = std::complex<double>;

// Real pairing on C regarded as R^2, and the planar wedge.
inline double dot(cplx z, cplx w) { return std::real(z * std::conj(w)); }
inline double wedge(cplx z, cplx w) { return -std::imag(z * std::conj(w)); }

/// Planar Euclidean group element (A, a): z maps to A z + a with |A| = 1.
/// The rotation is stored as a unit complex number, never as an angle, so
/// long reconstructions have no branch cuts to manage.
struct SE2Element {
    cplx A{1.0, 0.0};
    cplx a{0.0, 0.0};
};

/// Lie algebra element (u, v): angular rate u, translational rate v.
struct Se2Vector {
    double u = 0.0;
    cplx v{0.0, 0.0};
};

/// Dual element (mu, nu): angular momentum mu, translational momentum nu.
struct Se2Momentum {
    double mu = 0.0;
    cplx nu{0.0, 0.0};
};

inline SE2Element se2_identity() { return SE2Element{}; }

inline double pairing(const Se2Momentum& m, const Se2Vector& xi) {
    return m.mu * xi.u + dot(m.nu, xi.v);
}

// (A,a)(B,b) = (AB, a + Ab).  Rotation renormalized so |A| cannot drift.
inline SE2Element compose(const SE2Element& g, const SE2Element& h) {
    cplx A = g.A * h.A;
    const double n = std::abs(A);
    if (n > 0.0) A /= n;
    return SE2Element{A, g.a + g.A * h.a};
}

// (A,a)^{-1} = (A^{-1}, -A^{-1} a).
inline SE2Element inverse(const SE2Element& g) {
    const cplx Ainv = std::conj(g.A) / std::norm(g.A);
    return SE2Element{Ainv / std::abs(Ainv), -Ainv * g.a};
}

// Standard action on the plane.
inline cplx act(const SE2Element& g, cplx z) { return g.A * z + g.a; }

// Infinitesimal generator of the standard action: i u z + v.
inline cplx generator(const Se2Vector& xi, cplx z) {
    return cplx(0.0, xi.u) * z + xi.v;
}

namespace detail {
// (e^{iu} - 1) / (iu), evaluated by series below |u| ~ 1e-6 where the direct
// quotient cancels catastrophically.
inline cplx expm1_over(double u) {
    if (std::abs(u) < 1e-6) {
        const cplx iu(0.0, u);
        // 1 + iu/2 + (iu)^2/6 + (iu)^3/24 + (iu)^4/120
        return 1.0 + iu * (0.5 + iu * (1.0 / 6.0 + iu * (1.0 / 24.0 + iu / 120.0)));
    }
    const cplx eiu = std::polar(1.0, u);
    return (eiu - 1.0) / cplx(0.0, u);
}
} // namespace detail

// exp(u, v) = (e^{iu}, (e^{iu}-1) v / (iu)), with the pure-translation limit
// built in.
inline SE2Element exp_se2(const Se2Vector& xi) {
    return SE2Element{std::polar(1.0, xi.u), detail::expm1_over(xi.u) * xi.v};
}

// Ad_{(A,a)}(u', v') = (u', A v' - i u' a).
inline Se2Vector adjoint(const SE2Element& g, const Se2Vector& xi) {
    return Se2Vector{xi.u, g.A * xi.v - cplx(0.0, xi.u) * g.a};
}

// ad_{(u,v)}(u', v') = (0, i (u v' - u' v)).
inline Se2Vector ad(const Se2Vector& xi, const Se2Vector& eta) {
    return Se2Vector{0.0, cplx(0.0, 1.0) * (xi.u * eta.v - eta.u * xi.v)};
}

// CoAd_{(A,a)}(mu, nu) = (mu + a ^ (A nu), A nu).
inline Se2Momentum coadjoint(const SE2Element& g, const Se2Momentum& m) {
    const cplx Anu = g.A * m.nu;
    return Se2Momentum{m.mu + wedge(g.a, Anu), Anu};
}

// coad_{(u,v)}(mu, nu) = (v ^ nu, i u nu).
inline Se2Momentum coad(const Se2Vector& xi, const Se2Momentum& m) {
    return Se2Momentum{wedge(xi.v, m.nu), cplx(0.0, xi.u) * m.nu};
}

} // namespace vortex
