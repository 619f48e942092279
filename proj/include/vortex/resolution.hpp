#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "vortex/core.hpp"
#include "vortex/errors.hpp"
#include "vortex/se2.hpp"

// Maps between the ambient space P and the manifold-with-boundary P1, the
// standard gauge, the reduced bracket tables, and the u <-> v
// canonicalization (N = 3 and general N).

namespace vortex {

/// Resolved reduced state: boundary coordinate u0 >= 0 plus N satellite
/// coordinates summing to zero.
struct UState {
    double u0 = 0.0;
    std::vector<cplx> u;

    int n_sat() const { return static_cast<int>(u.size()); }

    /// Re-impose sum u_n = 0 (subtract the mean) after arithmetic; the
    /// reduced bracket is only valid on the constraint surface.
    void renormalize() {
        cplx mean{0.0, 0.0};
        for (const cplx& un : u) mean += un;
        mean /= static_cast<double>(u.size());
        for (cplx& un : u) un -= mean;
    }
};

/// Canonicalized reduced state for N = 3 with the symmetry-breaking
/// parameter u = u0/3.
struct VState {
    cplx v1{0.0, 0.0};
    cplx v2{0.0, 0.0};
    double u = 0.0;
};

inline const cplx theta3 = std::polar(1.0, 2.0 * pi / 3.0);

namespace detail {

inline void require_paper(const Strengths& g) {
    if (!g.is_paper_family())
        throw UsageError("resolution: the reduction assumes the (Gamma, -Gamma/N) family");
}

inline void check_ustate(const UState& us, double guard_rel = 1e-9) {
    if (us.u0 < 0.0) throw UsageError("UState: u0 must be nonnegative");
    double scale = std::abs(us.u0);
    for (const cplx& un : us.u) scale = std::max(scale, std::abs(un));
    const double guard = guard_rel * (scale > 0.0 ? scale : 1.0);
    for (std::size_t m = 0; m < us.u.size(); ++m)
        for (std::size_t n = m + 1; n < us.u.size(); ++n)
            if (std::abs(us.u[m] - us.u[n]) < guard)
                throw CollisionError("UState: coincident satellite coordinates");
}

} // namespace detail

/// Quotient map P° -> P1°: u0 = |sum (z_m - z_0)|, the division by the
/// centroid sum removes rotation.  Undefined on the rotational sector.
inline UState project(const FullState& s, const Strengths& g) {
    detail::require_paper(g);
    detail::require_sizes(s, g);
    const int N = g.n_sat;
    cplx sum{0.0, 0.0};
    for (int n = 1; n <= N; ++n) sum += s.z[n] - s.z[0];
    const double diam = detail::config_diameter(s.z);
    if (std::abs(sum) < 1e-10 * (diam > 0.0 ? diam : 1.0))
        throw SingularSectorError("project: state lies in the rotational sector (nu = 0)");
    UState us;
    us.u0 = std::abs(sum);
    us.u.resize(N);
    for (int n = 1; n <= N; ++n)
        us.u[n - 1] = us.u0 * (s.z[n] - s.z[0]) / sum - us.u0 / static_cast<double>(N);
    us.renormalize();
    return us;
}

/// The standard gauge P1 -> P: z_0 = 0, z_n = u_n + u0/N.  Smooth on all of
/// P1 including the boundary.
inline FullState section(const UState& us, const Strengths& g) {
    detail::require_paper(g);
    if (us.n_sat() != g.n_sat) throw UsageError("section: satellite count mismatch");
    FullState s;
    s.z.resize(us.u.size() + 1);
    s.z[0] = cplx{0.0, 0.0};
    for (std::size_t n = 0; n < us.u.size(); ++n)
        s.z[n + 1] = us.u[n] + us.u0 / static_cast<double>(g.n_sat);
    detail::check_collisions(s.z, 1e-9);
    return s;
}

/// SE(2) element carrying the standard gauge of project(s) back to s.
inline SE2Element gauge_of(const FullState& s, const Strengths& g) {
    detail::require_paper(g);
    cplx sum{0.0, 0.0};
    for (int n = 1; n <= g.n_sat; ++n) sum += s.z[n] - s.z[0];
    const double u0 = std::abs(sum);
    if (u0 == 0.0)
        throw SingularSectorError("gauge_of: state lies in the rotational sector");
    return SE2Element{sum / u0, s.z[0]};
}

/// Momentum of the standard gauge:
///   mu = (Gamma/2N) sum |u_n|^2 + Gamma u0^2 / (2 N^2),  nu = i Gamma u0 / N.
inline Se2Momentum gauge_momentum(const UState& us, const Strengths& g) {
    detail::require_paper(g);
    const double N = static_cast<double>(g.n_sat);
    double s2 = 0.0;
    for (const cplx& un : us.u) s2 += std::norm(un);
    return Se2Momentum{g.gamma / (2.0 * N) * s2 + g.gamma * us.u0 * us.u0 / (2.0 * N * N),
                       cplx(0.0, 1.0) * g.gamma * us.u0 / N};
}

/// Constant structure table of the reduced bracket on P1, in the complex
/// form {u_m, ubar_n} = -2i (1/Gamma + delta_mn / Gamma_n), Gamma_n = -Gamma/N.
/// (The bracket of the real pair is {Re u_n, Im u_n} = -(1/Gamma + 1/Gamma_n);
/// restricted to functions invariant under diagonal addition the structure
/// collapses to the single weight -N/Gamma per satellite coordinate.)
struct UBracketTable {
    double gamma;
    int n_sat;

    cplx u_ubar(int m, int n) const {
        const double gn = -gamma / n_sat;
        return cplx(0.0, -2.0) * (1.0 / gamma + (m == n ? 1.0 / gn : 0.0));
    }
    cplx u_u(int, int) const { return {0.0, 0.0}; }    // {u_m, u_n} = 0
    cplx u_u0(int) const { return {0.0, 0.0}; }        // {u_m, u_0} = 0

    // Effective per-coordinate weight on the constraint surface.
    double invariant_weight() const { return -static_cast<double>(n_sat) / gamma; }
};

inline UBracketTable bracket_structure(const UState& us, const Strengths& g) {
    detail::require_paper(g);
    if (us.n_sat() != g.n_sat) throw UsageError("bracket_structure: size mismatch");
    return UBracketTable{g.gamma, g.n_sat};
}

/// N = 3 canonicalization u = (v1 + v2, th v1 + th^2 v2, th^2 v1 + th v2).
inline UState from_v(const VState& vs) {
    if (vs.u < 0.0) throw UsageError("from_v: symmetry-breaking parameter must be >= 0");
    UState us;
    us.u0 = 3.0 * vs.u;
    us.u = {vs.v1 + vs.v2, theta3 * vs.v1 + theta3 * theta3 * vs.v2,
            theta3 * theta3 * vs.v1 + theta3 * vs.v2};
    return us;
}

inline VState to_v(const UState& us) {
    if (us.n_sat() != 3) throw UsageError("to_v: defined for N = 3 only");
    const cplx th2 = theta3 * theta3;
    VState vs;
    vs.v1 = (us.u[0] + th2 * us.u[1] + theta3 * us.u[2]) / 3.0;
    vs.v2 = (us.u[0] + theta3 * us.u[1] + th2 * us.u[2]) / 3.0;
    vs.u = us.u0 / 3.0;
    return vs;
}

// General-N canonicalization.  Columns of the forward matrix are the all-ones
// vector followed by tail-rotations of (1, th, ..., th^{N-1}); the inverse is
// the displayed (1/N) matrix with diagonal entries built from
// a = -1/(1-th), b = th/(1-th).
namespace detail {

inline std::vector<std::vector<cplx>> uv_forward_matrix(int N) {
    const cplx th = std::polar(1.0, 2.0 * pi / N);
    std::vector<std::vector<cplx>> A(N, std::vector<cplx>(N));
    for (int i = 0; i < N; ++i) A[i][0] = cplx{1.0, 0.0};
    std::vector<cplx> tail(N - 1);
    for (int j = 0; j < N - 1; ++j) tail[j] = std::pow(th, j + 1);
    for (int k = 0; k < N - 1; ++k) {
        A[0][k + 1] = cplx{1.0, 0.0};
        for (int j = 0; j < N - 1; ++j)
            A[1 + ((j + k) % (N - 1))][k + 1] = tail[j];
    }
    return A;
}

inline std::vector<std::vector<cplx>> uv_inverse_matrix(int N) {
    const cplx th = std::polar(1.0, 2.0 * pi / N);
    const cplx a = -1.0 / (1.0 - th);
    const cplx b = th / (1.0 - th);
    std::vector<cplx> tail(N - 1, cplx{1.0, 0.0});
    tail[0] = 1.0 + static_cast<double>(N) * a;
    if (N >= 3) tail[1] = 1.0 + static_cast<double>(N) * b;
    std::vector<std::vector<cplx>> B(N, std::vector<cplx>(N));
    for (int i = 0; i < N; ++i) B[i][0] = cplx{1.0, 0.0};
    for (int k = 0; k < N - 1; ++k) {
        B[0][k + 1] = cplx{1.0, 0.0};
        for (int j = 0; j < N - 1; ++j)
            B[1 + ((j + k) % (N - 1))][k + 1] = tail[j];
    }
    for (auto& row : B)
        for (auto& x : row) x /= static_cast<double>(N);
    return B;
}

} // namespace detail

/// u -> (v_1, ..., v_{N-1}); the dropped first component is the mean of u.
inline std::vector<cplx> to_v_general(const UState& us) {
    const int N = us.n_sat();
    if (N < 3) throw UsageError("to_v_general: need N >= 3");
    const auto B = detail::uv_inverse_matrix(N);
    std::vector<cplx> v(N - 1, cplx{0.0, 0.0});
    for (int i = 1; i < N; ++i)
        for (int k = 0; k < N; ++k) v[i - 1] += B[i][k] * us.u[k];
    return v;
}

inline UState from_v_general(std::span<const cplx> v, double u0) {
    const int N = static_cast<int>(v.size()) + 1;
    if (N < 3) throw UsageError("from_v_general: need N >= 3");
    const auto A = detail::uv_forward_matrix(N);
    UState us;
    us.u0 = u0;
    us.u.assign(N, cplx{0.0, 0.0});
    for (int i = 0; i < N; ++i)
        for (int k = 1; k < N; ++k) us.u[i] += A[i][k] * v[k - 1];
    return us;
}

/// Constant v-space structure table (N = 3), stated as the bracket of the
/// real pair: {Re v_i, Im v_j} = -delta_ij / Gamma, so both complex
/// coordinates are canonical with weight -1/Gamma and the flow is
/// dv/dt = (2i/Gamma) dH/dvbar.  The complex form is
/// {v_i, vbar_j} = -2i {Re v_i, Im v_j}.
struct VBracketTable {
    double gamma;
    double v_vbar(int i, int j) const { return (i == j) ? -1.0 / gamma : 0.0; }
    cplx v_vbar_complex(int i, int j) const {
        return cplx(0.0, -2.0) * v_vbar(i, j);
    }
    cplx v_v(int, int) const { return {0.0, 0.0}; }
};

inline VBracketTable v_bracket_structure(const Strengths& g) {
    detail::require_paper(g);
    if (g.n_sat != 3) throw UsageError("v_bracket_structure: defined for N = 3 only");
    return VBracketTable{g.gamma};
}

} // namespace vortex
