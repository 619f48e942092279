#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "vortex/errors.hpp"
#include "vortex/se2.hpp"

// Wirtinger-derivative utilities.  Everything here is finite differences on
// purpose: these routines are the project-wide oracle against which the
// analytic formulas elsewhere are checked, so they must not share code with
// them.

namespace vortex {

/// A function of several complex variables (and implicitly their conjugates),
/// evaluated at a point.  May be complex- or real-valued.
using ComplexFunction = std::function<cplx(std::span<const cplx>)>;

namespace detail {

// 5-point central difference of t -> f(point with var idx shifted by t*dir).
inline cplx diff5(const ComplexFunction& f, std::size_t idx,
                  std::span<const cplx> point, cplx dir, double h) {
    std::vector<cplx> p(point.begin(), point.end());
    auto eval = [&](double t) {
        p[idx] = point[idx] + t * dir;
        const cplx val = f(p);
        if (!std::isfinite(val.real()) || !std::isfinite(val.imag()))
            throw NonFiniteFieldError("calculus: non-finite sample in finite difference");
        return val;
    };
    return (-eval(2 * h) + 8.0 * eval(h) - 8.0 * eval(-h) + eval(-2 * h)) / (12.0 * h);
}

inline double default_step(std::span<const cplx> point, std::size_t idx) {
    return 1e-5 * (1.0 + std::abs(point[idx]));
}

} // namespace detail

/// d/dz_idx = (d/dx - i d/dy)/2 by 4th-order central differences in x and y.
inline cplx d_dz(const ComplexFunction& f, std::size_t idx,
                 std::span<const cplx> point, double h = 0.0) {
    if (h <= 0.0) h = detail::default_step(point, idx);
    const cplx fx = detail::diff5(f, idx, point, cplx(1.0, 0.0), h);
    const cplx fy = detail::diff5(f, idx, point, cplx(0.0, 1.0), h);
    return 0.5 * (fx - cplx(0.0, 1.0) * fy);
}

/// d/dzbar_idx = (d/dx + i d/dy)/2.
inline cplx d_dzbar(const ComplexFunction& f, std::size_t idx,
                    std::span<const cplx> point, double h = 0.0) {
    if (h <= 0.0) h = detail::default_step(point, idx);
    const cplx fx = detail::diff5(f, idx, point, cplx(1.0, 0.0), h);
    const cplx fy = detail::diff5(f, idx, point, cplx(0.0, 1.0), h);
    return 0.5 * (fx + cplx(0.0, 1.0) * fy);
}

/// Weighted Poisson bracket
///   {f,g} = sum_n w_n * (-2i) (df/dz_n dg/dzbar_n - df/dzbar_n dg/dz_n).
/// With w_n = 1/Gamma_n this is the plane-vortex bracket.
inline cplx poisson_bracket(const ComplexFunction& f, const ComplexFunction& g,
                            std::span<const cplx> point,
                            std::span<const double> weights) {
    if (weights.size() != point.size())
        throw UsageError("poisson_bracket: one weight per variable required");
    cplx sum{0.0, 0.0};
    for (std::size_t n = 0; n < point.size(); ++n) {
        const cplx fz = d_dz(f, n, point);
        const cplx fzb = d_dzbar(f, n, point);
        const cplx gz = d_dz(g, n, point);
        const cplx gzb = d_dzbar(g, n, point);
        sum += weights[n] * cplx(0.0, -2.0) * (fz * gzb - fzb * gz);
    }
    return sum;
}

/// Hamiltonian vector field dz_n/dt = -2i w_n dH/dzbar_n for a real-valued H.
inline std::vector<cplx> hamiltonian_field(const ComplexFunction& h,
                                           std::span<const cplx> point,
                                           std::span<const double> weights) {
    if (weights.size() != point.size())
        throw UsageError("hamiltonian_field: one weight per variable required");
    if (std::abs(std::imag(h(point))) > 1e-10)
        throw UsageError("hamiltonian_field: Hamiltonian must be real-valued");
    std::vector<cplx> field(point.size());
    for (std::size_t n = 0; n < point.size(); ++n)
        field[n] = cplx(0.0, -2.0) * weights[n] * d_dzbar(h, n, point);
    return field;
}

/// Defect between the direct bracket of f(w(z)), g(w(z)) and the
/// structure-constant form
///   sum_{i,j} {w_i, wbar_j} (df/dw_i dg/dwbar_j - df/dwbar_j dg/dw_i),
/// valid when every w_i is holomorphic.  Throws if some w_i is not.
inline double bracket_transform_check(std::span<const ComplexFunction> w_funcs,
                                      const ComplexFunction& f,
                                      const ComplexFunction& g,
                                      std::span<const cplx> point,
                                      std::span<const double> weights) {
    const std::size_t m = w_funcs.size();
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t n = 0; n < point.size(); ++n)
            if (std::abs(d_dzbar(w_funcs[i], n, point)) > 1e-8)
                throw UsageError("bracket_transform_check: w functions must be holomorphic");

    auto through = [&](const ComplexFunction& fn) {
        return ComplexFunction([&w_funcs, fn, m](std::span<const cplx> z) {
            std::vector<cplx> w(m);
            for (std::size_t i = 0; i < m; ++i) w[i] = w_funcs[i](z);
            return fn(w);
        });
    };
    const cplx direct = poisson_bracket(through(f), through(g), point, weights);

    std::vector<cplx> wp(m);
    for (std::size_t i = 0; i < m; ++i) wp[i] = w_funcs[i](point);

    cplx structured{0.0, 0.0};
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            const ComplexFunction wj_bar([&w_funcs, j](std::span<const cplx> z) {
                return std::conj(w_funcs[j](z));
            });
            const cplx wij = poisson_bracket(w_funcs[i], wj_bar, point, weights);
            structured += wij * (d_dz(f, i, wp) * d_dzbar(g, j, wp) -
                                 d_dzbar(f, j, wp) * d_dz(g, i, wp));
        }
    }
    return std::abs(direct - structured);
}

} // namespace vortex
