#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include "vortex/errors.hpp"
#include "vortex/integrate.hpp"
#include "vortex/se2.hpp"

// The ambient N-vortex Hamiltonian system: energy, vector field, momentum
// map, cocycle, and the relative-equilibrium residual.

namespace vortex {

inline constexpr double pi = std::numbers::pi_v<double>;

/// Circulations.  `paper(gamma, n)` builds the family Gamma_0 = Gamma,
/// Gamma_k = -Gamma/n whose total vorticity is zero by construction (the
/// entries are written down, not summed).
struct Strengths {
    double gamma = 1.0;          // base circulation Gamma
    int n_sat = 3;               // number of satellites N
    std::vector<double> values;  // Gamma_0 .. Gamma_N

    static Strengths paper(double gamma, int n_sat) {
        if (gamma == 0.0) throw UsageError("Strengths: gamma must be nonzero");
        if (n_sat < 1) throw UsageError("Strengths: need at least one satellite");
        Strengths g;
        g.gamma = gamma;
        g.n_sat = n_sat;
        g.values.assign(static_cast<std::size_t>(n_sat) + 1, -gamma / n_sat);
        g.values[0] = gamma;
        return g;
    }

    static Strengths general(std::vector<double> values) {
        if (values.size() < 2) throw UsageError("Strengths: need at least two vortices");
        for (double v : values)
            if (v == 0.0) throw UsageError("Strengths: every circulation must be nonzero");
        Strengths g;
        g.gamma = values[0];
        g.n_sat = static_cast<int>(values.size()) - 1;
        g.values = std::move(values);
        return g;
    }

    bool is_paper_family() const {
        if (values.empty() || values[0] != gamma) return false;
        for (std::size_t k = 1; k < values.size(); ++k)
            if (values[k] != -gamma / n_sat) return false;
        return true;
    }
};

/// Positions of the N+1 vortices.  Index 0 is the strong vortex.
struct FullState {
    std::vector<cplx> z;
};

namespace detail {

inline double config_diameter(const std::vector<cplx>& z) {
    double d = 0.0;
    for (std::size_t m = 0; m < z.size(); ++m)
        for (std::size_t n = m + 1; n < z.size(); ++n)
            d = std::max(d, std::abs(z[m] - z[n]));
    return d;
}

inline void check_collisions(const std::vector<cplx>& z, double guard_rel) {
    const double diam = config_diameter(z);
    const double guard = guard_rel * (diam > 0.0 ? diam : 1.0);
    for (std::size_t m = 0; m < z.size(); ++m)
        for (std::size_t n = m + 1; n < z.size(); ++n)
            if (std::abs(z[m] - z[n]) < guard)
                throw CollisionError("vortex collision: |z_" + std::to_string(m) +
                                     " - z_" + std::to_string(n) + "| below guard");
}

inline void require_sizes(const FullState& s, const Strengths& g) {
    if (s.z.size() != g.values.size())
        throw UsageError("state/strengths size mismatch");
}

} // namespace detail

/// H = -(1/8 pi) sum_{m != n} Gamma_m Gamma_n ln |z_m - z_n|^2.
inline double hamiltonian(const FullState& s, const Strengths& g,
                          double guard_rel = 1e-9) {
    detail::require_sizes(s, g);
    detail::check_collisions(s.z, guard_rel);
    double h = 0.0;
    for (std::size_t m = 0; m < s.z.size(); ++m)
        for (std::size_t n = m + 1; n < s.z.size(); ++n)
            h += g.values[m] * g.values[n] * std::log(std::norm(s.z[m] - s.z[n]));
    return -h / (4.0 * pi);
}

/// dz_n/dt = (i/2 pi) sum_{m != n} Gamma_m (z_n - z_m)/|z_n - z_m|^2.
inline std::vector<cplx> vector_field(const FullState& s, const Strengths& g,
                                      double guard_rel = 1e-9) {
    detail::require_sizes(s, g);
    detail::check_collisions(s.z, guard_rel);
    std::vector<cplx> f(s.z.size(), cplx{0.0, 0.0});
    for (std::size_t n = 0; n < s.z.size(); ++n) {
        for (std::size_t m = 0; m < s.z.size(); ++m) {
            if (m == n) continue;
            const cplx d = s.z[n] - s.z[m];
            f[n] += g.values[m] * d / std::norm(d);
        }
        f[n] *= cplx(0.0, 1.0) / (2.0 * pi);
    }
    return f;
}

/// Momentum map: mu = -(1/2) sum Gamma_n |z_n|^2, nu = -i sum Gamma_n z_n.
inline Se2Momentum momentum(const FullState& s, const Strengths& g) {
    detail::require_sizes(s, g);
    double mu = 0.0;
    cplx nu{0.0, 0.0};
    for (std::size_t n = 0; n < s.z.size(); ++n) {
        mu -= 0.5 * g.values[n] * std::norm(s.z[n]);
        nu -= cplx(0.0, 1.0) * g.values[n] * s.z[n];
    }
    return Se2Momentum{mu, nu};
}

/// Non-equivariance cocycle sigma(A, a) = -(sum Gamma_n) (|a|^2/2, i a).
/// Identically zero for the paper family.
inline Se2Momentum cocycle(const SE2Element& gel, const Strengths& g) {
    double total = 0.0;
    if (!g.is_paper_family())
        for (double v : g.values) total += v;
    return Se2Momentum{-total * 0.5 * std::norm(gel.a),
                       -total * cplx(0.0, 1.0) * gel.a};
}

/// vector_field minus the rigid generator i u z_n + v; zero exactly when s is
/// a relative equilibrium with generator xi.
inline std::vector<cplx> req_residual(const FullState& s, const Strengths& g,
                                      const Se2Vector& xi,
                                      double guard_rel = 1e-9) {
    std::vector<cplx> r = vector_field(s, g, guard_rel);
    for (std::size_t n = 0; n < s.z.size(); ++n) r[n] -= generator(xi, s.z[n]);
    return r;
}

/// Sampled ambient evolution with per-sample conserved quantities.
struct Trajectory {
    std::vector<double> times;
    std::vector<FullState> states;
    std::vector<double> H;
    std::vector<double> mu;
    std::vector<cplx> nu;
};

inline Field make_vortex_field(const Strengths& g, double guard_rel) {
    return [g, guard_rel](double, const std::vector<double>& y,
                          std::vector<double>& dydt) {
        FullState s;
        s.z.resize(y.size() / 2);
        for (std::size_t n = 0; n < s.z.size(); ++n)
            s.z[n] = cplx(y[2 * n], y[2 * n + 1]);
        const std::vector<cplx> f = vector_field(s, g, guard_rel);
        dydt.resize(y.size());
        for (std::size_t n = 0; n < f.size(); ++n) {
            dydt[2 * n] = f[n].real();
            dydt[2 * n + 1] = f[n].imag();
        }
    };
}

inline std::vector<double> pack(const FullState& s) {
    std::vector<double> y(2 * s.z.size());
    for (std::size_t n = 0; n < s.z.size(); ++n) {
        y[2 * n] = s.z[n].real();
        y[2 * n + 1] = s.z[n].imag();
    }
    return y;
}

inline FullState unpack(const std::vector<double>& y) {
    FullState s;
    s.z.resize(y.size() / 2);
    for (std::size_t n = 0; n < s.z.size(); ++n)
        s.z[n] = cplx(y[2 * n], y[2 * n + 1]);
    return s;
}

/// Integrate the ambient system and record H, mu, nu at every accepted step.
inline Trajectory simulate(const FullState& s0, const Strengths& g, double t0,
                           double t1, const IntegratorConfig& cfg = {}) {
    detail::require_sizes(s0, g);
    Solution sol = integrate(make_vortex_field(g, cfg.collision_guard), pack(s0),
                             t0, t1, cfg);
    Trajectory traj;
    traj.times = sol.times;
    traj.states.reserve(sol.states.size());
    for (const auto& y : sol.states) {
        FullState s = unpack(y);
        traj.H.push_back(hamiltonian(s, g, cfg.collision_guard));
        const Se2Momentum m = momentum(s, g);
        traj.mu.push_back(m.mu);
        traj.nu.push_back(m.nu);
        traj.states.push_back(std::move(s));
    }
    return traj;
}

} // namespace vortex
