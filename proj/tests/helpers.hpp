#pragma once

#include <complex>
#include <random>
#include <vector>

#include "vortex/core.hpp"
#include "vortex/resolution.hpp"
#include "vortex/se2.hpp"

// Deterministic random inputs for the property tests.

namespace testutil {

using vortex::cplx;

inline std::mt19937& rng() {
    static std::mt19937 gen(20240811u);
    return gen;
}

inline double rand_real(double lo = -1.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(rng());
}

inline cplx rand_cplx(double scale = 1.0) {
    return scale * cplx(rand_real(), rand_real());
}

inline vortex::SE2Element rand_se2() {
    return vortex::SE2Element{std::polar(1.0, rand_real(-3.0, 3.0)), rand_cplx(2.0)};
}

inline vortex::Se2Vector rand_xi() {
    return vortex::Se2Vector{rand_real(-2.0, 2.0), rand_cplx(2.0)};
}

inline vortex::Se2Momentum rand_momentum() {
    return vortex::Se2Momentum{rand_real(-2.0, 2.0), rand_cplx(2.0)};
}

// A 4-vortex state with pairwise separations bounded away from zero (and
// away from the rotational sector, generically).
inline vortex::FullState rand_state4() {
    for (;;) {
        vortex::FullState s;
        s.z = {rand_cplx(0.4), cplx(1.0, 0.0) + rand_cplx(0.4),
               cplx(-0.5, 0.9) + rand_cplx(0.4), cplx(-0.4, -1.0) + rand_cplx(0.4)};
        double dmin = 1e9;
        cplx sum{0.0, 0.0};
        for (std::size_t m = 0; m < 4; ++m) {
            for (std::size_t n = m + 1; n < 4; ++n)
                dmin = std::min(dmin, std::abs(s.z[m] - s.z[n]));
        }
        for (int n = 1; n < 4; ++n) sum += s.z[n] - s.z[0];
        if (dmin > 0.3 && std::abs(sum) > 0.3) return s;
    }
}

inline vortex::VState rand_vstate(double u = 0.0) {
    for (;;) {
        vortex::VState vs{cplx(1.0, 0.0) + rand_cplx(0.5), rand_cplx(0.5), u};
        const cplx c1 = vs.v1 * vs.v1 * vs.v1, c2 = vs.v2 * vs.v2 * vs.v2;
        if (std::abs(c1 - c2) > 0.1 &&
            std::abs(c1 + c2 - 3.0 * u * vs.v1 * vs.v2 + u * u * u) > 0.1)
            return vs;
    }
}

} // namespace testutil
