#include <catch2/catch_amalgamated.hpp>

#include "vortex/calculus.hpp"
#include "vortex/core.hpp"
#include "vortex/resolution.hpp"

#include "helpers.hpp"

using namespace vortex;
using testutil::rand_cplx;

namespace {
const cplx I{0.0, 1.0};

const ComplexFunction f_xy = [](std::span<const cplx> z) {
    return cplx(z[0].real() * z[0].imag(), 0.0);
};
const ComplexFunction f_zbar_over_z = [](std::span<const cplx> z) {
    return std::conj(z[0]) / z[0];
};
const ComplexFunction f_cube = [](std::span<const cplx> z) { return z[0] * z[0] * z[0]; };
} // namespace

TEST_CASE("wirtinger derivatives", "[calculus]") {
    SECTION("f = xy has df/dz = z/2i") {
        for (int k = 0; k < 10; ++k) {
            const std::vector<cplx> p = {rand_cplx(2.0)};
            REQUIRE(std::abs(d_dz(f_xy, 0, p) - p[0] / (2.0 * I)) < 1e-9);
        }
    }
    SECTION("f = zbar/z has df/dx = 2i Im z / z^2") {
        const std::vector<cplx> p = {cplx(0.8, -1.3)};
        const cplx fx = d_dz(f_zbar_over_z, 0, p) + d_dzbar(f_zbar_over_z, 0, p);
        REQUIRE(std::abs(fx - 2.0 * I * p[0].imag() / (p[0] * p[0])) < 1e-9);
    }
    SECTION("holomorphic functions have vanishing dzbar") {
        for (int k = 0; k < 10; ++k) {
            const std::vector<cplx> p = {rand_cplx(1.5)};
            REQUIRE(std::abs(d_dzbar(f_cube, 0, p)) < 1e-8);
        }
    }
    SECTION("stencil is 4th order: halving h cuts the error ~16x") {
        // Re(z^7): d/dz = 7 z^6 / 2, with a nonvanishing 5th derivative.
        const ComplexFunction f = [](std::span<const cplx> z) {
            cplx w = z[0];
            for (int i = 0; i < 6; ++i) w *= z[0];
            return cplx(w.real(), 0.0);
        };
        const std::vector<cplx> p = {cplx(0.9, 0.4)};
        const cplx exact = 3.5 * std::pow(p[0], 6);
        const double e1 = std::abs(d_dz(f, 0, p, 0.08) - exact);
        const double e2 = std::abs(d_dz(f, 0, p, 0.04) - exact);
        REQUIRE(e1 / e2 > 10.0);
        REQUIRE(e1 / e2 < 24.0);
    }
    SECTION("non-finite samples are a typed error") {
        const ComplexFunction bad = [](std::span<const cplx> z) {
            return cplx(1.0, 0.0) / (z[0] - z[0]);
        };
        const std::vector<cplx> p = {cplx(1.0, 0.0)};
        REQUIRE_THROWS_AS(d_dz(bad, 0, p), NonFiniteFieldError);
    }
}

TEST_CASE("poisson bracket", "[calculus]") {
    const std::vector<double> w1 = {1.0};

    SECTION("{x^2+y^2, x^2-y^2} = -8xy") {
        const ComplexFunction f = [](std::span<const cplx> z) {
            return cplx(std::norm(z[0]), 0.0);
        };
        const ComplexFunction g = [](std::span<const cplx> z) {
            return 0.5 * (z[0] * z[0] + std::conj(z[0]) * std::conj(z[0]));
        };
        for (int k = 0; k < 10; ++k) {
            const std::vector<cplx> p = {rand_cplx(1.5)};
            const cplx expect(-8.0 * p[0].real() * p[0].imag(), 0.0);
            REQUIRE(std::abs(poisson_bracket(f, g, p, w1) - expect) < 1e-7);
        }
    }
    SECTION("antisymmetry: {f, f} = 0") {
        const std::vector<cplx> p = {rand_cplx(1.5)};
        REQUIRE(std::abs(poisson_bracket(f_xy, f_xy, p, w1)) < 1e-10);
    }
    SECTION("conjugation law {f,g}^- = {fbar, gbar}") {
        const ComplexFunction f = [](std::span<const cplx> z) {
            return z[0] * z[0] + std::conj(z[1]);
        };
        const ComplexFunction g = [](std::span<const cplx> z) {
            return z[0] * std::conj(z[0]) * z[1];
        };
        const ComplexFunction fb = [&](std::span<const cplx> z) { return std::conj(f(z)); };
        const ComplexFunction gb = [&](std::span<const cplx> z) { return std::conj(g(z)); };
        const std::vector<double> w = {1.0, -0.5};
        for (int k = 0; k < 5; ++k) {
            const std::vector<cplx> p = {rand_cplx(1.2), rand_cplx(1.2)};
            REQUIRE(std::abs(std::conj(poisson_bracket(f, g, p, w)) -
                             poisson_bracket(fb, gb, p, w)) < 1e-6);
        }
    }
    SECTION("Leibniz rule") {
        const ComplexFunction f = [](std::span<const cplx> z) { return z[0] + std::conj(z[1]); };
        const ComplexFunction g = [](std::span<const cplx> z) { return z[1] * z[1]; };
        const ComplexFunction h = [](std::span<const cplx> z) { return std::conj(z[0]) * z[1]; };
        const ComplexFunction fg = [&](std::span<const cplx> z) { return f(z) * g(z); };
        const std::vector<double> w = {1.0, 2.0};
        for (int k = 0; k < 5; ++k) {
            const std::vector<cplx> p = {rand_cplx(1.2), rand_cplx(1.2)};
            const cplx lhs = poisson_bracket(fg, h, p, w);
            const cplx rhs = f(p) * poisson_bracket(g, h, p, w) +
                             g(p) * poisson_bracket(f, h, p, w);
            REQUIRE(std::abs(lhs - rhs) < 1e-6);
        }
    }
    SECTION("Jacobi identity on polynomials") {
        const ComplexFunction f = [](std::span<const cplx> z) { return z[0] * std::conj(z[0]); };
        const ComplexFunction g = [](std::span<const cplx> z) { return z[0] * z[0] + z[1]; };
        const ComplexFunction h = [](std::span<const cplx> z) { return std::conj(z[1]) * z[0]; };
        const std::vector<double> w = {1.0, -1.5};
        auto nest = [&](const ComplexFunction& a, const ComplexFunction& b) {
            return ComplexFunction([&, a, b](std::span<const cplx> z) {
                std::vector<cplx> zz(z.begin(), z.end());
                return poisson_bracket(a, b, zz, w);
            });
        };
        const std::vector<cplx> p = {cplx(0.4, -0.7), cplx(-0.9, 0.3)};
        const cplx jac = poisson_bracket(f, nest(g, h), p, w) +
                         poisson_bracket(g, nest(h, f), p, w) +
                         poisson_bracket(h, nest(f, g), p, w);
        REQUIRE(std::abs(jac) < 1e-5);
    }
}

TEST_CASE("hamiltonian field", "[calculus]") {
    SECTION("h = |z|^2/2 gives dz/dt = -iz") {
        const ComplexFunction h = [](std::span<const cplx> z) {
            return cplx(0.5 * std::norm(z[0]), 0.0);
        };
        const std::vector<cplx> p = {cplx(0.7, -0.4)};
        const std::vector<double> w = {1.0};
        const auto field = hamiltonian_field(h, p, w);
        REQUIRE(std::abs(field[0] + cplx(0.0, 1.0) * p[0]) < 1e-9);
    }
    SECTION("constant h gives the zero field") {
        const ComplexFunction h = [](std::span<const cplx>) { return cplx(3.14, 0.0); };
        const std::vector<cplx> p = {rand_cplx(), rand_cplx()};
        const std::vector<double> w = {1.0, 2.0};
        for (const cplx& f : hamiltonian_field(h, p, w)) REQUIRE(std::abs(f) < 1e-10);
    }
    SECTION("complex-valued h is rejected") {
        const ComplexFunction h = [](std::span<const cplx> z) { return z[0]; };
        const std::vector<cplx> p = {cplx(1.0, 2.0)};
        const std::vector<double> w = {1.0};
        REQUIRE_THROWS_AS(hamiltonian_field(h, p, w), UsageError);
    }
    SECTION("4-vortex energy reproduces the analytic vector field") {
        const Strengths g = Strengths::paper(1.7, 3);
        const FullState s = testutil::rand_state4();
        const ComplexFunction h = [&g](std::span<const cplx> z) {
            FullState st;
            st.z.assign(z.begin(), z.end());
            return cplx(hamiltonian(st, g), 0.0);
        };
        std::vector<double> w;
        for (double gv : g.values) w.push_back(1.0 / gv);
        const auto fd = hamiltonian_field(h, s.z, w);
        const auto an = vector_field(s, g);
        for (std::size_t n = 0; n < 4; ++n) REQUIRE(std::abs(fd[n] - an[n]) < 1e-6);
    }
}

TEST_CASE("bracket transformation", "[calculus]") {
    SECTION("identity change of variables has zero defect") {
        const std::vector<ComplexFunction> w = {
            [](std::span<const cplx> z) { return z[0]; },
            [](std::span<const cplx> z) { return z[1]; }};
        const ComplexFunction f = [](std::span<const cplx> v) { return v[0] * std::conj(v[1]); };
        const ComplexFunction g = [](std::span<const cplx> v) { return std::conj(v[0]) + v[1] * v[1]; };
        const std::vector<cplx> p = {cplx(0.5, 0.2), cplx(-0.3, 0.9)};
        const std::vector<double> weights = {1.0, -2.0};
        REQUIRE(bracket_transform_check(w, f, g, p, weights) < 1e-6);
    }

    SECTION("the linear u -> v map recovers the v-bracket table") {
        // Satellite coordinates with the invariant-function weight -N/Gamma
        // per variable; w = (v1, v2) of the canonicalization.
        const double gamma = 1.6;
        const cplx th = theta3, th2 = theta3 * theta3;
        const std::vector<ComplexFunction> w = {
            [th, th2](std::span<const cplx> u) { return (u[0] + th2 * u[1] + th * u[2]) / 3.0; },
            [th, th2](std::span<const cplx> u) { return (u[0] + th * u[1] + th2 * u[2]) / 3.0; }};
        const ComplexFunction f = [](std::span<const cplx> v) { return v[0] * std::conj(v[0]) + v[1]; };
        const ComplexFunction g = [](std::span<const cplx> v) { return std::conj(v[1]) * v[0]; };
        const std::vector<cplx> p = {cplx(0.8, 0.1), cplx(-0.4, 0.7), cplx(-0.4, -0.8)};
        const std::vector<double> weights(3, -3.0 / gamma);
        REQUIRE(bracket_transform_check(w, f, g, p, weights) < 1e-6);

        // and the numerically measured {w_i, wbar_j} is the constant table
        const VBracketTable table = v_bracket_structure(Strengths::paper(gamma, 3));
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                const ComplexFunction wjb = [&w, j](std::span<const cplx> u) {
                    return std::conj(w[j](u));
                };
                const cplx measured = poisson_bracket(w[i], wjb, p, weights);
                REQUIRE(std::abs(measured - table.v_vbar_complex(i, j)) < 1e-6);
            }
        }
    }

    SECTION("non-holomorphic w is a typed error") {
        const std::vector<ComplexFunction> w = {
            [](std::span<const cplx> z) { return std::conj(z[0]); }};
        const ComplexFunction f = [](std::span<const cplx> v) { return v[0]; };
        const std::vector<cplx> p = {cplx(0.3, 0.6)};
        const std::vector<double> weights = {1.0};
        REQUIRE_THROWS_AS(bracket_transform_check(w, f, f, p, weights), UsageError);
    }
}
