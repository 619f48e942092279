#include <catch2/catch_amalgamated.hpp>

#include <array>

#include "vortex/calculus.hpp"
#include "vortex/equilibria.hpp"
#include "vortex/reduced.hpp"

#include "helpers.hpp"

using namespace vortex;
using testutil::rand_cplx;
using testutil::rand_real;
using testutil::rand_state4;
using testutil::rand_vstate;

TEST_CASE("reduced hamiltonian on u-space", "[reduced]") {
    const Strengths g = Strengths::paper(1.3, 3);

    SECTION("equals the pulled-back energy up to a state-independent constant") {
        double offset = 0.0;
        for (int k = 0; k < 20; ++k) {
            const UState us = project(rand_state4(), g);
            const double d = hamiltonian(section(us, g), g) - h_u(us, g);
            if (k == 0)
                offset = d;
            else
                REQUIRE(d == Catch::Approx(offset).margin(1e-10));
        }
    }

    SECTION("equilateral boundary value") {
        const double alpha = 1.7;
        const UState us = from_v(VState{cplx(alpha, 0.0), cplx(0.0, 0.0), 0.0});
        // offset between the u- and v-forms is -(Gamma^2/36pi) ln 27
        const double cc = -g.gamma * g.gamma / (36.0 * pi) * std::log(27.0);
        REQUIRE(h_u(us, g) ==
                Catch::Approx(g.gamma * g.gamma / (3.0 * pi) * std::log(alpha) + cc)
                    .margin(1e-12));
    }

    SECTION("scaling the configuration shifts the energy by a constant") {
        const double lam = 1.9;
        double shift = 0.0;
        for (int k = 0; k < 10; ++k) {
            UState us = project(rand_state4(), g);
            UState sc = us;
            sc.u0 *= lam;
            for (cplx& u : sc.u) u *= lam;
            const double d = h_u(sc, g) - h_u(us, g);
            if (k == 0)
                shift = d;
            else
                REQUIRE(d == Catch::Approx(shift).margin(1e-10));
        }
    }

    SECTION("collision guards") {
        UState us;
        us.u0 = 3.0;
        us.u = {cplx(-1.0, 0.0), cplx(0.5, 0.0), cplx(0.5, 0.0)};
        REQUIRE_THROWS_AS(h_u(us, g), CollisionError);
    }
}

TEST_CASE("reduced hamiltonian on v-space", "[reduced]") {
    const Strengths g = Strengths::paper(2.342, 3);

    SECTION("equilateral point") {
        const double alpha = 1.23;
        const VState vs{cplx(alpha, 0.0), cplx(0.0, 0.0), 0.0};
        REQUIRE(h_v(vs, g) ==
                Catch::Approx(g.gamma * g.gamma / (3.0 * pi) * std::log(alpha))
                    .margin(1e-12));
    }

    SECTION("diagonal SO(2) invariance on the boundary") {
        for (int k = 0; k < 20; ++k) {
            const VState vs = rand_vstate(0.0);
            const cplx rot = std::polar(1.0, rand_real(-3.0, 3.0));
            const VState vr{rot * vs.v1, rot * vs.v2, 0.0};
            REQUIRE(h_v(vr, g) == Catch::Approx(h_v(vs, g)).margin(1e-12));
        }
    }

    SECTION("exact offset against the u-space form") {
        const double cc = -g.gamma * g.gamma / (36.0 * pi) * std::log(27.0);
        for (int k = 0; k < 20; ++k) {
            const VState vs = rand_vstate(rand_real(0.0, 0.6));
            REQUIRE(h_u(from_v(vs), g) - h_v(vs, g) ==
                    Catch::Approx(cc).margin(1e-10));
        }
    }
}

TEST_CASE("reduced vector field", "[reduced]") {
    const Strengths g = Strengths::paper(1.0, 3);

    SECTION("equilateral point rotates at u_e") {
        const double alpha = 1.3;
        const VState vs{cplx(alpha, 0.0), cplx(0.0, 0.0), 0.0};
        const auto [d1, d2] = v_field(vs, g);
        const double ue = g.gamma / (3.0 * pi * alpha * alpha);
        REQUIRE(std::abs(d1 - cplx(0.0, ue) * vs.v1) < 1e-14);
        REQUIRE(std::abs(d2) < 1e-14);
    }

    SECTION("boundary closed form") {
        // dv1/dt = -(i Gamma/3pi) (v1^6 - v2^6)/|v1^6 - v2^6|^2 vbar1^2 (2 vbar2^3 - vbar1^3)
        for (int k = 0; k < 30; ++k) {
            const VState vs = rand_vstate(0.0);
            const cplx p6 = std::pow(vs.v1, 6) - std::pow(vs.v2, 6);
            const cplx lit1 = -cplx(0.0, g.gamma / (3.0 * pi)) * p6 / std::norm(p6) *
                              std::conj(vs.v1 * vs.v1 *
                                        (2.0 * std::pow(vs.v2, 3) - std::pow(vs.v1, 3)));
            const cplx lit2 = -cplx(0.0, g.gamma / (3.0 * pi)) * (-p6) / std::norm(p6) *
                              std::conj(vs.v2 * vs.v2 *
                                        (2.0 * std::pow(vs.v1, 3) - std::pow(vs.v2, 3)));
            const auto [d1, d2] = v_field(vs, g);
            REQUIRE(std::abs(d1 - lit1) < 1e-12);
            REQUIRE(std::abs(d2 - lit2) < 1e-12);
        }
    }

    SECTION("matches the finite-difference gradient for u >= 0") {
        for (double u : {0.0, 0.21, 0.55}) {
            const VState vs = rand_vstate(u);
            const ComplexFunction H = [&](std::span<const cplx> v) {
                return cplx(h_v(VState{v[0], v[1], u}, g), 0.0);
            };
            const std::vector<cplx> p = {vs.v1, vs.v2};
            const auto [d1, d2] = v_field(vs, g);
            // dv/dt = (2i/Gamma) dH/dvbar
            REQUIRE(std::abs(d1 - cplx(0.0, 2.0 / g.gamma) * d_dzbar(H, 0, p)) < 1e-6);
            REQUIRE(std::abs(d2 - cplx(0.0, 2.0 / g.gamma) * d_dzbar(H, 1, p)) < 1e-6);
        }
    }

    SECTION("exchange symmetry") {
        const VState vs = rand_vstate(0.4);
        const VState sw{vs.v2, vs.v1, vs.u};
        const auto [a1, a2] = v_field(vs, g);
        const auto [b1, b2] = v_field(sw, g);
        REQUIRE(a1 == b2);
        REQUIRE(a2 == b1);
    }
}

TEST_CASE("gauge momentum and its breaking", "[reduced]") {
    const Strengths g = Strengths::paper(1.0, 3);

    SECTION("value and generator") {
        const double alpha = 1.4;
        REQUIRE(so2_momentum(VState{cplx(alpha, 0), cplx(0, 0), 0.0}, g) ==
                Catch::Approx(0.5 * g.gamma * alpha * alpha));
        // (2i/Gamma) dmu/dvbar_n = i v_n by finite differences
        const VState vs = rand_vstate(0.0);
        const ComplexFunction mu = [&](std::span<const cplx> v) {
            return cplx(so2_momentum(VState{v[0], v[1], 0.0}, g), 0.0);
        };
        const std::vector<cplx> p = {vs.v1, vs.v2};
        REQUIRE(std::abs(cplx(0.0, 2.0 / g.gamma) * d_dzbar(mu, 0, p) -
                         cplx(0.0, 1.0) * vs.v1) < 1e-8);
        REQUIRE(std::abs(cplx(0.0, 2.0 / g.gamma) * d_dzbar(mu, 1, p) -
                         cplx(0.0, 1.0) * vs.v2) < 1e-8);
    }

    SECTION("conserved on the boundary over 50 time units") {
        const VState v0{cplx(1.1, 0.3), cplx(-0.2, 0.5), 0.0};
        const ReducedRun run = integrate_reduced(v0, g, 0.0, 50.0);
        const double m0 = so2_momentum(run.state_at_sample(0), g);
        const double h0 = h_v(run.state_at_sample(0), g);
        for (std::size_t k = 0; k < run.sol.times.size(); ++k) {
            REQUIRE(std::abs(so2_momentum(run.state_at_sample(k), g) - m0) <
                    1e-8 * std::abs(m0));
            REQUIRE(std::abs(h_v(run.state_at_sample(k), g) - h0) < 1e-8 * std::abs(h0));
        }
    }

    SECTION("measurably broken off the boundary") {
        const VState vs{cplx(1.1, 0.3), cplx(-0.2, 0.5), 0.21};
        const auto [d1, d2] = v_field(vs, g);
        const double mudot =
            g.gamma * std::real(std::conj(vs.v1) * d1 + std::conj(vs.v2) * d2);
        REQUIRE(std::abs(mudot) > 1e-3);
        // the energy is still conserved
        const ReducedRun run = integrate_reduced(vs, g, 0.0, 20.0);
        const double h0 = h_v(run.state_at_sample(0), g);
        for (std::size_t k = 0; k < run.sol.times.size(); ++k)
            REQUIRE(std::abs(h_v(run.state_at_sample(k), g) - h0) < 1e-8 * std::abs(h0));
    }
}

TEST_CASE("permutation action", "[reduced]") {
    const Strengths g = Strengths::paper(1.0, 3);

    SECTION("identity and order three") {
        const VState vs = rand_vstate(0.3);
        const VState id = s3_act({0, 1, 2}, vs);
        REQUIRE(id.v1 == vs.v1);
        REQUIRE(id.v2 == vs.v2);
        VState w = vs;
        for (int k = 0; k < 3; ++k) w = s3_act({1, 2, 0}, w);
        REQUIRE(std::abs(w.v1 - vs.v1) < 1e-12);
        REQUIRE(std::abs(w.v2 - vs.v2) < 1e-12);
    }

    SECTION("energy invariance for all six permutations") {
        const std::array<Perm3, 6> all = {Perm3{0, 1, 2}, Perm3{1, 2, 0}, Perm3{2, 0, 1},
                                          Perm3{0, 2, 1}, Perm3{2, 1, 0}, Perm3{1, 0, 2}};
        for (int k = 0; k < 10; ++k) {
            const VState vs = rand_vstate(rand_real(0.0, 0.5));
            for (const Perm3& p : all)
                REQUIRE(h_v(s3_act(p, vs), g) == Catch::Approx(h_v(vs, g)).margin(1e-10));
        }
    }

    SECTION("u-space oracle for the generators") {
        const VState vs = rand_vstate(0.2);
        const UState us = from_v(vs);
        for (const Perm3& p : {Perm3{1, 2, 0}, Perm3{0, 2, 1}}) {
            UState up = us;
            for (int i = 0; i < 3; ++i) up.u[i] = us.u[p[i]];
            REQUIRE(h_u(up, g) == Catch::Approx(h_u(us, g)).margin(1e-12));
        }
    }

    SECTION("flow equivariance at u > 0") {
        const VState v0{cplx(1.1, 0.3), cplx(-0.2, 0.5), 0.21};
        const Perm3 cyc{1, 2, 0};
        const ReducedRun a = integrate_reduced(s3_act(cyc, v0), g, 0.0, 3.0);
        const ReducedRun b = integrate_reduced(v0, g, 0.0, 3.0);
        const VState vb = s3_act(cyc, b.state_at_sample(b.sol.states.size() - 1));
        const VState va = a.state_at_sample(a.sol.states.size() - 1);
        REQUIRE(std::abs(va.v1 - vb.v1) < 1e-9);
        REQUIRE(std::abs(va.v2 - vb.v2) < 1e-9);
    }

    SECTION("non-permutations are rejected") {
        REQUIRE_THROWS_AS(s3_act({0, 0, 2}, rand_vstate()), UsageError);
    }
}

TEST_CASE("boundary parameter is frozen", "[reduced]") {
    const Strengths g = Strengths::paper(1.0, 3);
    const VState v0 = rand_vstate(0.17);
    const ReducedRun run = integrate_reduced(v0, g, 0.0, 2.0);
    REQUIRE(run.u == 0.17);
    for (std::size_t k = 0; k < run.sol.states.size(); ++k)
        REQUIRE(run.state_at_sample(k).u == 0.17);
}

TEST_CASE("reduced flow matches the ambient flow", "[reduced]") {
    // Poisson-quotient property: evolve upstairs, project down, compare.
    const Strengths g = Strengths::paper(1.0, 3);
    const FullState s0 = rand_state4();
    const UState us0 = project(s0, g);
    const VState v0 = to_v(us0);
    const double T = 5.0;
    const Trajectory amb = simulate(s0, g, 0.0, T);
    const ReducedRun red = integrate_reduced(v0, g, 0.0, T);
    for (std::size_t k = 0; k < amb.times.size(); ++k) {
        const double t = amb.times[k];
        // dense sample of the reduced run at the ambient's step time
        std::size_t lo = 0, hi = red.sol.steps.size() - 1;
        while (lo < hi) {
            const std::size_t mid = (lo + hi) / 2;
            if (red.sol.steps[mid].t_end() < t)
                lo = mid + 1;
            else
                hi = mid;
        }
        const auto y = red.sol.steps.empty() ? red.sol.states[0]
                                             : red.sol.steps[lo].eval(t);
        const VState expect{cplx(y[0], y[1]), cplx(y[2], y[3]), red.u};
        const VState got = to_v(project(amb.states[k], g));
        REQUIRE(std::abs(got.v1 - expect.v1) < 1e-6);
        REQUIRE(std::abs(got.v2 - expect.v2) < 1e-6);
    }
}

TEST_CASE("energy level grid", "[reduced]") {
    const Strengths g = Strengths::paper(1.0, 3);

    SECTION("preconditions") {
        REQUIRE_THROWS_AS(energy_grid(-0.5, -1, 1, -1, 1, 41, g), UsageError);
    }

    const ReducedEnergyGrid grid = energy_grid(0.5, -1.3, 1.3, -1.3, 1.3, 161, g);

    SECTION("the equilateral point is a regular cell") {
        const int c = 80; // v = 0
        REQUIRE_FALSE(grid.flagged(c, c));
        REQUIRE(std::isfinite(grid.at(c, c)));
    }

    SECTION("six flagged collision neighbourhoods at v^3 = +-1") {
        std::vector<int> label(grid.values.size(), 0);
        int clusters = 0;
        const int n = grid.resolution;
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix) {
                if (!grid.flagged(iy, ix) || label[iy * n + ix]) continue;
                ++clusters;
                std::vector<std::pair<int, int>> stack{{iy, ix}};
                label[iy * n + ix] = clusters;
                while (!stack.empty()) {
                    const auto [y, x] = stack.back();
                    stack.pop_back();
                    const int off[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
                    for (const auto& d : off) {
                        const int ny = y + d[0], nx = x + d[1];
                        if (ny < 0 || nx < 0 || ny >= n || nx >= n) continue;
                        if (grid.flagged(ny, nx) && !label[ny * n + nx]) {
                            label[ny * n + nx] = clusters;
                            stack.emplace_back(ny, nx);
                        }
                    }
                }
            }
        REQUIRE(clusters == 6);
        // every flagged cell is near a sixth root of unity
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix)
                if (grid.flagged(iy, ix)) {
                    const cplx v(grid.re_at(ix), grid.im_at(iy));
                    const cplx v3 = v * v * v;
                    REQUIRE(std::min(std::abs(v3 - 1.0), std::abs(v3 + 1.0)) < 0.05);
                }
    }

    SECTION("center plus three saddles related by a third turn") {
        const int n = grid.resolution;
        const int c = 80;
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx)
                if (dy || dx) REQUIRE(grid.at(c + dy, c + dx) < grid.at(c, c));

        // discrete saddles: four sign alternations around the 8-ring
        std::vector<cplx> saddles;
        for (int iy = 1; iy < n - 1; ++iy)
            for (int ix = 1; ix < n - 1; ++ix) {
                if (grid.flagged(iy, ix)) continue;
                const int ring[8][2] = {{-1, -1}, {-1, 0}, {-1, 1}, {0, 1},
                                        {1, 1},   {1, 0},  {1, -1}, {0, -1}};
                bool ok = true;
                int changes = 0;
                double prev = grid.at(iy + ring[7][0], ix + ring[7][1]) - grid.at(iy, ix);
                for (const auto& d : ring) {
                    if (grid.flagged(iy + d[0], ix + d[1])) {
                        ok = false;
                        break;
                    }
                    const double cur = grid.at(iy + d[0], ix + d[1]) - grid.at(iy, ix);
                    if ((cur > 0) != (prev > 0)) ++changes;
                    prev = cur;
                }
                if (ok && changes >= 4) {
                    const cplx v(grid.re_at(ix), grid.im_at(iy));
                    if (std::abs(v) > 0.2 && std::abs(v) < 1.0) saddles.push_back(v);
                }
            }
        // cluster saddle cells by angle thirds
        REQUIRE(!saddles.empty());
        const double r1 = y_radius_root();
        int sector[3] = {0, 0, 0};
        for (const cplx& v : saddles) {
            REQUIRE(std::abs(v) == Catch::Approx(r1).margin(0.03));
            double ang = std::arg(v);
            if (ang < -pi / 3.0) sector[0]++;
            else if (ang < pi / 3.0) sector[1]++;
            else sector[2]++;
        }
        REQUIRE(sector[0] > 0);
        REQUIRE(sector[1] > 0);
        REQUIRE(sector[2] > 0);
    }
}
