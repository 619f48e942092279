// Batch front end: simulation, reduction, reconstruction, equilibria,
// Poincare sections, level-set grids, and the crawl experiment.  All outputs
// are plot-ready CSV/JSON for external tooling.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "vortex/core.hpp"
#include "vortex/equilibria.hpp"
#include "vortex/io.hpp"
#include "vortex/poincare.hpp"
#include "vortex/reduced.hpp"
#include "vortex/resolution.hpp"
#include "vortex/slice.hpp"

namespace {

int log_level() {
    static const int level = [] {
        const char* env = std::getenv("VORTEX_LOG");
        if (!env) return 0;
        const std::string s(env);
        if (s == "debug") return 2;
        if (s == "info") return 1;
        return 0;
    }();
    return level;
}

void log_info(const std::string& msg) {
    if (log_level() >= 1) std::cerr << "[info] " << msg << "\n";
}

void log_debug(const std::string& msg) {
    if (log_level() >= 2) std::cerr << "[debug] " << msg << "\n";
}

void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty())
        std::cout << text;
    else
        vortex::io::write_text(out_path, text);
}

vortex::ReqSpec make_family(const std::string& family, double alpha, double gamma) {
    if (family == "O") return vortex::make_O(alpha, gamma);
    if (family == "Y") return vortex::make_Y(alpha, gamma);
    throw vortex::UsageError("family must be O or Y, got '" + family + "'");
}

} // namespace

int main(int argc, char** argv) {
    using namespace vortex;

    CLI::App app{"planar 4-vortex dynamics, reduction, and experiments"};
    app.require_subcommand(1);

    std::string config_path, out_path, in_path, family = "O";
    double t_end = 10.0, alpha = 1.0, gamma = 1.0, u_param = 0.0, eps = 1e-3;
    double mu = 0.5, extent = 1.3, offset = -1.0;
    int iters = 100, grid_n = 161;

    auto* sim = app.add_subcommand("simulate", "integrate the full system to CSV");
    sim->add_option("--config", config_path)->required();
    sim->add_option("--t-end", t_end)->required();
    sim->add_option("--out", out_path)->required();

    auto* red = app.add_subcommand("reduce", "project and integrate the reduced system");
    red->add_option("--config", config_path)->required();
    red->add_option("--t-end", t_end)->required();
    red->add_option("--out", out_path)->required();

    auto* rec = app.add_subcommand("reconstruct", "rebuild an ambient trajectory from a reduced CSV");
    rec->add_option("--in", in_path)->required();
    rec->add_option("--out", out_path)->required();

    auto* req = app.add_subcommand("req", "emit a relative equilibrium as JSON");
    req->add_option("--family", family)->required();
    req->add_option("--alpha", alpha)->required();
    req->add_option("--gamma", gamma)->required();
    req->add_option("--out", out_path);

    auto* lin = app.add_subcommand("linearize", "equilibrium JSON plus linearization spectrum");
    lin->add_option("--family", family)->required();
    lin->add_option("--alpha", alpha)->required();
    lin->add_option("--gamma", gamma)->required();
    lin->add_option("--out", out_path);

    auto* poi = app.add_subcommand("poincare", "section of the reduced flow near the equilateral orbit");
    poi->add_option("--alpha", alpha)->required();
    poi->add_option("--u", u_param)->required();
    poi->add_option("--iters", iters)->required();
    poi->add_option("--out", out_path)->required();
    poi->add_option("--gamma", gamma);
    poi->add_option("--offset", offset, "q-offset of the seed from the periodic point");

    auto* lev = app.add_subcommand("levels", "energy level grid of the boundary system");
    lev->add_option("--mu", mu)->required();
    lev->add_option("--out", out_path)->required();
    lev->add_option("--gamma", gamma);
    lev->add_option("--extent", extent);
    lev->add_option("--n", grid_n);

    auto* crw = app.add_subcommand("crawl", "emergent-mass drift experiment");
    crw->add_option("--alpha", alpha)->required();
    crw->add_option("--eps", eps)->required();
    crw->add_option("--out", out_path);
    crw->add_option("--gamma", gamma);
    crw->add_option("--t-end", t_end);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (sim->parsed()) {
            const io::RunConfig cfg = io::load_run_config(config_path);
            log_info("simulate: " + std::to_string(cfg.state.z.size()) + " vortices to t=" + io::fmt(t_end));
            const Trajectory traj =
                simulate(cfg.state, cfg.strengths, 0.0, t_end, cfg.integrator);
            log_debug("accepted steps: " + std::to_string(traj.times.size() - 1));
            emit(out_path,
                 io::trajectory_csv(traj, "config=" + cfg.hash +
                                              " gamma=" + io::fmt(cfg.strengths.gamma) +
                                              " n=" + std::to_string(cfg.strengths.n_sat) +
                                              " t_end=" + io::fmt(t_end) +
                                              " seed=" + std::to_string(cfg.seed)));
        } else if (red->parsed()) {
            const io::RunConfig cfg = io::load_run_config(config_path);
            if (cfg.strengths.n_sat != 3)
                throw UsageError("reduce: the canonicalized reduced flow needs n_sat = 3");
            const UState us = project(cfg.state, cfg.strengths);
            const VState v0 = to_v(us);
            log_info("reduce: u = " + io::fmt(v0.u));
            const ReducedRun run =
                integrate_reduced(v0, cfg.strengths, 0.0, t_end, cfg.integrator);
            emit(out_path,
                 io::reduced_csv(run, cfg.strengths,
                                 "config=" + cfg.hash +
                                     " gamma=" + io::fmt(cfg.strengths.gamma) +
                                     " u=" + io::fmt(v0.u) + " t_end=" + io::fmt(t_end) +
                                     " seed=" + std::to_string(cfg.seed)));
        } else if (rec->parsed()) {
            const io::ReducedCsv data = io::read_reduced_csv(in_path);
            const Strengths g = Strengths::paper(data.gamma, 3);
            log_info("reconstruct: replaying reduced run, u = " + io::fmt(data.u));
            const ReducedRun run = integrate_reduced(data.states.front(), g,
                                                     data.times.front(),
                                                     data.times.back(), {});
            const Trajectory traj = reconstruct(run, g);
            emit(out_path,
                 io::trajectory_csv(traj, "gamma=" + io::fmt(data.gamma) +
                                              " u=" + io::fmt(data.u) +
                                              " t_end=" + io::fmt(data.times.back())));
        } else if (req->parsed()) {
            const ReqSpec spec = make_family(family, alpha, gamma);
            emit(out_path, io::req_to_json(spec).dump(2) + "\n");
        } else if (lin->parsed()) {
            const ReqSpec spec = make_family(family, alpha, gamma);
            const Strengths g = Strengths::paper(gamma, 3);
            const Linearization l = linearize(spec.z, g, spec.generator());
            nlohmann::json j = io::req_to_json(spec);
            j["eigenvalues"] = nlohmann::json::array();
            for (const cplx& ev : l.eigenvalues)
                j["eigenvalues"].push_back(io::complex_json(ev));
            emit(out_path, j.dump(2) + "\n");
        } else if (poi->parsed()) {
            const auto [qf, pf] = find_section_fixed_point(alpha, u_param, gamma);
            log_info("poincare: periodic point at q=" + io::fmt(qf) + " p=" + io::fmt(pf));
            const double dq = offset >= 0.0 ? offset : 0.01 * alpha;
            const VState v0 =
                from_slice(SliceState{0.0, 0.0, qf + dq, pf}, alpha, u_param);
            const SectionData sd = section_map(v0, alpha, gamma, iters);
            emit(out_path,
                 io::section_csv(sd, "alpha_e=" + io::fmt(alpha) + " u=" + io::fmt(u_param) +
                                         " gamma=" + io::fmt(gamma) +
                                         " iters=" + std::to_string(iters) +
                                         " fixed_q=" + io::fmt(qf) +
                                         " fixed_p=" + io::fmt(pf)));
        } else if (lev->parsed()) {
            const Strengths g = Strengths::paper(gamma, 3);
            const ReducedEnergyGrid grid =
                energy_grid(mu, -extent, extent, -extent, extent, grid_n, g);
            emit(out_path, io::grid_csv(grid, "mu=" + io::fmt(mu) + " gamma=" + io::fmt(gamma) +
                                                  " extent=" + io::fmt(extent) +
                                                  " n=" + std::to_string(grid_n)));
        } else if (crw->parsed()) {
            const CrawlResult res = crawl_experiment(alpha, gamma, eps, t_end);
            nlohmann::json j;
            j["alpha_e"] = alpha;
            j["gamma"] = gamma;
            j["eps"] = eps;
            j["t_end"] = t_end;
            j["m_e"] = 8.0 * pi * alpha * alpha / 3.0;
            j["drift"] = io::complex_json(res.drift);
            j["predicted"] = io::complex_json(res.predicted);
            const double scale = std::abs(res.predicted);
            j["rel_error"] =
                scale > 0.0 ? std::abs(res.drift - res.predicted) / scale : 0.0;
            emit(out_path, j.dump(2) + "\n");
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
