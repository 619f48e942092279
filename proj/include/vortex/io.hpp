#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "vortex/core.hpp"
#include "vortex/equilibria.hpp"
#include "vortex/errors.hpp"
#include "vortex/poincare.hpp"
#include "vortex/reduced.hpp"

// File formats: JSON run configuration, CSV trajectory/section/grid exports,
// JSON equilibrium records.  Complex values always travel as separate re/im
// fields; doubles are printed with "%.17g" so identical runs produce
// byte-identical files.

namespace vortex::io {

inline constexpr const char* version = "0.1.0";

inline std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::string hash_hex(const std::string& bytes) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes)));
    return buf;
}

struct RunConfig {
    Strengths strengths = Strengths::paper(1.0, 3);
    FullState state;
    IntegratorConfig integrator;
    long seed = 0;
    std::string raw;             // config file bytes, for the hash
    std::string hash;
};

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline RunConfig load_run_config(const std::string& path) {
    RunConfig cfg;
    cfg.raw = read_file(path);
    cfg.hash = hash_hex(cfg.raw);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(cfg.raw);
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("config parse error: ") + e.what());
    }
    try {
        const double gamma = j.at("gamma").get<double>();
        const int n_sat = j.value("n_sat", 3);
        cfg.strengths = Strengths::paper(gamma, n_sat);

        if (j.contains("preset")) {
            const auto& p = j.at("preset");
            const std::string family = p.at("family").get<std::string>();
            const double alpha = p.at("alpha").get<double>();
            if (n_sat != 3)
                throw UsageError("config: presets require n_sat = 3");
            if (family == "O")
                cfg.state = make_O(alpha, gamma).z;
            else if (family == "Y")
                cfg.state = make_Y(alpha, gamma).z;
            else
                throw UsageError("config: unknown preset family " + family);
        } else {
            const auto& pos = j.at("positions");
            for (const auto& zz : pos)
                cfg.state.z.emplace_back(zz.at(0).get<double>(),
                                         zz.at(1).get<double>());
            if (static_cast<int>(cfg.state.z.size()) != n_sat + 1)
                throw UsageError("config: positions must list n_sat + 1 vortices");
        }
        for (std::size_t m = 0; m < cfg.state.z.size(); ++m)
            for (std::size_t n = m + 1; n < cfg.state.z.size(); ++n)
                if (cfg.state.z[m] == cfg.state.z[n])
                    throw UsageError("config: positions must be pairwise distinct");

        if (j.contains("integrator")) {
            const auto& it = j.at("integrator");
            cfg.integrator.rel_tol = it.value("rel_tol", cfg.integrator.rel_tol);
            cfg.integrator.abs_tol = it.value("abs_tol", cfg.integrator.abs_tol);
            cfg.integrator.max_step = it.value("max_step", cfg.integrator.max_step);
            cfg.integrator.collision_guard =
                it.value("collision_guard", cfg.integrator.collision_guard);
        }
        cfg.seed = j.value("seed", 0L);
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("config field error: ") + e.what());
    }
    return cfg;
}

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write file: " + path);
    out << text;
}

inline std::string meta_line(const std::string& params) {
    return std::string("# vortex ") + version + " " + params + "\n";
}

inline std::string trajectory_csv(const Trajectory& traj, const std::string& meta) {
    std::ostringstream out;
    out << meta_line(meta);
    const std::size_t nv = traj.states.empty() ? 0 : traj.states[0].z.size();
    out << "t";
    for (std::size_t n = 0; n < nv; ++n) out << ",x" << n << ",y" << n;
    out << ",H,mu,nu_re,nu_im\n";
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        out << fmt(traj.times[k]);
        for (const cplx& z : traj.states[k].z)
            out << "," << fmt(z.real()) << "," << fmt(z.imag());
        out << "," << fmt(traj.H[k]) << "," << fmt(traj.mu[k]) << ","
            << fmt(traj.nu[k].real()) << "," << fmt(traj.nu[k].imag()) << "\n";
    }
    return out.str();
}

inline std::string reduced_csv(const ReducedRun& run, const Strengths& g,
                               const std::string& meta) {
    std::ostringstream out;
    out << meta_line(meta);
    out << "t,v1_re,v1_im,v2_re,v2_im,H,mu_so2\n";
    for (std::size_t k = 0; k < run.sol.times.size(); ++k) {
        const VState vs = run.state_at_sample(k);
        out << fmt(run.sol.times[k]) << "," << fmt(vs.v1.real()) << ","
            << fmt(vs.v1.imag()) << "," << fmt(vs.v2.real()) << ","
            << fmt(vs.v2.imag()) << "," << fmt(h_v(vs, g)) << ","
            << fmt(so2_momentum(vs, g)) << "\n";
    }
    return out.str();
}

struct ReducedCsv {
    std::vector<double> times;
    std::vector<VState> states;
    double gamma = 1.0;
    double u = 0.0;
};

inline ReducedCsv read_reduced_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read file: " + path);
    ReducedCsv data;
    std::string line;
    bool have_meta = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream ss(line);
            std::string tok;
            while (ss >> tok) {
                if (tok.rfind("gamma=", 0) == 0)
                    data.gamma = std::stod(tok.substr(6));
                if (tok.rfind("u=", 0) == 0) data.u = std::stod(tok.substr(2));
            }
            have_meta = true;
            continue;
        }
        if (line.rfind("t,", 0) == 0) continue; // header
        std::istringstream ss(line);
        std::string cell;
        std::vector<double> row;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (row.size() < 5) throw UsageError("reduced csv: malformed row");
        data.times.push_back(row[0]);
        data.states.push_back(
            VState{cplx(row[1], row[2]), cplx(row[3], row[4]), data.u});
    }
    if (!have_meta || data.times.empty())
        throw UsageError("reduced csv: missing metadata or data rows");
    for (auto& vs : data.states) vs.u = data.u;
    return data;
}

inline std::string section_csv(const SectionData& sd, const std::string& meta) {
    std::ostringstream out;
    out << meta_line(meta);
    out << "iter,q,p,H\n";
    for (std::size_t k = 0; k < sd.points.size(); ++k)
        out << (k + 1) << "," << fmt(sd.points[k].first) << ","
            << fmt(sd.points[k].second) << "," << fmt(sd.energies[k]) << "\n";
    return out.str();
}

inline std::string grid_csv(const ReducedEnergyGrid& grid, const std::string& meta) {
    std::ostringstream out;
    out << meta_line(meta);
    out << "re_v,im_v,H\n";
    for (int iy = 0; iy < grid.resolution; ++iy)
        for (int ix = 0; ix < grid.resolution; ++ix) {
            out << fmt(grid.re_at(ix)) << "," << fmt(grid.im_at(iy)) << ",";
            if (grid.flagged(iy, ix))
                out << "sing\n";
            else
                out << fmt(grid.at(iy, ix)) << "\n";
        }
    return out.str();
}

inline nlohmann::json complex_json(cplx z) {
    return nlohmann::json::array({z.real(), z.imag()});
}

inline nlohmann::json req_to_json(const ReqSpec& spec) {
    nlohmann::json j;
    j["family"] = spec.family == ReqFamily::O ? "O" : "Y";
    j["alpha_e"] = spec.alpha_e;
    j["gamma"] = spec.gamma;
    j["u_e"] = spec.u_e;
    j["v_e"] = complex_json(spec.v_e);
    j["mu_e"] = spec.mu_e;
    j["center"] = complex_json(spec.center);
    j["z"] = nlohmann::json::array();
    for (const cplx& z : spec.z.z) j["z"].push_back(complex_json(z));
    j["v"] = {{"v1", complex_json(spec.v.v1)},
              {"v2", complex_json(spec.v.v2)},
              {"u", spec.v.u}};
    return j;
}

} // namespace vortex::io
