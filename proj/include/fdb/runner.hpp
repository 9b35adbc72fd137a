#pragma once

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fdb/energy.hpp"
#include "fdb/random_field.hpp"
#include "fdb/runconfig.hpp"

namespace fdb {

using Json = nlohmann::ordered_json;

// ---- snapshot format -----------------------------------------------------------
// 32-byte header: magic "FDBOUSS1", u32 dim, u32 n1, u32 n2, u32 reserved,
// f64 t; then the fields back to back as row-major little-endian f64.
// Field count is implied by the payload size (1 = whitham, 2 = 1D, 3 = 2D).

constexpr char snapshot_magic[9] = "FDBOUSS1";

struct Snapshot {
    int dim = 1;
    std::size_t n1 = 0, n2 = 1;
    double t = 0.0;
    std::vector<std::vector<double>> fields;
};

inline void write_snapshot(const std::string& path, const Snapshot& s) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open snapshot for writing: " + path);
    out.write(snapshot_magic, 8);
    std::uint32_t hdr[4] = {static_cast<std::uint32_t>(s.dim), static_cast<std::uint32_t>(s.n1),
                            static_cast<std::uint32_t>(s.n2), 0u};
    out.write(reinterpret_cast<const char*>(hdr), 16);
    out.write(reinterpret_cast<const char*>(&s.t), 8);
    for (const auto& f : s.fields)
        out.write(reinterpret_cast<const char*>(f.data()),
                  static_cast<std::streamsize>(f.size() * sizeof(double)));
}

inline Snapshot read_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (!in) throw std::runtime_error("cannot open snapshot: " + path);
    const std::streamsize size = in.tellg();
    in.seekg(0);
    char magic[8];
    in.read(magic, 8);
    if (std::memcmp(magic, snapshot_magic, 8) != 0)
        throw std::runtime_error("bad snapshot magic in " + path);
    std::uint32_t hdr[4];
    in.read(reinterpret_cast<char*>(hdr), 16);
    Snapshot s;
    s.dim = static_cast<int>(hdr[0]);
    s.n1 = hdr[1];
    s.n2 = hdr[2];
    in.read(reinterpret_cast<char*>(&s.t), 8);
    const std::size_t total = s.n1 * std::max<std::size_t>(s.n2, 1);
    const std::size_t payload = static_cast<std::size_t>(size) - 32;
    if (total == 0 || payload % (8 * total) != 0)
        throw std::runtime_error("snapshot payload size inconsistent in " + path);
    const std::size_t nfields = payload / (8 * total);
    s.fields.assign(nfields, std::vector<double>(total));
    for (auto& f : s.fields)
        in.read(reinterpret_cast<char*>(f.data()),
                static_cast<std::streamsize>(total * sizeof(double)));
    return s;
}

// ---- run artifacts -------------------------------------------------------------

struct Verdict {
    bool pass = true;
    std::string detail;
};

struct DiagnosticsRow {
    double t = 0.0;
    std::map<std::string, double> cols;  // columns beyond t, keyed by header name
};

struct RunResult {
    RunConfig config;
    std::vector<std::string> columns;       // CSV column order (without t)
    std::vector<DiagnosticsRow> rows;
    std::map<std::string, Verdict> verdicts;  // ordered by name
    ExistenceEstimate existence;
    double h0_effective = 0.0;
    double sup_ratio = 0.0;
    double sup_ratio_naive = 0.0;
    std::optional<double> empirical_T_star;   // blowup time, if any
    std::optional<double> period_return_error;
    std::string directory;
    bool all_pass() const {
        for (const auto& [k, v] : verdicts)
            if (!v.pass) return false;
        return true;
    }
};

namespace detail {

inline std::string snap_name(std::size_t step) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "snap_%06zu.bin", step);
    return buf;
}

inline void write_csv(const std::string& path, const std::vector<std::string>& columns,
                      const std::vector<DiagnosticsRow>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "t";
    for (const auto& c : columns) out << "," << c;
    out << "\n";
    for (const auto& r : rows) {
        out << fmt17(r.t);
        for (const auto& c : columns) out << "," << fmt17(r.cols.at(c));
        out << "\n";
    }
}

struct InitialData1D {
    State1D state;
};

inline State1D build_initial_1d(const RunConfig& c, GridPtr g) {
    switch (c.family) {
        case InitFamily::Rest:
            return rest_state(g);
        case InitFamily::Gaussian:
            return gaussian_state(g, c.amplitude, c.effective_sigma());
        case InitFamily::PlaneWave:
            return planewave_state(g, c.amplitude, c.mode, std::max(c.beta, 1e-300));
        case InitFamily::Random: {
            RandomFieldSpec se;
            se.seed = c.seed;
            se.band = c.band;
            se.decay = c.decay;
            se.amplitude = c.amplitude;
            RandomFieldSpec su = se;
            su.seed = c.seed ^ 0x9e3779b97f4a7c15ull;
            return State1D(random_field(g, se), random_field(g, su));
        }
        case InitFamily::File: {
            Snapshot s = read_snapshot(c.init_file);
            if (s.dim != 1 || s.n1 != g->n[0] || s.fields.size() < 2)
                throw ConfigError({"init.file does not hold a 1D two-field snapshot on grid.n"});
            return State1D(RealField(g, s.fields[0]), RealField(g, s.fields[1]), s.t);
        }
    }
    return rest_state(g);
}

inline State2D build_initial_2d(const RunConfig& c, GridPtr g) {
    switch (c.family) {
        case InitFamily::Rest:
            return rest_state_2d(g);
        case InitFamily::Gaussian:
            return gaussian_state_2d(g, c.amplitude, c.effective_sigma());
        case InitFamily::PlaneWave:
            return planewave_state_2d(g, c.amplitude, c.mode, c.beta);
        case InitFamily::Random: {
            RandomFieldSpec se;
            se.seed = c.seed;
            se.band = c.band;
            se.decay = c.decay;
            se.amplitude = c.amplitude;
            RandomFieldSpec sp = se;
            sp.seed = c.seed ^ 0x9e3779b97f4a7c15ull;
            auto phi = random_field(g, sp);
            State2D st(random_field(g, se), derivative(phi, 0), derivative(phi, 1));
            return st;
        }
        case InitFamily::File: {
            Snapshot s = read_snapshot(c.init_file);
            if (s.dim != 2 || s.n1 != g->n[0] || s.n2 != g->n[1] || s.fields.size() < 3)
                throw ConfigError({"init.file does not hold a 2D three-field snapshot"});
            return State2D(RealField(g, s.fields[0]), RealField(g, s.fields[1]),
                           RealField(g, s.fields[2]), s.t);
        }
    }
    return rest_state_2d(g);
}

inline RealField build_initial_whitham(const RunConfig& c, GridPtr g) {
    switch (c.family) {
        case InitFamily::Rest:
            return RealField(g);
        case InitFamily::Gaussian:
            return gaussian_state(g, c.amplitude, c.effective_sigma()).eta;
        case InitFamily::PlaneWave: {
            const double k = 2.0 * pi * static_cast<double>(c.mode) / c.L;
            const double a = c.amplitude;
            return sample(g, [=](double x) { return a * std::cos(k * x); });
        }
        case InitFamily::Random: {
            RandomFieldSpec spec;
            spec.seed = c.seed;
            spec.band = c.band;
            spec.decay = c.decay;
            spec.amplitude = c.amplitude;
            return random_field(g, spec);
        }
        case InitFamily::File: {
            Snapshot s = read_snapshot(c.init_file);
            if (s.dim != 1 || s.n1 != g->n[0] || s.fields.empty())
                throw ConfigError({"init.file does not hold a 1D snapshot on grid.n"});
            return RealField(g, s.fields.back());  // u is the last field
        }
    }
    return RealField(g);
}

inline double auto_h0(double min_depth0) {
    return std::min(min_depth0 * (1.0 - 1e-12), 1.0 - 1e-9);
}

}  // namespace detail

// Executes one configured run: time loop with diagnostics sampling, monitor
// verdicts, and the metadata/CSV/snapshot artifact set.  Identical config and
// seed reproduce the outputs byte for byte.
inline RunResult run(const RunConfig& cfg) {
    auto violations = validate(cfg);
    if (!violations.empty()) throw ConfigError(violations);

    namespace fs = std::filesystem;
    fs::create_directories(cfg.output_dir);

    RunResult res;
    res.config = cfg;
    res.directory = cfg.output_dir;

    IntegratorConfig icfg;
    icfg.dt = cfg.dt;
    icfg.scheme = cfg.scheme;
    icfg.dealias = cfg.dealias;
    icfg.t_end = cfg.t_end;
    icfg.output_stride = cfg.output_stride;

    const double s_diag = cfg.effective_diag_s();
    const double blowup_norm_cap = 1e6;

    double t_end = cfg.t_end;
    std::optional<State1D> ref_state_1d;  // for period-return validation

    // --- model-specific driver lambdas fill rows/snapshots ---
    std::vector<double> tseq, Eseq, Enaiveseq;
    std::vector<std::pair<double, double>> depth_series;
    double curl_max_rel = 0.0;

    auto record_blowup = [&](double t) {
        res.empirical_T_star = t;
        res.verdicts["completed"] = {false, "blowup at t=" + detail::fmt17(t)};
    };

    if (cfg.model == ModelKind::Boussinesq1D) {
        auto g = make_grid(cfg.n, cfg.L);
        Boussinesq1D model(g, cfg.beta, cfg.dealias, !cfg.linearized);
        check_stability(icfg, *g, cfg.beta);
        State1D state = detail::build_initial_1d(cfg, g);

        const double min_depth0 = 1.0 + field_min(state.eta);
        res.h0_effective = cfg.h0 != 0.0 ? cfg.h0 : detail::auto_h0(min_depth0);
        if (cfg.monitors && min_depth0 < res.h0_effective)
            throw ConfigError({"initial data violates the non-cavitation floor: min(1+eta0) = " +
                               detail::fmt17(min_depth0)});
        double eta_norm = sobolev_norm(state.eta, s_diag);
        double u_norm = sobolev_norm(state.u, s_diag + 0.5);
        res.existence = (res.h0_effective > 0.0 && res.h0_effective < 1.0)
                            ? existence_time(eta_norm, u_norm, res.h0_effective, cfg.C1, cfg.C2)
                            : ExistenceEstimate{};

        if (cfg.period_return && cfg.family == InitFamily::PlaneWave) {
            const double k = 2.0 * pi * static_cast<double>(cfg.mode) / cfg.L;
            const double omega = k * eval_W(k, cfg.beta);
            t_end = 2.0 * pi / omega;
            icfg.dt = t_end / std::ceil(t_end / cfg.dt);
            ref_state_1d = state;
        }

        res.columns = {"Hs_eta", "Hs12_u", "E_s", "E_naive", "cubic", "min_depth",
                       "mass", "momentum", "hamiltonian", "ratio"};
        const std::size_t nsteps = static_cast<std::size_t>(std::llround(t_end / icfg.dt));
        res.verdicts["completed"] = {true, "reached t=" + detail::fmt17(t_end)};
        try {
            for (std::size_t step = 0; step <= nsteps; ++step) {
                if (step % cfg.output_stride == 0 || step == nsteps) {
                    auto er = modified_energy_1d(state, s_diag);
                    if (!std::isfinite(er.Hs_eta) || !std::isfinite(er.Hs12_u) ||
                        std::max(er.Hs_eta, er.Hs12_u) > blowup_norm_cap)
                        throw BlowupError(state.t);
                    DiagnosticsRow row;
                    row.t = state.t;
                    row.cols["Hs_eta"] = er.Hs_eta;
                    row.cols["Hs12_u"] = er.Hs12_u;
                    row.cols["E_s"] = er.E_s;
                    row.cols["E_naive"] = naive_energy_1d(state, s_diag);
                    row.cols["cubic"] = er.cubic;
                    row.cols["min_depth"] = er.min_depth;
                    row.cols["mass"] = model.mass(state);
                    row.cols["momentum"] = model.momentum(state);
                    row.cols["hamiltonian"] = model.hamiltonian(state);
                    row.cols["ratio"] = 0.0;
                    res.rows.push_back(std::move(row));
                    tseq.push_back(state.t);
                    Eseq.push_back(er.E_s);
                    Enaiveseq.push_back(res.rows.back().cols["E_naive"]);
                    depth_series.emplace_back(state.t, er.min_depth);
                    if (cfg.monitors && er.min_depth < 0.5 * res.h0_effective) {
                        res.verdicts["completed"] = {
                            false, "aborted by non-cavitation enforcement at t=" +
                                       detail::fmt17(state.t)};
                        Snapshot snap;
                        snap.dim = 1;
                        snap.n1 = g->n[0];
                        snap.n2 = 1;
                        snap.t = state.t;
                        snap.fields = {state.eta.v, state.u.v};
                        write_snapshot(cfg.output_dir + "/" + detail::snap_name(step), snap);
                        break;
                    }
                    Snapshot snap;
                    snap.dim = 1;
                    snap.n1 = g->n[0];
                    snap.n2 = 1;
                    snap.t = state.t;
                    snap.fields = {state.eta.v, state.u.v};
                    write_snapshot(cfg.output_dir + "/" + detail::snap_name(step), snap);
                }
                if (step < nsteps) state = model.step(state, icfg);
            }
            if (ref_state_1d) {
                double num = 0.0, den = 0.0;
                for (std::size_t i = 0; i < state.eta.size(); ++i) {
                    num += std::pow(state.eta.v[i] - ref_state_1d->eta.v[i], 2) +
                           std::pow(state.u.v[i] - ref_state_1d->u.v[i], 2);
                    den += std::pow(ref_state_1d->eta.v[i], 2) + std::pow(ref_state_1d->u.v[i], 2);
                }
                res.period_return_error = std::sqrt(num / std::max(den, 1e-300));
                res.verdicts["period_return"] = {*res.period_return_error <= 1e-8,
                                                 "relative L2 error " +
                                                     detail::fmt17(*res.period_return_error)};
            }
        } catch (const BlowupError& e) {
            record_blowup(e.t);
        }
    } else if (cfg.model == ModelKind::Boussinesq2D) {
        auto g = make_grid(cfg.n, cfg.effective_n2(), cfg.L, cfg.effective_L2());
        Boussinesq2D model(g, cfg.beta, cfg.dealias, !cfg.linearized);
        check_stability(icfg, *g, cfg.beta);
        State2D state = detail::build_initial_2d(cfg, g);
        {
            auto [p1, p2] = project_curl_free(state.u1, state.u2);
            state.u1 = std::move(p1);
            state.u2 = std::move(p2);
        }

        const double min_depth0 = 1.0 + field_min(state.eta);
        res.h0_effective = cfg.h0 != 0.0 ? cfg.h0 : detail::auto_h0(min_depth0);
        if (cfg.monitors && min_depth0 < res.h0_effective)
            throw ConfigError({"initial data violates the non-cavitation floor"});
        double eta_norm = sobolev_norm(state.eta, s_diag);
        double nu1 = sobolev_norm(state.u1, s_diag + 0.5);
        double nu2 = sobolev_norm(state.u2, s_diag + 0.5);
        res.existence = (res.h0_effective > 0.0 && res.h0_effective < 1.0)
                            ? existence_time(eta_norm, std::sqrt(nu1 * nu1 + nu2 * nu2),
                                             res.h0_effective, cfg.C1, cfg.C2)
                            : ExistenceEstimate{};

        res.columns = {"Hs_eta", "Hs12_u", "E_s", "E_naive", "cubic", "min_depth",
                       "mass", "curl_norm", "ratio"};
        const std::size_t nsteps = static_cast<std::size_t>(std::llround(t_end / icfg.dt));
        res.verdicts["completed"] = {true, "reached t=" + detail::fmt17(t_end)};
        try {
            for (std::size_t step = 0; step <= nsteps; ++step) {
                if (step % cfg.output_stride == 0 || step == nsteps) {
                    auto er = modified_energy_2d(state, s_diag);
                    if (!std::isfinite(er.Hs_eta) || !std::isfinite(er.Hs12_u) ||
                        std::max(er.Hs_eta, er.Hs12_u) > blowup_norm_cap)
                        throw BlowupError(state.t);
                    double curl = curl_l2norm(state.u1, state.u2);
                    double uh1 = sobolev_norm(state.u1, 1.0) + sobolev_norm(state.u2, 1.0);
                    double curl_rel = curl / std::max(uh1, 1e-300);
                    if (uh1 > 1e-12) curl_max_rel = std::max(curl_max_rel, curl_rel);
                    DiagnosticsRow row;
                    row.t = state.t;
                    row.cols["Hs_eta"] = er.Hs_eta;
                    row.cols["Hs12_u"] = er.Hs12_u;
                    row.cols["E_s"] = er.E_s;
                    double a = er.Hs_eta, b = er.Hs12_u;
                    row.cols["E_naive"] = 0.5 * (a * a + b * b);
                    row.cols["cubic"] = er.cubic;
                    row.cols["min_depth"] = er.min_depth;
                    row.cols["mass"] = model.mass(state);
                    row.cols["curl_norm"] = curl;
                    row.cols["ratio"] = 0.0;
                    res.rows.push_back(std::move(row));
                    tseq.push_back(state.t);
                    Eseq.push_back(er.E_s);
                    Enaiveseq.push_back(res.rows.back().cols["E_naive"]);
                    depth_series.emplace_back(state.t, er.min_depth);
                    if (cfg.monitors && er.min_depth < 0.5 * res.h0_effective) {
                        res.verdicts["completed"] = {
                            false, "aborted by non-cavitation enforcement at t=" +
                                       detail::fmt17(state.t)};
                        Snapshot snap;
                        snap.dim = 2;
                        snap.n1 = g->n[0];
                        snap.n2 = g->n[1];
                        snap.t = state.t;
                        snap.fields = {state.eta.v, state.u1.v, state.u2.v};
                        write_snapshot(cfg.output_dir + "/" + detail::snap_name(step), snap);
                        break;
                    }
                    Snapshot snap;
                    snap.dim = 2;
                    snap.n1 = g->n[0];
                    snap.n2 = g->n[1];
                    snap.t = state.t;
                    snap.fields = {state.eta.v, state.u1.v, state.u2.v};
                    write_snapshot(cfg.output_dir + "/" + detail::snap_name(step), snap);
                }
                if (step < nsteps) state = model.step(state, icfg);
            }
            res.verdicts["curl_preserved"] = {curl_max_rel <= 1e-8,
                                              "max relative curl " + detail::fmt17(curl_max_rel)};
        } catch (const BlowupError& e) {
            record_blowup(e.t);
        }
    } else {  // Whitham
        auto g = make_grid(cfg.n, cfg.L);
        Whitham1D model(g, cfg.beta, cfg.dealias, !cfg.linearized);
        RealField u = detail::build_initial_whitham(cfg, g);
        res.h0_effective = 0.0;
        res.columns = {"Hs_u", "E_s", "mean_u", "ratio"};
        const double s_w = cfg.s != 0.0 ? cfg.s : 2.6;
        const std::size_t nsteps = static_cast<std::size_t>(std::llround(t_end / icfg.dt));
        res.verdicts["completed"] = {true, "reached t=" + detail::fmt17(t_end)};
        double t = 0.0;
        try {
            for (std::size_t step = 0; step <= nsteps; ++step) {
                t = icfg.dt * static_cast<double>(step);
                if (step % cfg.output_stride == 0 || step == nsteps) {
                    if (!all_finite(u)) throw BlowupError(t);
                    double nu = sobolev_norm(u, s_w);
                    if (!std::isfinite(nu) || nu > blowup_norm_cap) throw BlowupError(t);
                    DiagnosticsRow row;
                    row.t = t;
                    row.cols["Hs_u"] = nu;
                    row.cols["E_s"] = 0.5 * nu * nu;
                    row.cols["mean_u"] = mean(u);
                    row.cols["ratio"] = 0.0;
                    res.rows.push_back(std::move(row));
                    tseq.push_back(t);
                    Eseq.push_back(0.5 * nu * nu);
                    Snapshot snap;
                    snap.dim = 1;
                    snap.n1 = g->n[0];
                    snap.n2 = 1;
                    snap.t = t;
                    snap.fields = {u.v};
                    write_snapshot(cfg.output_dir + "/" + detail::snap_name(step), snap);
                }
                if (step < nsteps) u = model.step(u, icfg);
            }
        } catch (const BlowupError& e) {
            record_blowup(e.t);
        }
    }

    // ---- post-pass: ratio column and monitor verdicts ----
    if (tseq.size() >= 3) {
        auto rep = energy_inequality_monitor(tseq, Eseq);
        res.sup_ratio = rep.sup_ratio;
        for (std::size_t i = 0; i < res.rows.size(); ++i) res.rows[i].cols["ratio"] = rep.ratio[i];
        if (cfg.monitors)
            res.verdicts["energy_ratio_finite"] = {rep.finite,
                                                   "sup ratio " + detail::fmt17(rep.sup_ratio)};
        if (!Enaiveseq.empty()) {
            auto repn = energy_inequality_monitor(tseq, Enaiveseq);
            res.sup_ratio_naive = repn.sup_ratio;
        }
    }
    if (cfg.monitors && cfg.model != ModelKind::Whitham1D && !depth_series.empty()) {
        double t2 = std::min(res.existence.T2, tseq.back());
        auto v = noncavitation_monitor(depth_series, res.h0_effective, t2);
        res.verdicts["noncavitation"] = {v.pass, v.detail};
    }

    // ---- artifacts ----
    detail::write_csv(cfg.output_dir + "/series.csv", res.columns, res.rows);
    Json meta;
    meta["format"] = "fdbouss-run-metadata";
    meta["version"] = 1;
    meta["config"] = canonical_text(cfg);
    meta["columns"] = res.columns;
    meta["samples"] = res.rows.size();
    meta["h0_effective"] = res.h0_effective;
    meta["existence"] = {{"T1", res.existence.T1},
                         {"T2", std::isinf(res.existence.T2) ? -1.0 : res.existence.T2},
                         {"T0", std::isinf(res.existence.T0) ? -1.0 : res.existence.T0},
                         {"C1", res.existence.C1},
                         {"C2", res.existence.C2}};
    meta["sup_ratio"] = res.sup_ratio;
    meta["sup_ratio_naive"] = res.sup_ratio_naive;
    if (res.empirical_T_star) meta["empirical_T_star"] = *res.empirical_T_star;
    if (res.period_return_error) meta["period_return_error"] = *res.period_return_error;
    Json verd;
    for (const auto& [name, v] : res.verdicts)
        verd[name] = {{"pass", v.pass}, {"detail", v.detail}};
    meta["verdicts"] = verd;
    std::ofstream mf(cfg.output_dir + "/metadata.json");
    mf << meta.dump(2) << "\n";
    return res;
}

// ---- sweep ---------------------------------------------------------------------

struct SweepRow {
    std::size_t index = 0;
    std::string params;
    bool ok = false;
    std::string status;
    double T_star = 0.0;       // blowup time, or t_end when no blowup
    double sup_ratio = 0.0;
};

// Independent runs with bounded parallelism; the summary preserves input
// order and records per-run failures without aborting the sweep.
inline std::vector<SweepRow> sweep(const std::vector<RunConfig>& configs,
                                   std::size_t parallelism) {
    if (configs.empty()) throw ConfigError({"sweep needs at least one configuration"});
    parallelism = std::max<std::size_t>(parallelism, 1);
    std::vector<SweepRow> rows(configs.size());
    std::size_t next = 0;
    while (next < configs.size()) {
        std::size_t batch = std::min(parallelism, configs.size() - next);
        std::vector<std::future<SweepRow>> futs;
        for (std::size_t b = 0; b < batch; ++b) {
            std::size_t idx = next + b;
            futs.push_back(std::async(std::launch::async, [idx, &configs]() {
                SweepRow row;
                row.index = idx;
                const RunConfig& c = configs[idx];
                row.params = model_name(c.model) + " n=" + std::to_string(c.n) +
                             " beta=" + detail::fmt17(c.beta) + " dt=" + detail::fmt17(c.dt);
                try {
                    auto res = run(c);
                    row.ok = res.all_pass();
                    row.status = row.ok ? "pass" : "monitor-fail";
                    for (const auto& [k, v] : res.verdicts)
                        if (!v.pass) row.status = k + ": " + v.detail;
                    row.T_star = res.empirical_T_star ? *res.empirical_T_star : c.t_end;
                    row.sup_ratio = res.sup_ratio;
                } catch (const std::exception& e) {
                    row.ok = false;
                    row.status = std::string("error: ") + e.what();
                }
                return row;
            }));
        }
        for (std::size_t b = 0; b < batch; ++b) rows[next + b] = futs[b].get();
        next += batch;
    }
    return rows;
}

// ---- plot emission ---------------------------------------------------------------

enum class PlotKind { Series, SnapshotProfile, Spectrum };

inline PlotKind parse_plot_kind(const std::string& s) {
    if (s == "series") return PlotKind::Series;
    if (s == "snapshot") return PlotKind::SnapshotProfile;
    if (s == "spectrum") return PlotKind::Spectrum;
    throw std::invalid_argument("unknown plot kind '" + s + "' (series|snapshot|spectrum)");
}

// gnuplot-friendly whitespace tables from run artifacts
inline void emit_plot_data(const std::string& input, PlotKind kind, std::ostream& out) {
    if (kind == PlotKind::Series) {
        std::ifstream in(input);
        if (!in) throw std::runtime_error("cannot open " + input);
        std::string line;
        bool header = true;
        while (std::getline(in, line)) {
            for (auto& ch : line)
                if (ch == ',') ch = ' ';
            out << (header ? "# " : "") << line << "\n";
            header = false;
        }
        return;
    }
    Snapshot s = read_snapshot(input);
    if (kind == PlotKind::SnapshotProfile) {
        out << "# t = " << detail::fmt17(s.t) << "\n";
        if (s.dim == 1) {
            out << "# x";
            for (std::size_t f = 0; f < s.fields.size(); ++f) out << " field" << f;
            out << "\n";
            for (std::size_t i = 0; i < s.n1; ++i) {
                out << detail::fmt17(2.0 * pi * static_cast<double>(i) /
                                     static_cast<double>(s.n1));
                for (const auto& f : s.fields) out << " " << detail::fmt17(f[i]);
                out << "\n";
            }
        } else {
            out << "# i1 i2";
            for (std::size_t f = 0; f < s.fields.size(); ++f) out << " field" << f;
            out << "\n";
            for (std::size_t i = 0; i < s.n1; ++i) {
                for (std::size_t j = 0; j < s.n2; ++j) {
                    out << i << " " << j;
                    for (const auto& f : s.fields) out << " " << detail::fmt17(f[i * s.n2 + j]);
                    out << "\n";
                }
                out << "\n";  // gnuplot block separator
            }
        }
        return;
    }
    // spectrum: integer shells of |k|, one l2-magnitude column per field
    GridPtr g = s.dim == 1 ? make_grid(s.n1, 2.0 * pi)
                           : make_grid(s.n1, s.n2, 2.0 * pi, 2.0 * pi);
    const std::size_t nshell = s.n1 / 2 + 1;
    std::vector<std::vector<double>> shells(s.fields.size(), std::vector<double>(nshell, 0.0));
    for (std::size_t f = 0; f < s.fields.size(); ++f) {
        Spectrum sp = to_spectrum(RealField(g, s.fields[f]));
        if (s.dim == 1) {
            for (std::size_t i = 0; i < g->n[0]; ++i) {
                std::size_t m = static_cast<std::size_t>(std::labs(g->mode[0][i]));
                if (m < nshell) shells[f][m] += std::norm(sp[i]);
            }
        } else {
            for (std::size_t i = 0; i < g->n[0]; ++i)
                for (std::size_t j = 0; j < g->n[1]; ++j) {
                    double mm = std::hypot(static_cast<double>(g->mode[0][i]),
                                           static_cast<double>(g->mode[1][j]));
                    std::size_t m = static_cast<std::size_t>(std::lround(mm));
                    if (m < nshell) shells[f][m] += std::norm(sp[g->idx(i, j)]);
                }
        }
    }
    out << "# |k|";
    for (std::size_t f = 0; f < s.fields.size(); ++f) out << " mag" << f;
    out << "\n";
    for (std::size_t m = 0; m < nshell; ++m) {
        out << m;
        for (std::size_t f = 0; f < s.fields.size(); ++f)
            out << " " << detail::fmt17(std::sqrt(shells[f][m]));
        out << "\n";
    }
}

}  // namespace fdb
