// fdbouss: pseudospectral lab for the full-dispersion Boussinesq systems.
// Subcommands: simulate, sweep, verify-inequalities, existence-time,
// difference, convergence, emit-plot.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "fdb/inequality.hpp"
#include "fdb/runner.hpp"

using namespace fdb;

namespace {

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

int cmd_simulate(const std::string& config_path, const std::string& output_dir) {
    RunConfig cfg = load_config(config_path);
    if (!output_dir.empty()) cfg.output_dir = output_dir;
    auto res = run(cfg);
    for (const auto& [name, v] : res.verdicts)
        std::cout << (v.pass ? "[PASS] " : "[FAIL] ") << name << ": " << v.detail << "\n";
    std::cout << "artifacts: " << res.directory << "/{metadata.json, series.csv, snap_*.bin}\n";
    return res.all_pass() ? 0 : 1;
}

int cmd_sweep(const std::vector<std::string>& config_paths, std::size_t parallel,
              const std::string& summary_path) {
    std::vector<RunConfig> configs;
    for (std::size_t i = 0; i < config_paths.size(); ++i) {
        RunConfig c = load_config(config_paths[i]);
        if (config_paths.size() > 1) c.output_dir += "/run" + std::to_string(i);
        configs.push_back(std::move(c));
    }
    auto rows = sweep(configs, parallel);
    Json summary = Json::array();
    bool all_ok = true;
    std::cout << "# idx  status  T_star  sup_ratio  params\n";
    for (const auto& r : rows) {
        all_ok = all_ok && r.ok;
        std::cout << r.index << "  " << (r.ok ? "ok" : "FAIL") << "  " << r.T_star << "  "
                  << r.sup_ratio << "  " << r.params << "  [" << r.status << "]\n";
        summary.push_back({{"index", r.index},
                           {"params", r.params},
                           {"ok", r.ok},
                           {"status", r.status},
                           {"T_star", r.T_star},
                           {"sup_ratio", r.sup_ratio}});
    }
    if (!summary_path.empty()) {
        std::ofstream out(summary_path);
        out << summary.dump(2) << "\n";
    }
    return all_ok ? 0 : 1;
}

int cmd_verify_inequalities(std::size_t trials, const std::vector<std::size_t>& sizes,
                            std::uint64_t seed, const std::string& json_path) {
    struct Study {
        EstimateKind kind;
        double s;
    };
    const std::vector<Study> studies = {
        {EstimateKind::KatoPonce, 1.0},       {EstimateKind::KatoPonce, 2.6},
        {EstimateKind::FracLeibniz, 0.0},     {EstimateKind::FracLeibnizEndpoint, 0.0},
        {EstimateKind::DmpCommutator, 1.6},   {EstimateKind::MultM, 2.6},
        {EstimateKind::MultMinf, 0.0},        {EstimateKind::MultBR, 0.0},
    };
    Json out = Json::array();
    bool ok = true;
    for (const auto& st : studies) {
        auto rep = refinement_study(st.kind, sizes, trials, seed, st.s);
        double lo = rep.refinement.front().second, hi = lo;
        for (auto& [n, r] : rep.refinement) {
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
        bool stable = lo > 0.0 ? hi / lo <= 2.0 : true;
        bool clean = rep.inconsistencies == 0;
        bool bounded = true;
        if (st.kind == EstimateKind::MultBR) bounded = rep.max_ratio <= 0.5 + 1e-10;
        if (st.kind == EstimateKind::MultM) {
            auto g = make_grid(sizes.back(), 2.0 * pi);
            bounded = rep.max_ratio <= est_M_grid_bound(*g, st.s) * (1.0 + 1e-10);
        }
        ok = ok && stable && clean && bounded;
        Json j;
        j["estimate"] = rep.estimate;
        if (st.s != 0.0) j["s"] = st.s;
        j["trials"] = rep.trials;
        j["max_ratio"] = rep.max_ratio;
        j["argmax_seed"] = rep.argmax_seed;
        j["zero_rhs_trials"] = rep.zero_rhs_trials;
        j["inconsistencies"] = rep.inconsistencies;
        j["refinement"] = Json::array();
        for (auto& [n, r] : rep.refinement) j["refinement"].push_back({{"n", n}, {"max_ratio", r}});
        j["stable_within_factor_2"] = stable;
        j["bounded"] = bounded;
        out.push_back(j);
        std::cout << (stable && clean && bounded ? "[PASS] " : "[FAIL] ") << rep.estimate
                  << (st.s != 0.0 ? " (s=" + std::to_string(st.s) + ")" : "")
                  << ": max ratio " << rep.max_ratio << ", " << rep.inconsistencies
                  << " inconsistencies\n";
    }
    if (!json_path.empty()) {
        std::ofstream f(json_path);
        f << out.dump(2) << "\n";
    } else {
        std::cout << out.dump(2) << "\n";
    }
    return ok ? 0 : 1;
}

int cmd_existence(const std::string& config_path, double eta_norm, double u_norm, double h0,
                  double C1, double C2) {
    if (!config_path.empty()) {
        RunConfig cfg = load_config(config_path);
        auto violations = validate(cfg);
        if (!violations.empty()) throw ConfigError(violations);
        const double s = cfg.effective_diag_s();
        if (cfg.is_2d()) {
            auto g = make_grid(cfg.n, cfg.effective_n2(), cfg.L, cfg.effective_L2());
            auto st = detail::build_initial_2d(cfg, g);
            eta_norm = sobolev_norm(st.eta, s);
            double a = sobolev_norm(st.u1, s + 0.5), b = sobolev_norm(st.u2, s + 0.5);
            u_norm = std::sqrt(a * a + b * b);
            if (h0 == 0.0) h0 = detail::auto_h0(1.0 + field_min(st.eta));
        } else {
            auto g = make_grid(cfg.n, cfg.L);
            auto st = detail::build_initial_1d(cfg, g);
            eta_norm = sobolev_norm(st.eta, s);
            u_norm = sobolev_norm(st.u, s + 0.5);
            if (h0 == 0.0) h0 = detail::auto_h0(1.0 + field_min(st.eta));
        }
        C1 = cfg.C1;
        C2 = cfg.C2;
    }
    auto e = existence_time(eta_norm, u_norm, h0, C1, C2);
    Json j = {{"eta_norm", eta_norm},
              {"u_norm", u_norm},
              {"h0", e.h0},
              {"C1", e.C1},
              {"C2", e.C2},
              {"T1", e.T1},
              {"T2", std::isinf(e.T2) ? -1.0 : e.T2},
              {"T0", std::isinf(e.T0) ? -1.0 : e.T0}};
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_difference(const std::string& config_path, std::vector<double> deltas,
                   std::uint64_t perturb_seed, const std::string& report_path) {
    RunConfig cfg = load_config(config_path);
    if (cfg.model != ModelKind::Boussinesq1D)
        throw ConfigError({"difference experiment runs on boussinesq-1d configs"});
    auto violations = validate(cfg);
    if (!violations.empty()) throw ConfigError(violations);
    if (deltas.empty()) deltas = {1e-3, 1e-4};

    auto g = make_grid(cfg.n, cfg.L);
    auto base = detail::build_initial_1d(cfg, g);
    RandomFieldSpec we;
    we.seed = perturb_seed;
    we.band = std::min<long>(20, static_cast<long>(cfg.n) / 3 - 2);
    we.decay = 2.0;
    RandomFieldSpec wu = we;
    wu.seed = perturb_seed ^ 0x517cc1b727220a95ull;
    auto pe = random_field(g, we);
    auto pu = random_field(g, wu);

    IntegratorConfig icfg;
    icfg.dt = cfg.dt;
    icfg.scheme = cfg.scheme;
    icfg.dealias = cfg.dealias;
    icfg.t_end = cfg.t_end;
    icfg.output_stride = cfg.output_stride;

    Json out = Json::array();
    bool ok = true;
    std::vector<double> e0s;
    const double s = cfg.effective_diag_s();
    for (double delta : deltas) {
        State1D pert = base;
        for (std::size_t i = 0; i < pert.eta.size(); ++i) {
            pert.eta.v[i] += delta * pe.v[i];
            pert.u.v[i] += delta * pu.v[i];
        }
        auto rep = gronwall_experiment(base, pert, icfg, s, cfg.beta);
        e0s.push_back(rep.E0);
        ok = ok && rep.envelope_ok && std::isfinite(rep.C_hat);
        out.push_back({{"delta", delta},
                       {"E0", rep.E0},
                       {"C_hat", rep.C_hat},
                       {"envelope_rate", rep.envelope_rate},
                       {"envelope_ok", rep.envelope_ok}});
        std::cout << (rep.envelope_ok ? "[PASS] " : "[FAIL] ") << "delta=" << delta
                  << " E0=" << rep.E0 << " C_hat=" << rep.C_hat
                  << " envelope_rate=" << rep.envelope_rate << "\n";
        std::filesystem::create_directories(cfg.output_dir);
        std::ofstream csv(cfg.output_dir + "/difference_delta" + std::to_string(delta) + ".csv");
        csv << "t,Etilde,ratio\n";
        for (std::size_t i = 0; i < rep.t.size(); ++i)
            csv << detail::fmt17(rep.t[i]) << "," << detail::fmt17(rep.Etilde[i]) << ","
                << detail::fmt17(rep.ratio[i]) << "\n";
    }
    for (std::size_t i = 0; i + 1 < deltas.size(); ++i) {
        double expect = std::pow(deltas[i] / deltas[i + 1], 2);
        double got = e0s[i] / e0s[i + 1];
        bool quad = std::abs(got / expect - 1.0) <= 0.01;
        ok = ok && quad;
        std::cout << (quad ? "[PASS] " : "[FAIL] ") << "E0 scaling " << deltas[i] << "/"
                  << deltas[i + 1] << ": ratio " << got << " expected " << expect << "\n";
    }
    if (!report_path.empty()) {
        std::ofstream f(report_path);
        f << out.dump(2) << "\n";
    }
    return ok ? 0 : 1;
}

int cmd_convergence(const std::string& kind, const std::string& config_path) {
    RunConfig cfg;
    if (!config_path.empty()) {
        cfg = load_config(config_path);
    } else {
        cfg.model = ModelKind::Boussinesq1D;
        cfg.n = 128;
        cfg.family = InitFamily::Gaussian;
        cfg.amplitude = 0.25;
        cfg.sigma = cfg.L / 8.0;
        cfg.dt = 0.025;
        cfg.t_end = 0.5;
    }
    auto violations = validate(cfg);
    if (!violations.empty()) throw ConfigError(violations);
    if (cfg.model != ModelKind::Boussinesq1D)
        throw ConfigError({"convergence studies run on boussinesq-1d configs"});

    if (kind == "temporal") {
        auto g = make_grid(cfg.n, cfg.L);
        Boussinesq1D model(g, cfg.beta, cfg.dealias);
        auto s0 = detail::build_initial_1d(cfg, g);
        std::vector<State1D> sols;
        for (int lvl = 0; lvl < 3; ++lvl) {
            IntegratorConfig icfg;
            icfg.dt = cfg.dt / std::pow(2.0, lvl);
            icfg.scheme = cfg.scheme;
            icfg.dealias = cfg.dealias;
            check_stability(icfg, *g, cfg.beta);
            auto st = s0;
            std::size_t nsteps = static_cast<std::size_t>(std::llround(cfg.t_end / icfg.dt));
            for (std::size_t i = 0; i < nsteps; ++i) st = model.step(st, icfg);
            sols.push_back(st);
        }
        auto diff = [&](const State1D& a, const State1D& b) {
            double acc = 0.0;
            for (std::size_t i = 0; i < a.eta.size(); ++i)
                acc += std::pow(a.eta.v[i] - b.eta.v[i], 2) + std::pow(a.u.v[i] - b.u.v[i], 2);
            return std::sqrt(acc * g->cell_volume());
        };
        double e1 = diff(sols[0], sols[1]), e2 = diff(sols[1], sols[2]);
        double order = std::log2(e1 / e2);
        bool pass = std::abs(order - 4.0) <= 0.2;
        std::cout << (pass ? "[PASS] " : "[FAIL] ") << "temporal order " << order << " (errors "
                  << e1 << ", " << e2 << ")\n";
        return pass ? 0 : 1;
    }
    if (kind == "spatial") {
        const std::size_t n_ref = 512;
        auto run_at = [&](std::size_t n) {
            auto g = make_grid(n, cfg.L);
            Boussinesq1D model(g, cfg.beta, cfg.dealias);
            auto st = gaussian_state(g, cfg.amplitude, cfg.L / 16.0);
            IntegratorConfig icfg;
            icfg.dt = cfg.dt;
            icfg.scheme = Scheme::IFRK4;
            icfg.dealias = cfg.dealias;
            std::size_t nsteps = static_cast<std::size_t>(std::llround(cfg.t_end / icfg.dt));
            for (std::size_t i = 0; i < nsteps; ++i) st = model.step(st, icfg);
            return st;
        };
        auto ref = run_at(n_ref);
        bool pass = true;
        for (std::size_t n : {32u, 64u, 128u, 256u}) {
            auto st = run_at(n);
            const std::size_t stride = n_ref / n;
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                acc += std::pow(st.eta.v[i] - ref.eta.v[i * stride], 2) +
                       std::pow(st.u.v[i] - ref.u.v[i * stride], 2);
            double err = std::sqrt(acc * st.grid()->cell_volume());
            bool level_ok = n < 128 || err < 1e-10;
            pass = pass && level_ok;
            std::cout << (level_ok ? "[PASS] " : "[FAIL] ") << "N=" << n
                      << " error vs N=" << n_ref << " reference: " << err << "\n";
        }
        return pass ? 0 : 1;
    }
    throw std::invalid_argument("convergence kind must be temporal or spatial");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pseudospectral lab for full-dispersion Boussinesq / Whitham systems"};
    app.require_subcommand(1);

    std::string config_path, output_dir, summary_path, json_path, report_path, plot_input,
        plot_kind = "series", conv_kind = "temporal", plot_output;
    std::vector<std::string> config_paths;
    std::vector<double> deltas;
    std::vector<std::size_t> sizes = {128, 256, 512};
    std::size_t parallel = 1, trials = 200;
    std::uint64_t seed = 1, perturb_seed = 42;
    double eta_norm = 0.0, u_norm = 0.0, h0 = 0.5, C1 = 1.0, C2 = 10.0;

    auto* sim = app.add_subcommand("simulate", "run one configured experiment");
    sim->add_option("config", config_path, "config file")->required();
    sim->add_option("--output-dir", output_dir, "override output.dir");

    auto* sw = app.add_subcommand("sweep", "run several configs, summarize in input order");
    sw->add_option("configs", config_paths, "config files")->required();
    sw->add_option("--parallel", parallel, "concurrent runs");
    sw->add_option("--summary", summary_path, "write summary JSON here");

    auto* vi = app.add_subcommand("verify-inequalities",
                                  "randomized trials for the commutator/multiplier estimates");
    vi->add_option("--trials", trials, "trials per estimate and resolution");
    vi->add_option("--sizes", sizes, "grid sizes for the refinement study");
    vi->add_option("--seed", seed, "base seed");
    vi->add_option("--json", json_path, "write the RatioReport array here");

    auto* ex = app.add_subcommand("existence-time", "a-priori existence time estimates");
    ex->add_option("--config", config_path, "derive norms from this config's initial data");
    ex->add_option("--eta-norm", eta_norm, "explicit ||eta0||_{H^s}");
    ex->add_option("--u-norm", u_norm, "explicit ||u0||_{H^{s+1/2}}");
    ex->add_option("--h0", h0, "non-cavitation floor in (0,1)");
    ex->add_option("--C1", C1, "constant C1");
    ex->add_option("--C2", C2, "constant C2");

    auto* df = app.add_subcommand("difference", "two-solution difference/Gronwall experiment");
    df->add_option("config", config_path, "base config file (boussinesq-1d)")->required();
    df->add_option("--delta", deltas, "perturbation sizes (default 1e-3 1e-4)");
    df->add_option("--perturb-seed", perturb_seed, "perturbation shape seed");
    df->add_option("--report", report_path, "write report JSON here");

    auto* cv = app.add_subcommand("convergence", "temporal / spatial order studies");
    cv->add_option("--kind", conv_kind, "temporal|spatial");
    cv->add_option("--config", config_path, "base config (optional)");

    auto* ep = app.add_subcommand("emit-plot", "gnuplot tables from run artifacts");
    ep->add_option("input", plot_input, "series.csv or snapshot file")->required();
    ep->add_option("--kind", plot_kind, "series|snapshot|spectrum");
    ep->add_option("-o,--output", plot_output, "output file (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return cmd_simulate(config_path, output_dir);
        if (sw->parsed()) return cmd_sweep(config_paths, parallel, summary_path);
        if (vi->parsed()) return cmd_verify_inequalities(trials, sizes, seed, json_path);
        if (ex->parsed()) return cmd_existence(config_path, eta_norm, u_norm, h0, C1, C2);
        if (df->parsed()) return cmd_difference(config_path, deltas, perturb_seed, report_path);
        if (cv->parsed()) return cmd_convergence(conv_kind, config_path);
        if (ep->parsed()) {
            if (plot_output.empty()) {
                emit_plot_data(plot_input, parse_plot_kind(plot_kind), std::cout);
            } else {
                std::ofstream out(plot_output);
                emit_plot_data(plot_input, parse_plot_kind(plot_kind), out);
            }
            return 0;
        }
    } catch (const ConfigError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
