#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "fdb/model1d.hpp"
#include "fdb/model2d.hpp"

namespace fdb {

// universal coercivity constant: inf_{|xi|>=1} (1 - (1+xi^2)^{-1/2}) = 1 - 2^{-1/2}
inline constexpr double coercivity_c0_universal = 0.29289321881345254;

struct InsufficientDataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EnergyReport {
    double t = 0.0;
    double E_s = 0.0;          // modified energy
    double Hs_eta = 0.0;       // ||eta||_{H^s}
    double Hs12_u = 0.0;       // ||u||_{H^{s+1/2}} (both components in 2D)
    double cubic = 0.0;        // 1/2 int eta (J^s u)^2
    double lower = 0.0;        // coercivity sandwich bounds
    double upper = 0.0;
    double min_depth = 0.0;    // min(1 + eta)
    double ratio = 0.0;        // dE/dt / (E + E^2), filled by the monitor pass
};

namespace detail {

inline void fill_sandwich(EnergyReport& r, double eta_max) {
    const double h0t = r.min_depth;
    const double c0 = std::min(h0t, coercivity_c0_universal);
    const double h1 = std::max(eta_max, 0.0);
    r.lower = 0.5 * (r.Hs_eta * r.Hs_eta + c0 * r.Hs12_u * r.Hs12_u);
    r.upper = 0.5 * (r.Hs_eta * r.Hs_eta + (1.0 + h1) * r.Hs12_u * r.Hs12_u);
}

}  // namespace detail

// E^s = 1/2||eta||_{H^s}^2 + 1/2||u||_{H^{s+1/2}}^2 + 1/2 int eta (J^s u)^2,
// with the cubic term by grid quadrature.  Sandwich constants come from the
// measured min(1+eta) and max(eta) of the state itself.
inline EnergyReport modified_energy_1d(const State1D& state, double s) {
    if (!(s > 2.0)) throw std::invalid_argument("modified_energy_1d needs s > 2");
    if (!all_finite(state.eta) || !all_finite(state.u)) throw BlowupError(state.t);
    EnergyReport r;
    r.t = state.t;
    r.Hs_eta = sobolev_norm(state.eta, s);
    r.Hs12_u = sobolev_norm(state.u, s + 0.5);
    RealField Jsu = apply_multiplier(bessel(state.grid(), s), state.u);
    double cubic = 0.0;
    for (std::size_t i = 0; i < Jsu.size(); ++i)
        cubic += state.eta.v[i] * Jsu.v[i] * Jsu.v[i];
    r.cubic = 0.5 * cubic * state.grid()->cell_volume();
    r.E_s = 0.5 * r.Hs_eta * r.Hs_eta + 0.5 * r.Hs12_u * r.Hs12_u + r.cubic;
    r.min_depth = 1.0 + field_min(state.eta);
    detail::fill_sandwich(r, field_max(state.eta));
    return r;
}

inline EnergyReport modified_energy_2d(const State2D& state, double s) {
    if (!(s > 3.0)) throw std::invalid_argument("modified_energy_2d needs s > 3");
    if (!all_finite(state.eta) || !all_finite(state.u1) || !all_finite(state.u2))
        throw BlowupError(state.t);
    EnergyReport r;
    r.t = state.t;
    r.Hs_eta = sobolev_norm(state.eta, s);
    double nu1 = sobolev_norm(state.u1, s + 0.5), nu2 = sobolev_norm(state.u2, s + 0.5);
    r.Hs12_u = std::sqrt(nu1 * nu1 + nu2 * nu2);
    auto Js = bessel(state.grid(), s);
    RealField a = apply_multiplier(Js, state.u1);
    RealField b = apply_multiplier(Js, state.u2);
    double cubic = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        cubic += state.eta.v[i] * (a.v[i] * a.v[i] + b.v[i] * b.v[i]);
    r.cubic = 0.5 * cubic * state.grid()->cell_volume();
    r.E_s = 0.5 * r.Hs_eta * r.Hs_eta + 0.5 * r.Hs12_u * r.Hs12_u + r.cubic;
    r.min_depth = 1.0 + field_min(state.eta);
    detail::fill_sandwich(r, field_max(state.eta));
    return r;
}

// unmodified Sobolev energy, for the cancellation comparison
inline double naive_energy_1d(const State1D& state, double s) {
    double a = sobolev_norm(state.eta, s), b = sobolev_norm(state.u, s + 0.5);
    return 0.5 * (a * a + b * b);
}

struct DifferenceEnergyReport {
    double t = 0.0;
    double Etilde = 0.0;      // the modified difference energy
    double lower = 0.0;       // H^1 x H^{3/2} sandwich
    double upper = 0.0;
    double H1_deta = 0.0;     // ||eta1-eta2||_{H^1}
    double H32_du = 0.0;      // ||u1-u2||_{H^{3/2}}
};

// 2 Etilde = ||de||_L2^2 + ||dx de||_L2^2 + ||du||_L2^2 + ||D^{1/2} dx du||_L2^2
//            + int eta1 (dx du)^2
inline DifferenceEnergyReport difference_energy(const State1D& s1, const State1D& s2) {
    check_same_grid(s1.eta, s2.eta);
    check_same_grid(s1.u, s2.u);
    GridPtr g = s1.grid();
    RealField de(g), du(g);
    for (std::size_t i = 0; i < de.size(); ++i) {
        de.v[i] = s1.eta.v[i] - s2.eta.v[i];
        du.v[i] = s1.u.v[i] - s2.u.v[i];
    }
    RealField dxde = derivative(de);
    RealField dxdu = derivative(du);
    RealField d12dxdu = apply_multiplier(riesz_potential(g, 0.5), dxdu);
    double cubic = 0.0;
    for (std::size_t i = 0; i < dxdu.size(); ++i) cubic += s1.eta.v[i] * dxdu.v[i] * dxdu.v[i];
    cubic *= g->cell_volume();

    auto sq = [](double x) { return x * x; };
    DifferenceEnergyReport r;
    r.t = s1.t;
    r.Etilde = 0.5 * (sq(l2_norm(de)) + sq(l2_norm(dxde)) + sq(l2_norm(du)) +
                      sq(l2_norm(d12dxdu)) + cubic);
    r.H1_deta = sobolev_norm(de, 1.0);
    r.H32_du = sobolev_norm(du, 1.5);
    const double h0t = 1.0 + field_min(s1.eta);
    const double c0 = std::min(h0t, coercivity_c0_universal);
    const double h1 = std::max(field_max(s1.eta), 0.0);
    r.lower = 0.5 * (sq(r.H1_deta) + c0 * sq(r.H32_du));
    r.upper = 0.5 * (sq(r.H1_deta) + (1.0 + h1) * sq(r.H32_du));
    return r;
}

struct ExistenceEstimate {
    double T1 = 0.0;
    double T2 = 0.0;
    double T0 = 0.0;
    double C1 = 1.0;
    double C2 = 10.0;
    double h0 = 0.5;
};

// T1 = (1/C1) log(1 + 1/(1 + C1 ||(eta0,u0)||^2)),
// T2 = h0 / (C2 (1 + ||eta0||_{H^s}) ||u0||_{H^{s+1/2}}),  T0 = min(T1,T2).
inline ExistenceEstimate existence_time(double eta_norm, double u_norm, double h0, double C1,
                                        double C2) {
    if (!(h0 > 0.0) || !(h0 < 1.0)) throw std::domain_error("existence_time: h0 must be in (0,1)");
    if (!(C1 > 0.0) || !(C2 > 0.0))
        throw std::domain_error("existence_time: C1, C2 must be positive");
    if (eta_norm < 0.0 || u_norm < 0.0)
        throw std::domain_error("existence_time: norms must be nonnegative");
    ExistenceEstimate e;
    e.C1 = C1;
    e.C2 = C2;
    e.h0 = h0;
    const double data2 = eta_norm * eta_norm + u_norm * u_norm;
    e.T1 = std::log(1.0 + 1.0 / (1.0 + C1 * data2)) / C1;
    e.T2 = u_norm == 0.0 ? std::numeric_limits<double>::infinity()
                         : h0 / (C2 * (1.0 + eta_norm) * u_norm);
    e.T0 = std::min(e.T1, e.T2);
    return e;
}

struct MonitorVerdict {
    bool pass = true;
    double violation_time = std::numeric_limits<double>::quiet_NaN();
    std::string detail;
};

// checks min(1+eta(t)) >= h0/2 for all recorded t <= t_limit
inline MonitorVerdict noncavitation_monitor(const std::vector<std::pair<double, double>>& depth,
                                            double h0, double t_limit) {
    MonitorVerdict v;
    for (const auto& [t, md] : depth) {
        if (t > t_limit) break;
        if (!(md >= 0.5 * h0)) {
            v.pass = false;
            v.violation_time = t;
            v.detail = "min(1+eta) = " + std::to_string(md) + " < h0/2 at t = " + std::to_string(t);
            return v;
        }
    }
    v.detail = "min(1+eta) >= h0/2 up to t = " + std::to_string(t_limit);
    return v;
}

// three-point derivative estimates: centered inside, one-sided second order at
// the ends; tolerates mildly non-uniform time stamps
inline std::vector<double> stencil_derivative(const std::vector<double>& t,
                                              const std::vector<double>& y) {
    const std::size_t n = t.size();
    if (n < 3) throw InsufficientDataError("need at least 3 samples for derivative estimates");
    std::vector<double> d(n);
    auto three_point = [&](std::size_t a, std::size_t b, std::size_t c, double x) {
        // derivative at x of the quadratic through (t_a,y_a),(t_b,y_b),(t_c,y_c)
        double d1 = (y[b] - y[a]) / (t[b] - t[a]);
        double d2 = (y[c] - y[b]) / (t[c] - t[b]);
        double dd = (d2 - d1) / (t[c] - t[a]);
        return d1 + dd * (2.0 * x - t[a] - t[b]);
    };
    d[0] = three_point(0, 1, 2, t[0]);
    for (std::size_t i = 1; i + 1 < n; ++i) d[i] = three_point(i - 1, i, i + 1, t[i]);
    d[n - 1] = three_point(n - 3, n - 2, n - 1, t[n - 1]);
    return d;
}

struct EnergyRatioReport {
    std::vector<double> ratio;  // dE/dt / (E + E^2) per sample
    double sup_ratio = 0.0;     // signed supremum
    bool finite = true;
};

// empirical version of dE/dt <= c (E + E^2): the per-sample ratio and its
// supremum; exact-rest 0/0 reads as 0
inline EnergyRatioReport energy_inequality_monitor(const std::vector<double>& t,
                                                   const std::vector<double>& E) {
    if (t.size() != E.size()) throw std::invalid_argument("time/energy size mismatch");
    auto dE = stencil_derivative(t, E);
    EnergyRatioReport r;
    r.ratio.resize(t.size());
    r.sup_ratio = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < t.size(); ++i) {
        double den = E[i] + E[i] * E[i];
        r.ratio[i] = den == 0.0 ? 0.0 : dE[i] / den;
        if (!std::isfinite(r.ratio[i])) r.finite = false;
        r.sup_ratio = std::max(r.sup_ratio, r.ratio[i]);
    }
    return r;
}

struct GronwallReport {
    std::vector<double> t;
    std::vector<double> Etilde;
    std::vector<double> ratio;     // structured ratio of the difference estimate
    double C_hat = 0.0;            // max structured ratio ("empirical Gronwall constant")
    double envelope_rate = 0.0;    // sup of positive part of Etilde'/Etilde
    bool envelope_ok = true;       // Etilde(t) <= Etilde(0) exp(envelope_rate t)
    double E0 = 0.0;
};

// evolves two solutions side by side and measures
//   Etilde'(t) / [ (1 + sum ||.||_{H^s})^2 ( ||deta||_{H^1}^2 + ||du||_{H^{3/2}}^2 ) ]
inline GronwallReport gronwall_experiment(const State1D& a0, const State1D& b0,
                                          const IntegratorConfig& cfg, double s, double beta) {
    if (!(s > 2.5)) throw std::invalid_argument("gronwall_experiment needs s > 5/2");
    Boussinesq1D model(a0.grid(), beta, cfg.dealias);
    check_stability(cfg, *a0.grid(), beta);
    State1D a = a0, b = b0;
    GronwallReport rep;
    std::vector<double> denom;
    const std::size_t nsteps = static_cast<std::size_t>(std::llround(cfg.t_end / cfg.dt));
    for (std::size_t step = 0; step <= nsteps; ++step) {
        if (step % cfg.output_stride == 0 || step == nsteps) {
            auto d = difference_energy(a, b);
            double sum_norms = sobolev_norm(a.eta, s) + sobolev_norm(b.eta, s) +
                               sobolev_norm(a.u, s) + sobolev_norm(b.u, s);
            double den = std::pow(1.0 + sum_norms, 2) *
                         (d.H1_deta * d.H1_deta + d.H32_du * d.H32_du);
            rep.t.push_back(a.t);
            rep.Etilde.push_back(d.Etilde);
            denom.push_back(den);
        }
        if (step < nsteps) {
            a = model.step(a, cfg);
            b = model.step(b, cfg);
        }
    }
    rep.E0 = rep.Etilde.front();
    auto dE = stencil_derivative(rep.t, rep.Etilde);
    rep.ratio.resize(rep.t.size());
    rep.C_hat = 0.0;
    rep.envelope_rate = 0.0;
    for (std::size_t i = 0; i < rep.t.size(); ++i) {
        rep.ratio[i] = denom[i] == 0.0 ? 0.0 : dE[i] / denom[i];
        rep.C_hat = std::max(rep.C_hat, rep.ratio[i]);
        if (rep.Etilde[i] > 0.0) rep.envelope_rate = std::max(rep.envelope_rate, dE[i] / rep.Etilde[i]);
    }
    for (std::size_t i = 0; i < rep.t.size(); ++i) {
        double bound = rep.E0 * std::exp(rep.envelope_rate * rep.t[i]);
        if (rep.Etilde[i] > bound * (1.0 + 1e-6) + 1e-300) rep.envelope_ok = false;
    }
    return rep;
}

}  // namespace fdb
