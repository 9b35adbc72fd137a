#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fdb/random_field.hpp"
#include "fdb/spectral.hpp"

namespace fdb {

// A single measured LHS/RHS sample.  zero_rhs trials are tallied separately;
// an inconsistent sample (RHS ~ 0 but LHS clearly nonzero) flags an
// implementation bug, never a "violated estimate".
struct RatioPoint {
    double ratio = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    bool zero_rhs = false;
    bool inconsistent = false;
};

namespace detail {

inline RatioPoint finish_point(double lhs, double rhs, double scale) {
    RatioPoint p;
    p.lhs = lhs;
    p.rhs = rhs;
    if (rhs < 1e-14) {
        p.zero_rhs = true;
        p.inconsistent = lhs > 1e-12 * std::max(1.0, scale);
        p.ratio = 0.0;
    } else {
        p.ratio = lhs / rhs;
    }
    return p;
}

inline RealField diff(const RealField& a, const RealField& b) {
    RealField out(a.grid);
    for (std::size_t i = 0; i < a.size(); ++i) out.v[i] = a.v[i] - b.v[i];
    return out;
}

}  // namespace detail

// Kato-Ponce commutator with the (p; p1,p2; p3,p4) = (2; inf,2; 2,inf) tuple:
//   ||J^s(fg) - f J^s g||_L2  vs  ||f_x||_inf ||J^{s-1}g||_L2 + ||J^s f||_L2 ||g||_inf
inline RatioPoint kato_ponce_ratio(const RealField& f, const RealField& g, double s,
                                   bool dealiased = true) {
    if (!(s >= 1.0)) throw std::invalid_argument("kato_ponce_ratio needs s >= 1");
    GridPtr gr = f.grid;
    auto Js = bessel(gr, s);
    RealField commutator = detail::diff(apply_multiplier(Js, product(f, g, dealiased)),
                                        product(f, apply_multiplier(Js, g), dealiased));
    double lhs = l2_norm(commutator);
    double rhs = linf_norm(derivative(f)) * sobolev_norm(g, s - 1.0) +
                 sobolev_norm(f, s) * linf_norm(g);
    return detail::finish_point(lhs, rhs, l2_norm(f) * l2_norm(g));
}

enum class LeibnizClause { Interior, Sigma2Zero };

// fractional Leibniz defect D^sigma(fg) - f D^sigma g - g D^sigma f.
// Riesz potentials act with the zero-mode-annihilated convention, so means
// drop out of the defect identically.  Interior clause: sigma_i in (0,sigma),
// exponents (p,p1,p2) = (2,4,4); endpoint clause: sigma2 = 0, p2 = inf with
// D^0 g = g - mean(g).
inline RatioPoint frac_leibniz_ratio(const RealField& f, const RealField& g, double sigma,
                                     double sigma1, double sigma2,
                                     LeibnizClause clause = LeibnizClause::Interior,
                                     bool dealiased = true) {
    if (!(sigma > 0.0) || !(sigma < 1.0))
        throw std::invalid_argument("frac_leibniz_ratio needs sigma in (0,1)");
    if (std::abs(sigma1 + sigma2 - sigma) > 1e-12)
        throw std::invalid_argument("frac_leibniz_ratio needs sigma = sigma1 + sigma2");
    GridPtr gr = f.grid;
    auto Ds = riesz_potential(gr, sigma);
    RealField defect = detail::diff(
        detail::diff(apply_multiplier(Ds, product(f, g, dealiased)),
                     product(f, apply_multiplier(Ds, g), dealiased)),
        product(g, apply_multiplier(Ds, f), dealiased));
    double lhs = l2_norm(defect);
    double rhs;
    if (clause == LeibnizClause::Sigma2Zero) {
        if (sigma2 != 0.0) throw std::invalid_argument("endpoint clause needs sigma2 = 0");
        rhs = l2_norm(apply_multiplier(riesz_potential(gr, sigma1), f)) *
              linf_norm(project_mean_zero(g));
    } else {
        if (!(sigma1 > 0.0) || !(sigma2 > 0.0))
            throw std::invalid_argument("interior clause needs sigma_i in (0,sigma)");
        rhs = lp_norm(apply_multiplier(riesz_potential(gr, sigma1), f), 4.0) *
              lp_norm(apply_multiplier(riesz_potential(gr, sigma2), g), 4.0);
    }
    return detail::finish_point(lhs, rhs, l2_norm(f) * l2_norm(g));
}

// ||[D^{1/2}, a] D^{1/2} f||_L2 vs ||a||_{H^s} ||f||_L2, s > 3/2
inline RatioPoint dmp_commutator_ratio(const RealField& a, const RealField& f, double s,
                                       bool dealiased = true) {
    if (!(s > 1.5)) throw std::invalid_argument("dmp_commutator_ratio needs s > 3/2");
    GridPtr gr = a.grid;
    auto Dhalf = riesz_potential(gr, 0.5);
    RealField Dhf = apply_multiplier(Dhalf, f);
    RealField commutator =
        detail::diff(apply_multiplier(Dhalf, product(a, Dhf, dealiased)),
                     product(a, apply_multiplier(Dhalf, Dhf), dealiased));
    double lhs = l2_norm(commutator);
    double rhs = sobolev_norm(a, s) * l2_norm(f);
    return detail::finish_point(lhs, rhs, l2_norm(a) * l2_norm(f));
}

struct MultiplierRatios {
    double r_M = 0.0;     // ||J^s M(D) f||_L2 / ||f||_L2
    double r_Minf = 0.0;  // ||M(D)(1-dxx) f||_inf / ||f||_inf, oversampled numerator
    double r_BR = 0.0;    // ||(J^1 - D^1) dx f||_L2 / ||f||_L2
};

inline MultiplierRatios multiplier_estimate_ratios(const RealField& f, double s) {
    MultiplierRatios out;
    double fl2 = l2_norm(f), flinf = linf_norm(f);
    if (fl2 == 0.0) return out;
    GridPtr g = f.grid;
    out.r_M = sobolev_norm(apply_multiplier(M_multiplier(g), f), s) / fl2;

    auto smoothing = make_multiplier(g, "M(1-dxx)", Parity::OddImaginary, [](const ModeK& m) {
        if (m.kd1 == 0.0 && m.k1 != 0.0) return Complex(0.0);
        return eval_M(m.k1) * (1.0 + m.k1 * m.k1);
    });
    // grid maxima underestimate sup-norms; oversample the numerator so the
    // measured constant is not flattered
    out.r_Minf = oversampled_max_abs(apply_multiplier(smoothing, f), 4) / flinf;

    auto br = make_multiplier(g, "(J1-D1)dx", Parity::OddImaginary, [](const ModeK& m) {
        double gap = std::sqrt(1.0 + m.k1 * m.k1) - std::abs(m.k1);
        return Complex(0.0, m.kd1 * gap);
    });
    out.r_BR = l2_norm(apply_multiplier(br, f)) / fl2;
    return out;
}

// max over grid wavenumbers of (1+k^2)^{s/2} e^{-|k|}: the measured stand-in
// for the unquantified constant in the J^s M(D) smoothing estimate
inline double est_M_grid_bound(const Grid& g, double s) {
    double b = 0.0;
    for (std::size_t i = 0; i < g.n[0]; ++i) {
        double k = g.k[0][i];
        b = std::max(b, std::pow(1.0 + k * k, 0.5 * s) * std::exp(-std::abs(k)));
    }
    return b;
}

// ---- batch trials --------------------------------------------------------------

struct TrialStats {
    std::string estimate;
    std::size_t trials = 0;
    double max_ratio = 0.0;
    std::uint64_t argmax_seed = 0;
    std::size_t zero_rhs_trials = 0;
    std::size_t inconsistencies = 0;
};

struct RatioReport {
    std::string estimate;
    std::size_t trials = 0;
    double max_ratio = 0.0;
    std::uint64_t argmax_seed = 0;
    std::size_t zero_rhs_trials = 0;
    std::size_t inconsistencies = 0;
    std::vector<std::pair<std::size_t, double>> refinement;  // (n, max_ratio)
};

struct TrialFamily {
    double decay = 1.5;
    long band = 40;
    double amplitude = 1.0;
};

enum class EstimateKind { KatoPonce, FracLeibniz, FracLeibnizEndpoint, DmpCommutator, MultM, MultMinf, MultBR };

inline std::string estimate_name(EstimateKind k) {
    switch (k) {
        case EstimateKind::KatoPonce: return "kato-ponce";
        case EstimateKind::FracLeibniz: return "fractional-leibniz";
        case EstimateKind::FracLeibnizEndpoint: return "fractional-leibniz-endpoint";
        case EstimateKind::DmpCommutator: return "d-half-commutator";
        case EstimateKind::MultM: return "est-M";
        case EstimateKind::MultMinf: return "est-M-Linfty";
        case EstimateKind::MultBR: return "est-BR";
    }
    return "?";
}

inline TrialStats run_trials(EstimateKind kind, std::size_t n, std::size_t trials,
                             std::uint64_t base_seed, double s, const TrialFamily& fam = {}) {
    auto g = make_grid(n, 2.0 * pi);
    TrialStats st;
    st.estimate = estimate_name(kind);
    st.trials = trials;
    for (std::size_t t = 0; t < trials; ++t) {
        RandomFieldSpec sf;
        sf.seed = base_seed + 2 * t;
        sf.decay = fam.decay;
        sf.band = fam.band;
        sf.amplitude = fam.amplitude;
        RandomFieldSpec sg = sf;
        sg.seed = base_seed + 2 * t + 1;
        RealField f = random_field(g, sf);
        RatioPoint p;
        switch (kind) {
            case EstimateKind::KatoPonce:
                p = kato_ponce_ratio(f, random_field(g, sg), s);
                break;
            case EstimateKind::FracLeibniz:
                p = frac_leibniz_ratio(f, random_field(g, sg), 0.5, 0.25, 0.25,
                                       LeibnizClause::Interior);
                break;
            case EstimateKind::FracLeibnizEndpoint:
                p = frac_leibniz_ratio(f, random_field(g, sg), 0.5, 0.5, 0.0,
                                       LeibnizClause::Sigma2Zero);
                break;
            case EstimateKind::DmpCommutator:
                p = dmp_commutator_ratio(f, random_field(g, sg), s);
                break;
            case EstimateKind::MultM: {
                auto r = multiplier_estimate_ratios(f, s);
                p.ratio = r.r_M;
                break;
            }
            case EstimateKind::MultMinf: {
                auto r = multiplier_estimate_ratios(f, s);
                p.ratio = r.r_Minf;
                break;
            }
            case EstimateKind::MultBR: {
                auto r = multiplier_estimate_ratios(f, s);
                p.ratio = r.r_BR;
                break;
            }
        }
        if (p.zero_rhs) ++st.zero_rhs_trials;
        if (p.inconsistent) ++st.inconsistencies;
        if (p.ratio > st.max_ratio) {
            st.max_ratio = p.ratio;
            st.argmax_seed = sf.seed;
        }
    }
    return st;
}

inline RatioReport refinement_study(EstimateKind kind, const std::vector<std::size_t>& sizes,
                                    std::size_t trials, std::uint64_t base_seed, double s,
                                    const TrialFamily& fam = {}) {
    RatioReport rep;
    rep.estimate = estimate_name(kind);
    rep.trials = trials;
    for (std::size_t n : sizes) {
        auto st = run_trials(kind, n, trials, base_seed, s, fam);
        rep.refinement.emplace_back(n, st.max_ratio);
        rep.zero_rhs_trials += st.zero_rhs_trials;
        rep.inconsistencies += st.inconsistencies;
        if (st.max_ratio > rep.max_ratio) {
            rep.max_ratio = st.max_ratio;
            rep.argmax_seed = st.argmax_seed;
        }
    }
    return rep;
}

}  // namespace fdb
