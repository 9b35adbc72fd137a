#pragma once

#include <array>
#include <cmath>
#include <mutex>
#include <stdexcept>

#include "fdb/model1d.hpp"
#include "fdb/spectral.hpp"

namespace fdb {

struct State2D {
    RealField eta;
    RealField u1, u2;
    double t = 0.0;

    State2D() = default;
    State2D(RealField e, RealField v1, RealField v2, double time = 0.0)
        : eta(std::move(e)), u1(std::move(v1)), u2(std::move(v2)), t(time) {
        check_same_grid(eta, u1);
        check_same_grid(eta, u2);
    }
    GridPtr grid() const { return eta.grid; }
};

// Helmholtz projection onto gradient fields: uhat_j <- kd_j (kd.uhat)/|kd|^2.
// Uses the derivative wavenumbers so that the discrete curl (computed with
// the same convention) vanishes identically; modes with kd = 0 (zero mode,
// pure Nyquist lines) pass through unchanged.
inline std::pair<RealField, RealField> project_curl_free(const RealField& u1,
                                                         const RealField& u2) {
    check_same_grid(u1, u2);
    const Grid& g = *u1.grid;
    if (g.dim != 2) throw std::invalid_argument("project_curl_free needs a 2D grid");
    Spectrum s1 = to_spectrum(u1), s2 = to_spectrum(u2);
    for (std::size_t i = 0; i < g.n[0]; ++i)
        for (std::size_t j = 0; j < g.n[1]; ++j) {
            const double k1 = g.kd[0][i], k2 = g.kd[1][j];
            const double kk = k1 * k1 + k2 * k2;
            if (kk == 0.0) continue;
            const std::size_t id = g.idx(i, j);
            Complex along = (k1 * s1[id] + k2 * s2[id]) / kk;
            s1[id] = k1 * along;
            s2[id] = k2 * along;
        }
    return {to_field(u1.grid, s1, realness_unchecked), to_field(u1.grid, s2, realness_unchecked)};
}

inline double curl_l2norm(const RealField& u1, const RealField& u2) {
    const Grid& g = *u1.grid;
    Spectrum s1 = to_spectrum(u1), s2 = to_spectrum(u2);
    double acc = 0.0;
    for (std::size_t i = 0; i < g.n[0]; ++i)
        for (std::size_t j = 0; j < g.n[1]; ++j) {
            const std::size_t id = g.idx(i, j);
            // curl = d1 u2 - d2 u1
            Complex c = Complex(0.0, g.kd[0][i]) * s2[id] - Complex(0.0, g.kd[1][j]) * s1[id];
            acc += std::norm(c);
        }
    return std::sqrt(acc * g.measure());
}

// 2D full-dispersion Boussinesq system with curl-free velocity
//   eta_t + K(D) div u + div(eta u) = 0
//   u_t   + grad eta + 1/2 grad |u|^2 = 0
// The eta equation is evaluated through the reformulated split
//   eta_t = (Mtilde(D)+1)(1 - beta Lap)(R1 u1 + R2 u2) - div(eta u),
// which matches -K(D) div u through R_j Lap = D^1 d_j; the direct evaluation
// stays available as the cross-check path.
class Boussinesq2D {
  public:
    enum class Path { Split, Direct };

    Boussinesq2D(GridPtr grid, double beta, Dealias dealias = Dealias::TwoThirds,
                 bool nonlinear = true)
        : grid_(std::move(grid)), beta_(beta), dealias_(dealias), nonlinear_(nonlinear) {
        if (grid_->dim != 2) throw std::invalid_argument("Boussinesq2D needs a 2D grid");
        if (!(beta > 0.0)) throw std::invalid_argument("Boussinesq2D needs beta > 0");
        const std::size_t total = grid_->size();
        split1_.resize(total);
        split2_.resize(total);
        direct1_.resize(total);
        direct2_.resize(total);
        ikd1_.resize(total);
        ikd2_.resize(total);
        omega_.resize(total);
        kfactor_.resize(total);
        for (std::size_t i = 0; i < grid_->n[0]; ++i)
            for (std::size_t j = 0; j < grid_->n[1]; ++j) {
                const std::size_t id = grid_->idx(i, j);
                const double k1 = grid_->k[0][i], k2 = grid_->k[1][j];
                const double kd1 = grid_->kd[0][i], kd2 = grid_->kd[1][j];
                const double kmod = std::hypot(k1, k2);
                const double kdmod = std::hypot(kd1, kd2);
                const double K = eval_K(kmod, beta);
                // (Mtilde+1)(1+beta|k|^2) R_j, with R_j = -i kd_j/|k|
                const double front = (eval_Mtilde(kmod) + 1.0) * (1.0 + beta * kmod * kmod);
                split1_[id] = kmod == 0.0 ? Complex(0.0) : front * Complex(0.0, -kd1 / kmod);
                split2_[id] = kmod == 0.0 ? Complex(0.0) : front * Complex(0.0, -kd2 / kmod);
                direct1_[id] = Complex(0.0, -K * kd1);
                direct2_[id] = Complex(0.0, -K * kd2);
                ikd1_[id] = Complex(0.0, kd1);
                ikd2_[id] = Complex(0.0, kd2);
                omega_[id] = kdmod * std::sqrt(K);
                kfactor_[id] = K;
            }
    }

    GridPtr grid() const { return grid_; }
    double beta() const { return beta_; }

    void rhs_spectral(const Spectrum& eh, const Spectrum& u1h, const Spectrum& u2h, Spectrum& deh,
                      Spectrum& du1h, Spectrum& du2h, Path path = Path::Split) const {
        const std::size_t total = grid_->size();
        deh.assign(total, Complex(0.0));
        du1h.assign(total, Complex(0.0));
        du2h.assign(total, Complex(0.0));
        const Spectrum& L1 = path == Path::Split ? split1_ : direct1_;
        const Spectrum& L2 = path == Path::Split ? split2_ : direct2_;
        for (std::size_t i = 0; i < total; ++i) {
            deh[i] = L1[i] * u1h[i] + L2[i] * u2h[i];
            du1h[i] = -ikd1_[i] * eh[i];
            du2h[i] = -ikd2_[i] * eh[i];
        }
        if (!nonlinear_) return;
        RealField eta = to_field(grid_, eh, realness_unchecked);
        RealField u1 = to_field(grid_, u1h, realness_unchecked);
        RealField u2 = to_field(grid_, u2h, realness_unchecked);
        const bool da = dealias_ == Dealias::TwoThirds;
        Spectrum f1 = product_spectrum(eta, u1, da);
        Spectrum f2 = product_spectrum(eta, u2, da);
        RealField speed2(grid_);
        for (std::size_t i = 0; i < total; ++i)
            speed2.v[i] = u1.v[i] * u1.v[i] + u2.v[i] * u2.v[i];
        Spectrum s2h = to_spectrum(speed2);
        if (da) dealias_spectrum(*grid_, s2h);
        for (std::size_t i = 0; i < total; ++i) {
            deh[i] -= ikd1_[i] * f1[i] + ikd2_[i] * f2[i];
            du1h[i] -= 0.5 * ikd1_[i] * s2h[i];
            du2h[i] -= 0.5 * ikd2_[i] * s2h[i];
        }
    }

    std::tuple<RealField, RealField, RealField> rhs(const State2D& s,
                                                    Path path = Path::Split) const {
        if (!all_finite(s.eta) || !all_finite(s.u1) || !all_finite(s.u2)) throw BlowupError(s.t);
        Spectrum de, du1, du2;
        rhs_spectral(to_spectrum(s.eta), to_spectrum(s.u1), to_spectrum(s.u2), de, du1, du2, path);
        return {to_field(grid_, de, realness_unchecked), to_field(grid_, du1, realness_unchecked),
                to_field(grid_, du2, realness_unchecked)};
    }

    State2D step(const State2D& s, const IntegratorConfig& cfg) const {
        if (!all_finite(s.eta) || !all_finite(s.u1) || !all_finite(s.u2)) throw BlowupError(s.t);
        Spectrum eh = to_spectrum(s.eta), u1h = to_spectrum(s.u1), u2h = to_spectrum(s.u2);
        if (cfg.scheme == Scheme::RK4)
            rk4_step(eh, u1h, u2h, cfg.dt);
        else
            ifrk4_step(eh, u1h, u2h, cfg.dt);
        reproject(u1h, u2h);
        State2D out(to_field(grid_, eh, realness_unchecked),
                    to_field(grid_, u1h, realness_unchecked),
                    to_field(grid_, u2h, realness_unchecked), s.t + cfg.dt);
        if (!all_finite(out.eta) || !all_finite(out.u1) || !all_finite(out.u2))
            throw BlowupError(out.t);
        return out;
    }

    double mass(const State2D& s) const { return mean(s.eta) * grid_->measure(); }

  private:
    void nonlinear_spectral(const Spectrum& eh, const Spectrum& u1h, const Spectrum& u2h,
                            Spectrum& ne, Spectrum& n1, Spectrum& n2) const {
        const std::size_t total = grid_->size();
        ne.assign(total, Complex(0.0));
        n1.assign(total, Complex(0.0));
        n2.assign(total, Complex(0.0));
        if (!nonlinear_) return;
        RealField eta = to_field(grid_, eh, realness_unchecked);
        RealField u1 = to_field(grid_, u1h, realness_unchecked);
        RealField u2 = to_field(grid_, u2h, realness_unchecked);
        const bool da = dealias_ == Dealias::TwoThirds;
        Spectrum f1 = product_spectrum(eta, u1, da);
        Spectrum f2 = product_spectrum(eta, u2, da);
        RealField speed2(grid_);
        for (std::size_t i = 0; i < total; ++i)
            speed2.v[i] = u1.v[i] * u1.v[i] + u2.v[i] * u2.v[i];
        Spectrum s2h = to_spectrum(speed2);
        if (da) dealias_spectrum(*grid_, s2h);
        for (std::size_t i = 0; i < total; ++i) {
            ne[i] = -(ikd1_[i] * f1[i] + ikd2_[i] * f2[i]);
            n1[i] = -0.5 * ikd1_[i] * s2h[i];
            n2[i] = -0.5 * ikd2_[i] * s2h[i];
        }
    }

    // sin(wh)/w and (1-cos(wh))/w^2 per mode, rebuilt only when h changes
    struct PropTable {
        double h = std::numeric_limits<double>::quiet_NaN();
        std::vector<double> sc, cc;
    };

    const PropTable& prop_table(double h) const {
        std::lock_guard<std::mutex> lock(ptab_mtx_);
        for (auto& t : ptab_)
            if (t.h == h) return t;
        auto& t = ptab_[next_slot_];
        next_slot_ = (next_slot_ + 1) % ptab_.size();
        t.h = h;
        t.sc.resize(omega_.size());
        t.cc.resize(omega_.size());
        for (std::size_t i = 0; i < omega_.size(); ++i) {
            const double w = omega_[i];
            t.sc[i] = w == 0.0 ? h : std::sin(w * h) / w;
            t.cc[i] = w == 0.0 ? 0.5 * h * h : (1.0 - std::cos(w * h)) / (w * w);
        }
        return t;
    }

    // e^{hB} = I + sin(wh)/w B + (1-cos(wh))/w^2 B^2 per mode, where
    // B = [[0, -iK kd1, -iK kd2], [-i kd1, 0, 0], [-i kd2, 0, 0]] and
    // w = |kd| sqrt(K); B^3 = -w^2 B.
    void propagate(Spectrum& eh, Spectrum& u1h, Spectrum& u2h, double h) const {
        const std::size_t total = grid_->size();
        const PropTable& tab = prop_table(h);
        for (std::size_t i = 0; i < total; ++i) {
            const double sc = tab.sc[i];
            const double cc = tab.cc[i];
            const double K = kfactor_[i];
            const Complex e = eh[i], a = u1h[i], b = u2h[i];
            const Complex div = ikd1_[i] * a + ikd2_[i] * b;  // i kd . u
            // B v = (-K div, -i kd1 e, -i kd2 e); note  -iK(kd.u) = -K*(i kd.u)
            const Complex Bv0 = -K * div;
            const Complex Bv1 = -ikd1_[i] * e;
            const Complex Bv2 = -ikd2_[i] * e;
            // B^2 v = (-K |kd|^2 e, -K kd1 (kd.u), -K kd2 (kd.u));
            // with i kd stored: kd_j (kd.u) = -i kd_j * (i kd.u)
            const Complex B2v0 = -(omega_[i] * omega_[i]) * e;
            const Complex B2v1 = K * ikd1_[i] * div;
            const Complex B2v2 = K * ikd2_[i] * div;
            eh[i] = e + sc * Bv0 + cc * B2v0;
            u1h[i] = a + sc * Bv1 + cc * B2v1;
            u2h[i] = b + sc * Bv2 + cc * B2v2;
        }
    }

    void reproject(Spectrum& u1h, Spectrum& u2h) const {
        const Grid& g = *grid_;
        for (std::size_t i = 0; i < g.n[0]; ++i)
            for (std::size_t j = 0; j < g.n[1]; ++j) {
                const double k1 = g.kd[0][i], k2 = g.kd[1][j];
                const double kk = k1 * k1 + k2 * k2;
                if (kk == 0.0) continue;
                const std::size_t id = g.idx(i, j);
                Complex along = (k1 * u1h[id] + k2 * u2h[id]) / kk;
                u1h[id] = k1 * along;
                u2h[id] = k2 * along;
            }
    }

    void ifrk4_step(Spectrum& eh, Spectrum& u1h, Spectrum& u2h, double dt) const {
        const std::size_t n = grid_->size();
        Spectrum n1e, n1a, n1b, n2e, n2a, n2b, n3e, n3a, n3b, n4e, n4a, n4b;
        nonlinear_spectral(eh, u1h, u2h, n1e, n1a, n1b);

        Spectrum s2e(eh), s2a(u1h), s2b(u2h);
        for (std::size_t i = 0; i < n; ++i) {
            s2e[i] += 0.5 * dt * n1e[i];
            s2a[i] += 0.5 * dt * n1a[i];
            s2b[i] += 0.5 * dt * n1b[i];
        }
        propagate(s2e, s2a, s2b, 0.5 * dt);
        nonlinear_spectral(s2e, s2a, s2b, n2e, n2a, n2b);

        Spectrum s3e(eh), s3a(u1h), s3b(u2h);
        propagate(s3e, s3a, s3b, 0.5 * dt);
        for (std::size_t i = 0; i < n; ++i) {
            s3e[i] += 0.5 * dt * n2e[i];
            s3a[i] += 0.5 * dt * n2a[i];
            s3b[i] += 0.5 * dt * n2b[i];
        }
        nonlinear_spectral(s3e, s3a, s3b, n3e, n3a, n3b);

        Spectrum s4e(eh), s4a(u1h), s4b(u2h);
        propagate(s4e, s4a, s4b, dt);
        propagate(n3e, n3a, n3b, 0.5 * dt);
        for (std::size_t i = 0; i < n; ++i) {
            s4e[i] += dt * n3e[i];
            s4a[i] += dt * n3a[i];
            s4b[i] += dt * n3b[i];
        }
        nonlinear_spectral(s4e, s4a, s4b, n4e, n4a, n4b);

        propagate(eh, u1h, u2h, dt);
        propagate(n1e, n1a, n1b, dt);
        propagate(n2e, n2a, n2b, 0.5 * dt);
        for (std::size_t i = 0; i < n; ++i) {
            eh[i] += dt / 6.0 * (n1e[i] + 2.0 * (n2e[i] + n3e[i]) + n4e[i]);
            u1h[i] += dt / 6.0 * (n1a[i] + 2.0 * (n2a[i] + n3a[i]) + n4a[i]);
            u2h[i] += dt / 6.0 * (n1b[i] + 2.0 * (n2b[i] + n3b[i]) + n4b[i]);
        }
    }

    void rk4_step(Spectrum& eh, Spectrum& u1h, Spectrum& u2h, double dt) const {
        const std::size_t n = grid_->size();
        Spectrum k1e, k1a, k1b, k2e, k2a, k2b, k3e, k3a, k3b, k4e, k4a, k4b;
        Spectrum te(n), ta(n), tb(n);
        rhs_spectral(eh, u1h, u2h, k1e, k1a, k1b);
        for (std::size_t i = 0; i < n; ++i) {
            te[i] = eh[i] + 0.5 * dt * k1e[i];
            ta[i] = u1h[i] + 0.5 * dt * k1a[i];
            tb[i] = u2h[i] + 0.5 * dt * k1b[i];
        }
        rhs_spectral(te, ta, tb, k2e, k2a, k2b);
        for (std::size_t i = 0; i < n; ++i) {
            te[i] = eh[i] + 0.5 * dt * k2e[i];
            ta[i] = u1h[i] + 0.5 * dt * k2a[i];
            tb[i] = u2h[i] + 0.5 * dt * k2b[i];
        }
        rhs_spectral(te, ta, tb, k3e, k3a, k3b);
        for (std::size_t i = 0; i < n; ++i) {
            te[i] = eh[i] + dt * k3e[i];
            ta[i] = u1h[i] + dt * k3a[i];
            tb[i] = u2h[i] + dt * k3b[i];
        }
        rhs_spectral(te, ta, tb, k4e, k4a, k4b);
        for (std::size_t i = 0; i < n; ++i) {
            eh[i] += dt / 6.0 * (k1e[i] + 2.0 * (k2e[i] + k3e[i]) + k4e[i]);
            u1h[i] += dt / 6.0 * (k1a[i] + 2.0 * (k2a[i] + k3a[i]) + k4a[i]);
            u2h[i] += dt / 6.0 * (k1b[i] + 2.0 * (k2b[i] + k3b[i]) + k4b[i]);
        }
    }

    GridPtr grid_;
    double beta_;
    Dealias dealias_;
    bool nonlinear_;
    Spectrum split1_, split2_, direct1_, direct2_, ikd1_, ikd2_;
    std::vector<double> omega_, kfactor_;
    mutable std::array<PropTable, 3> ptab_;
    mutable std::size_t next_slot_ = 0;
    mutable std::mutex ptab_mtx_;
};

// transport form (u.grad)u_j, equal to 1/2 grad|u|^2 for curl-free u
inline std::pair<RealField, RealField> transport_form(const RealField& u1, const RealField& u2,
                                                      bool dealiased = true) {
    auto d1u1 = derivative(u1, 0), d2u1 = derivative(u1, 1);
    auto d1u2 = derivative(u2, 0), d2u2 = derivative(u2, 1);
    RealField t1(u1.grid), t2(u1.grid);
    for (std::size_t i = 0; i < u1.size(); ++i) {
        t1.v[i] = u1.v[i] * d1u1.v[i] + u2.v[i] * d2u1.v[i];
        t2.v[i] = u1.v[i] * d1u2.v[i] + u2.v[i] * d2u2.v[i];
    }
    if (dealiased) {
        t1 = dealias(t1);
        t2 = dealias(t2);
    }
    return {t1, t2};
}

// ---- initial data -------------------------------------------------------------

inline State2D rest_state_2d(GridPtr g) {
    return State2D(RealField(g), RealField(g), RealField(g));
}

inline State2D gaussian_state_2d(GridPtr g, double a, double sigma) {
    const double L1 = g->length[0], L2 = g->length[1];
    auto eta = sample2d(g, [=](double x, double y) {
        return a * std::exp(-(std::pow(x - 0.5 * L1, 2) + std::pow(y - 0.5 * L2, 2)) /
                            (sigma * sigma));
    });
    return State2D(std::move(eta), RealField(g), RealField(g));
}

inline State2D planewave_state_2d(GridPtr g, double a, long m, double beta) {
    const double k = 2.0 * pi * static_cast<double>(m) / g->length[0];
    auto eta = sample2d(g, [=](double x, double) { return a * std::cos(k * x); });
    auto u1 = sample2d(g, [=](double x, double) { return a / eval_W(k, beta) * std::cos(k * x); });
    return State2D(std::move(eta), std::move(u1), RealField(g));
}

// embed a 1D state as an x2-independent 2D state with u2 = 0
inline State2D embed_1d(const State1D& s, GridPtr g2) {
    if (g2->n[0] != s.grid()->n[0] || g2->length[0] != s.grid()->length[0])
        throw std::invalid_argument("embed_1d: axis-1 mismatch");
    RealField eta(g2), u1(g2), u2(g2);
    for (std::size_t i = 0; i < g2->n[0]; ++i)
        for (std::size_t j = 0; j < g2->n[1]; ++j) {
            eta.v[g2->idx(i, j)] = s.eta.v[i];
            u1.v[g2->idx(i, j)] = s.u.v[i];
        }
    return State2D(std::move(eta), std::move(u1), std::move(u2), s.t);
}

}  // namespace fdb
