#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "fdb/spectral.hpp"

namespace fdb {

struct State1D {
    RealField eta;
    RealField u;
    double t = 0.0;

    State1D() = default;
    State1D(RealField e, RealField vel, double time = 0.0)
        : eta(std::move(e)), u(std::move(vel)), t(time) {
        check_same_grid(eta, u);
    }
    GridPtr grid() const { return eta.grid; }
};

enum class Scheme { IFRK4, RK4 };
enum class Dealias { TwoThirds, None };

struct IntegratorConfig {
    double dt = 1e-3;
    Scheme scheme = Scheme::IFRK4;
    Dealias dealias = Dealias::TwoThirds;
    double t_end = 1.0;
    std::size_t output_stride = 1;
};

// largest linear frequency omega = |k| sqrt(K(k)) on the grid
inline double omega_max(const Grid& g, double beta) {
    double w = 0.0;
    if (g.dim == 1) {
        for (std::size_t i = 0; i < g.n[0]; ++i)
            w = std::max(w, std::abs(g.kd[0][i]) * eval_W(std::abs(g.k[0][i]), beta));
    } else {
        for (std::size_t i = 0; i < g.n[0]; ++i)
            for (std::size_t j = 0; j < g.n[1]; ++j) {
                double kd = std::hypot(g.kd[0][i], g.kd[1][j]);
                double k = std::hypot(g.k[0][i], g.k[1][j]);
                w = std::max(w, kd * eval_W(k, beta));
            }
    }
    return w;
}

// RK4 on the undamped oscillatory linear part is stable for dt*omega <= 2.8
inline void check_stability(const IntegratorConfig& cfg, const Grid& g, double beta) {
    if (cfg.scheme == Scheme::RK4 && cfg.dt * omega_max(g, beta) > 2.8)
        throw std::invalid_argument("RK4 stability guard: dt*omega_max = " +
                                    std::to_string(cfg.dt * omega_max(g, beta)) + " > 2.8");
}

// 1D full-dispersion Boussinesq system
//   eta_t + K(D) u_x + (eta u)_x = 0
//   u_t   + eta_x + u u_x        = 0
// evaluated through the reformulated split
//   eta_t = -M(D)(1-beta dxx)u + H u - beta H u_xx - (eta u)_x
// (M has exponentially decaying symbol, so the stiff part is explicit and
// exactly representable per mode).  The unreformulated evaluation is kept as
// an independent cross-check path.
class Boussinesq1D {
  public:
    enum class Path { Split, Direct };

    Boussinesq1D(GridPtr grid, double beta, Dealias dealias = Dealias::TwoThirds,
                 bool nonlinear = true)
        : grid_(std::move(grid)), beta_(beta), dealias_(dealias), nonlinear_(nonlinear) {
        if (grid_->dim != 1) throw std::invalid_argument("Boussinesq1D needs a 1D grid");
        if (!(beta > 0.0)) throw std::invalid_argument("Boussinesq1D needs beta > 0");
        const std::size_t n = grid_->n[0];
        split_op_.resize(n);
        direct_op_.resize(n);
        ikd_.resize(n);
        omega_.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double k = grid_->k[0][i];
            const double kd = grid_->kd[0][i];
            // H - M, times (1 + beta k^2): equals -i K(k) k in exact arithmetic
            double sgn = kd > 0.0 ? 1.0 : (kd < 0.0 ? -1.0 : 0.0);
            Complex h(0.0, -sgn);
            Complex m = (kd == 0.0 && k != 0.0) ? Complex(0.0) : eval_M(k);
            split_op_[i] = (1.0 + beta * k * k) * (h - m);
            direct_op_[i] = Complex(0.0, -eval_K(k, beta) * kd);
            ikd_[i] = Complex(0.0, kd);
            omega_[i] = std::abs(kd) * eval_W(std::abs(k), beta);
        }
    }

    GridPtr grid() const { return grid_; }
    double beta() const { return beta_; }
    bool nonlinear() const { return nonlinear_; }

    void rhs_spectral(const Spectrum& eh, const Spectrum& uh, Spectrum& deh, Spectrum& duh,
                      Path path = Path::Split) const {
        const std::size_t n = grid_->n[0];
        deh.assign(n, Complex(0.0));
        duh.assign(n, Complex(0.0));
        const Spectrum& lin = path == Path::Split ? split_op_ : direct_op_;
        for (std::size_t i = 0; i < n; ++i) {
            deh[i] = lin[i] * uh[i];
            duh[i] = -ikd_[i] * eh[i];
        }
        if (!nonlinear_) return;
        RealField eta = to_field(grid_, eh, realness_unchecked);
        RealField u = to_field(grid_, uh, realness_unchecked);
        RealField dxu = to_field(grid_, scaled(uh, ikd_), realness_unchecked);
        bool da = dealias_ == Dealias::TwoThirds;
        Spectrum flux = product_spectrum(eta, u, da);   // (eta u)
        Spectrum advec = product_spectrum(u, dxu, da);  // u u_x
        for (std::size_t i = 0; i < n; ++i) {
            deh[i] -= ikd_[i] * flux[i];
            duh[i] -= advec[i];
        }
    }

    // physical-space rhs per the system equations
    std::pair<RealField, RealField> rhs(const State1D& s, Path path = Path::Split) const {
        if (!all_finite(s.eta) || !all_finite(s.u)) throw BlowupError(s.t);
        Spectrum deh, duh;
        rhs_spectral(to_spectrum(s.eta), to_spectrum(s.u), deh, duh, path);
        return {to_field(grid_, deh, realness_unchecked), to_field(grid_, duh, realness_unchecked)};
    }

    State1D step(const State1D& s, const IntegratorConfig& cfg) const {
        if (!all_finite(s.eta) || !all_finite(s.u)) throw BlowupError(s.t);
        Spectrum eh = to_spectrum(s.eta), uh = to_spectrum(s.u);
        step_spectral(eh, uh, cfg);
        State1D out(to_field(grid_, eh, realness_unchecked),
                    to_field(grid_, uh, realness_unchecked), s.t + cfg.dt);
        if (!all_finite(out.eta) || !all_finite(out.u)) throw BlowupError(out.t);
        return out;
    }

    void step_spectral(Spectrum& eh, Spectrum& uh, const IntegratorConfig& cfg) const {
        if (cfg.scheme == Scheme::RK4)
            rk4_step(eh, uh, cfg.dt);
        else
            ifrk4_step(eh, uh, cfg.dt);
    }

    // H = 1/2 int ( u K(D)u + eta^2 + eta u^2 ) dx, conserved by the flow
    double hamiltonian(const State1D& s) const {
        Spectrum uh = to_spectrum(s.u);
        Spectrum kuh(uh.size());
        for (std::size_t i = 0; i < uh.size(); ++i)
            kuh[i] = uh[i] * eval_K(grid_->k[0][i], beta_);
        RealField Ku = to_field(grid_, kuh, realness_unchecked);
        double acc = 0.0;
        for (std::size_t i = 0; i < s.u.size(); ++i) {
            double e = s.eta.v[i], u = s.u.v[i];
            acc += u * Ku.v[i] + e * e + e * u * u;
        }
        return 0.5 * acc * grid_->cell_volume();
    }

    double mass(const State1D& s) const { return mean(s.eta) * grid_->measure(); }
    double momentum(const State1D& s) const { return mean(s.u) * grid_->measure(); }

  private:
    static Spectrum scaled(const Spectrum& a, const Spectrum& w) {
        Spectrum out(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * w[i];
        return out;
    }

    void nonlinear_spectral(const Spectrum& eh, const Spectrum& uh, Spectrum& neh,
                            Spectrum& nuh) const {
        const std::size_t n = grid_->n[0];
        neh.assign(n, Complex(0.0));
        nuh.assign(n, Complex(0.0));
        if (!nonlinear_) return;
        RealField eta = to_field(grid_, eh, realness_unchecked);
        RealField u = to_field(grid_, uh, realness_unchecked);
        RealField dxu = to_field(grid_, scaled(uh, ikd_), realness_unchecked);
        bool da = dealias_ == Dealias::TwoThirds;
        Spectrum flux = product_spectrum(eta, u, da);
        Spectrum advec = product_spectrum(u, dxu, da);
        for (std::size_t i = 0; i < n; ++i) {
            neh[i] = -ikd_[i] * flux[i];
            nuh[i] = -advec[i];
        }
    }

    // e^{hA} with A = [[0, -iKk],[-ik, 0]] per mode: cos(wh) I + sin(wh)/w A
    void propagate(Spectrum& eh, Spectrum& uh, double h) const {
        const std::size_t n = grid_->n[0];
        for (std::size_t i = 0; i < n; ++i) {
            double w = omega_[i];
            double c = std::cos(w * h);
            double sc = w == 0.0 ? h : std::sin(w * h) / w;
            Complex e = eh[i], u = uh[i];
            eh[i] = c * e + sc * split_op_[i] * u;
            uh[i] = c * u + sc * (-ikd_[i]) * e;
        }
    }

    void ifrk4_step(Spectrum& eh, Spectrum& uh, double dt) const {
        const std::size_t n = grid_->n[0];
        Spectrum n1e, n1u, n2e, n2u, n3e, n3u, n4e, n4u;
        nonlinear_spectral(eh, uh, n1e, n1u);

        Spectrum s2e(eh), s2u(uh);
        for (std::size_t i = 0; i < n; ++i) {
            s2e[i] += 0.5 * dt * n1e[i];
            s2u[i] += 0.5 * dt * n1u[i];
        }
        propagate(s2e, s2u, 0.5 * dt);
        nonlinear_spectral(s2e, s2u, n2e, n2u);

        Spectrum s3e(eh), s3u(uh);
        propagate(s3e, s3u, 0.5 * dt);
        for (std::size_t i = 0; i < n; ++i) {
            s3e[i] += 0.5 * dt * n2e[i];
            s3u[i] += 0.5 * dt * n2u[i];
        }
        nonlinear_spectral(s3e, s3u, n3e, n3u);

        Spectrum s4e(eh), s4u(uh);
        propagate(s4e, s4u, dt);
        propagate(n3e, n3u, 0.5 * dt);
        for (std::size_t i = 0; i < n; ++i) {
            s4e[i] += dt * n3e[i];
            s4u[i] += dt * n3u[i];
        }
        nonlinear_spectral(s4e, s4u, n4e, n4u);

        // assemble: E2 w0 + dt/6 (E2 n1 + 2 E (n2 + n3') + n4), n3' already half-propagated
        propagate(eh, uh, dt);
        propagate(n1e, n1u, dt);
        propagate(n2e, n2u, 0.5 * dt);
        for (std::size_t i = 0; i < n; ++i) {
            eh[i] += dt / 6.0 * (n1e[i] + 2.0 * (n2e[i] + n3e[i]) + n4e[i]);
            uh[i] += dt / 6.0 * (n1u[i] + 2.0 * (n2u[i] + n3u[i]) + n4u[i]);
        }
    }

    void rk4_step(Spectrum& eh, Spectrum& uh, double dt) const {
        const std::size_t n = grid_->n[0];
        Spectrum k1e, k1u, k2e, k2u, k3e, k3u, k4e, k4u;
        Spectrum te(n), tu(n);
        rhs_spectral(eh, uh, k1e, k1u);
        for (std::size_t i = 0; i < n; ++i) {
            te[i] = eh[i] + 0.5 * dt * k1e[i];
            tu[i] = uh[i] + 0.5 * dt * k1u[i];
        }
        rhs_spectral(te, tu, k2e, k2u);
        for (std::size_t i = 0; i < n; ++i) {
            te[i] = eh[i] + 0.5 * dt * k2e[i];
            tu[i] = uh[i] + 0.5 * dt * k2u[i];
        }
        rhs_spectral(te, tu, k3e, k3u);
        for (std::size_t i = 0; i < n; ++i) {
            te[i] = eh[i] + dt * k3e[i];
            tu[i] = uh[i] + dt * k3u[i];
        }
        rhs_spectral(te, tu, k4e, k4u);
        for (std::size_t i = 0; i < n; ++i) {
            eh[i] += dt / 6.0 * (k1e[i] + 2.0 * (k2e[i] + k3e[i]) + k4e[i]);
            uh[i] += dt / 6.0 * (k1u[i] + 2.0 * (k2u[i] + k3u[i]) + k4u[i]);
        }
    }

    GridPtr grid_;
    double beta_;
    Dealias dealias_;
    bool nonlinear_;
    Spectrum split_op_, direct_op_, ikd_;
    std::vector<double> omega_;
};

// Whitham equation u_t + W(D) u_x + u u_x = 0, W = sqrt(K).  Used for
// qualitative comparison runs only.
class Whitham1D {
  public:
    Whitham1D(GridPtr grid, double beta, Dealias dealias = Dealias::TwoThirds,
              bool nonlinear = true)
        : grid_(std::move(grid)), beta_(beta), dealias_(dealias), nonlinear_(nonlinear) {
        if (grid_->dim != 1) throw std::invalid_argument("Whitham1D needs a 1D grid");
        if (beta < 0.0) throw std::invalid_argument("Whitham1D needs beta >= 0");
        const std::size_t n = grid_->n[0];
        lin_.resize(n);
        ikd_.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            double k = grid_->k[0][i], kd = grid_->kd[0][i];
            lin_[i] = Complex(0.0, -eval_W(std::abs(k), beta) * kd);
            ikd_[i] = Complex(0.0, kd);
        }
    }

    RealField rhs(const RealField& u, double t = 0.0) const {
        if (!all_finite(u)) throw BlowupError(t);
        Spectrum uh = to_spectrum(u), out;
        rhs_spectral(uh, out);
        return to_field(grid_, out, realness_unchecked);
    }

    void rhs_spectral(const Spectrum& uh, Spectrum& duh) const {
        const std::size_t n = grid_->n[0];
        duh.assign(n, Complex(0.0));
        for (std::size_t i = 0; i < n; ++i) duh[i] = lin_[i] * uh[i];
        if (!nonlinear_) return;
        RealField u = to_field(grid_, uh, realness_unchecked);
        Spectrum dxuh(n);
        for (std::size_t i = 0; i < n; ++i) dxuh[i] = ikd_[i] * uh[i];
        RealField dxu = to_field(grid_, dxuh, realness_unchecked);
        Spectrum advec = product_spectrum(u, dxu, dealias_ == Dealias::TwoThirds);
        for (std::size_t i = 0; i < n; ++i) duh[i] -= advec[i];
    }

    RealField step(const RealField& u, const IntegratorConfig& cfg) const {
        Spectrum uh = to_spectrum(u);
        if (cfg.scheme == Scheme::RK4) {
            rk4(uh, cfg.dt);
        } else {
            ifrk4(uh, cfg.dt);
        }
        return to_field(grid_, uh, realness_unchecked);
    }

  private:
    void nonlinear_term(const Spectrum& uh, Spectrum& nuh) const {
        const std::size_t n = grid_->n[0];
        nuh.assign(n, Complex(0.0));
        if (!nonlinear_) return;
        RealField u = to_field(grid_, uh, realness_unchecked);
        Spectrum dxuh(n);
        for (std::size_t i = 0; i < n; ++i) dxuh[i] = ikd_[i] * uh[i];
        RealField dxu = to_field(grid_, dxuh, realness_unchecked);
        Spectrum advec = product_spectrum(u, dxu, dealias_ == Dealias::TwoThirds);
        for (std::size_t i = 0; i < n; ++i) nuh[i] = -advec[i];
    }

    void phase(Spectrum& uh, double h) const {
        for (std::size_t i = 0; i < uh.size(); ++i) uh[i] *= std::exp(lin_[i] * h);
    }

    void ifrk4(Spectrum& uh, double dt) const {
        const std::size_t n = grid_->n[0];
        Spectrum n1, n2, n3, n4;
        nonlinear_term(uh, n1);
        Spectrum s2(uh);
        for (std::size_t i = 0; i < n; ++i) s2[i] += 0.5 * dt * n1[i];
        phase(s2, 0.5 * dt);
        nonlinear_term(s2, n2);
        Spectrum s3(uh);
        phase(s3, 0.5 * dt);
        for (std::size_t i = 0; i < n; ++i) s3[i] += 0.5 * dt * n2[i];
        nonlinear_term(s3, n3);
        Spectrum s4(uh);
        phase(s4, dt);
        phase(n3, 0.5 * dt);
        for (std::size_t i = 0; i < n; ++i) s4[i] += dt * n3[i];
        nonlinear_term(s4, n4);
        phase(uh, dt);
        phase(n1, dt);
        phase(n2, 0.5 * dt);
        for (std::size_t i = 0; i < n; ++i)
            uh[i] += dt / 6.0 * (n1[i] + 2.0 * (n2[i] + n3[i]) + n4[i]);
    }

    void rk4(Spectrum& uh, double dt) const {
        const std::size_t n = grid_->n[0];
        Spectrum k1, k2, k3, k4, t(n);
        rhs_spectral(uh, k1);
        for (std::size_t i = 0; i < n; ++i) t[i] = uh[i] + 0.5 * dt * k1[i];
        rhs_spectral(t, k2);
        for (std::size_t i = 0; i < n; ++i) t[i] = uh[i] + 0.5 * dt * k2[i];
        rhs_spectral(t, k3);
        for (std::size_t i = 0; i < n; ++i) t[i] = uh[i] + dt * k3[i];
        rhs_spectral(t, k4);
        for (std::size_t i = 0; i < n; ++i)
            uh[i] += dt / 6.0 * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
    }

    GridPtr grid_;
    double beta_;
    Dealias dealias_;
    bool nonlinear_;
    Spectrum lin_, ikd_;
};

// ---- initial data families ----------------------------------------------------

inline State1D rest_state(GridPtr g) { return State1D(RealField(g), RealField(g)); }

inline State1D gaussian_state(GridPtr g, double a, double sigma) {
    const double L = g->length[0];
    auto eta = sample(g, [=](double x) { return a * std::exp(-std::pow(x - 0.5 * L, 2) / (sigma * sigma)); });
    return State1D(std::move(eta), RealField(g));
}

// right-moving linear eigenmode: eta = a cos(kx), u = a/sqrt(K(k)) cos(kx)
inline State1D planewave_state(GridPtr g, double a, long m, double beta) {
    const double k = 2.0 * pi * static_cast<double>(m) / g->length[0];
    auto eta = sample(g, [=](double x) { return a * std::cos(k * x); });
    auto u = sample(g, [=](double x) { return a / eval_W(k, beta) * std::cos(k * x); });
    return State1D(std::move(eta), std::move(u));
}

}  // namespace fdb
