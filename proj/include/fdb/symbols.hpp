#pragma once

#include <cmath>
#include <functional>
#include <string>

#include "fdb/field.hpp"
#include "fdb/grid.hpp"

namespace fdb {

// ---- scalar symbol functions -------------------------------------------------

// K(xi) = tanh(|xi|)/|xi| * (1 + beta*|xi|^2), continuously extended to 1 at 0.
inline double eval_K(double kmod, double beta) {
    kmod = std::abs(kmod);
    if (kmod == 0.0) return 1.0;
    return std::tanh(kmod) / kmod * (1.0 + beta * kmod * kmod);
}

inline double eval_W(double kmod, double beta) { return std::sqrt(eval_K(kmod, beta)); }

// tanh(x) - 1 = -2/(e^{2x}+1), stable for large x where tanh saturates to 1.
inline double tanh_minus_one(double x) { return -2.0 / (std::exp(2.0 * x) + 1.0); }

// M(xi) = i (tanh(xi) - sgn(xi)), sgn(0) = 0 hence M(0) = 0.
inline Complex eval_M(double k) {
    if (k == 0.0) return Complex(0.0, 0.0);
    double m = k > 0.0 ? tanh_minus_one(k) : -tanh_minus_one(-k);
    return Complex(0.0, m);
}

// Mtilde(xi) = tanh|xi| - 1  (2D radial symbol)
inline double eval_Mtilde(double kmod) { return tanh_minus_one(std::abs(kmod)); }

// ---- tabulated multipliers ---------------------------------------------------

enum class Parity { EvenReal, OddImaginary, General };

// Per-mode wavenumber data handed to symbol builders.  k1/k2 are the true
// wavenumbers (Nyquist carries its full value), kd1/kd2 the derivative
// wavenumbers (zero at Nyquist), kmod = |k| with true values, m1/m2 the
// signed integer frequencies.
struct ModeK {
    double k1 = 0.0, k2 = 0.0;
    double kd1 = 0.0, kd2 = 0.0;
    double kmod = 0.0;
    long m1 = 0, m2 = 0;
    std::size_t n1 = 0, n2 = 0;
};

struct Multiplier {
    std::string name;
    Parity parity = Parity::General;
    GridPtr grid;
    Spectrum table;  // one value per grid mode, same layout as spectra
};

inline Multiplier make_multiplier(GridPtr g, std::string name, Parity parity,
                                  const std::function<Complex(const ModeK&)>& sym) {
    Multiplier m;
    m.name = std::move(name);
    m.parity = parity;
    m.grid = g;
    m.table.resize(g->size());
    ModeK mk;
    mk.n1 = g->n[0];
    mk.n2 = g->dim == 2 ? g->n[1] : 1;
    if (g->dim == 1) {
        for (std::size_t i = 0; i < g->n[0]; ++i) {
            mk.k1 = g->k[0][i];
            mk.kd1 = g->kd[0][i];
            mk.m1 = g->mode[0][i];
            mk.kmod = std::abs(mk.k1);
            m.table[i] = sym(mk);
        }
    } else {
        for (std::size_t i = 0; i < g->n[0]; ++i) {
            for (std::size_t j = 0; j < g->n[1]; ++j) {
                mk.k1 = g->k[0][i];
                mk.kd1 = g->kd[0][i];
                mk.m1 = g->mode[0][i];
                mk.k2 = g->k[1][j];
                mk.kd2 = g->kd[1][j];
                mk.m2 = g->mode[1][j];
                mk.kmod = std::hypot(mk.k1, mk.k2);
                m.table[g->idx(i, j)] = sym(mk);
            }
        }
    }
    return m;
}

// J^s: Bessel potential of order -s, symbol (1+|k|^2)^{s/2}
inline Multiplier bessel(GridPtr g, double s) {
    return make_multiplier(g, "J^" + std::to_string(s), Parity::EvenReal, [s](const ModeK& m) {
        return Complex(std::pow(1.0 + m.kmod * m.kmod, 0.5 * s), 0.0);
    });
}

// D^a: Riesz potential of order -a, symbol |k|^a; zero mode annihilated.
inline Multiplier riesz_potential(GridPtr g, double a) {
    return make_multiplier(g, "D^" + std::to_string(a), Parity::EvenReal, [a](const ModeK& m) {
        return m.kmod == 0.0 ? Complex(0.0, 0.0) : Complex(std::pow(m.kmod, a), 0.0);
    });
}

// Hilbert transform, symbol -i sgn(k); zeroed at Nyquist (odd symbol).
inline Multiplier hilbert(GridPtr g) {
    return make_multiplier(g, "H", Parity::OddImaginary, [](const ModeK& m) {
        double s = m.kd1 > 0.0 ? 1.0 : (m.kd1 < 0.0 ? -1.0 : 0.0);
        return Complex(0.0, -s);
    });
}

// Riesz transform R_j, symbol -i k_j/|k|; zero mode and Nyquist zeroed.
inline Multiplier riesz_transform(GridPtr g, int axis) {
    return make_multiplier(g, "R" + std::to_string(axis + 1), Parity::OddImaginary,
                           [axis](const ModeK& m) {
                               if (m.kmod == 0.0) return Complex(0.0, 0.0);
                               double kj = axis == 0 ? m.kd1 : m.kd2;
                               return Complex(0.0, -kj / m.kmod);
                           });
}

// d/dx_axis, symbol i*kd
inline Multiplier deriv(GridPtr g, int axis = 0) {
    return make_multiplier(g, "d/dx" + std::to_string(axis + 1), Parity::OddImaginary,
                           [axis](const ModeK& m) {
                               return Complex(0.0, axis == 0 ? m.kd1 : m.kd2);
                           });
}

inline Multiplier identity_multiplier(GridPtr g) {
    return make_multiplier(g, "Id", Parity::EvenReal,
                           [](const ModeK&) { return Complex(1.0, 0.0); });
}

inline Multiplier K_multiplier(GridPtr g, double beta) {
    return make_multiplier(g, "K", Parity::EvenReal, [beta](const ModeK& m) {
        return Complex(eval_K(m.kmod, beta), 0.0);
    });
}

inline Multiplier W_multiplier(GridPtr g, double beta) {
    return make_multiplier(g, "W", Parity::EvenReal, [beta](const ModeK& m) {
        return Complex(eval_W(m.kmod, beta), 0.0);
    });
}

// 1D M(D); odd symbol, zeroed at Nyquist like the other odd multipliers.
inline Multiplier M_multiplier(GridPtr g) {
    return make_multiplier(g, "M", Parity::OddImaginary, [](const ModeK& m) {
        if (m.kd1 == 0.0 && m.k1 != 0.0) return Complex(0.0, 0.0);  // Nyquist
        return eval_M(m.k1);
    });
}

inline Multiplier Mtilde_multiplier(GridPtr g) {
    return make_multiplier(g, "Mtilde", Parity::EvenReal,
                           [](const ModeK& m) { return Complex(eval_Mtilde(m.kmod), 0.0); });
}

// 2/3-rule mask: keep |m_j| < n_j/3 on every axis.
inline Multiplier dealias_mask(GridPtr g) {
    return make_multiplier(g, "dealias", Parity::EvenReal, [](const ModeK& m) {
        bool keep = 3 * std::labs(m.m1) < static_cast<long>(m.n1);
        if (m.n2 > 1) keep = keep && 3 * std::labs(m.m2) < static_cast<long>(m.n2);
        return Complex(keep ? 1.0 : 0.0, 0.0);
    });
}

}  // namespace fdb
