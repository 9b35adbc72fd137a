#pragma once

// Slow, independent reference computations used as test oracles.  Everything
// here is deliberately naive (O(n^2) DFT sums, direct quadrature) and shares
// no code with the library paths it checks.

#include <cmath>
#include <complex>
#include <vector>

#include "fdb/field.hpp"
#include "fdb/grid.hpp"

namespace oracle {

using fdb::Complex;

// Naive DFT with the library's convention: fhat(m) = (1/n) sum f_j e^{-2pi i m j / n}
inline std::vector<Complex> naive_dft_1d(const std::vector<double>& f) {
    const std::size_t n = f.size();
    std::vector<Complex> out(n);
    for (std::size_t m = 0; m < n; ++m) {
        Complex acc(0.0);
        for (std::size_t j = 0; j < n; ++j) {
            double ang = -2.0 * fdb::pi * static_cast<double>(m) * static_cast<double>(j) /
                         static_cast<double>(n);
            acc += f[j] * Complex(std::cos(ang), std::sin(ang));
        }
        out[m] = acc / static_cast<double>(n);
    }
    return out;
}

// || f ||_{H^s}^2 = L * sum (1+k^2)^s |fhat|^2 from the naive DFT
inline double naive_sobolev_1d(const fdb::RealField& f, double s) {
    auto hat = naive_dft_1d(f.v);
    const fdb::Grid& g = *f.grid;
    double acc = 0.0;
    for (std::size_t m = 0; m < hat.size(); ++m) {
        double k = g.k[0][m];
        acc += std::pow(1.0 + k * k, s) * std::norm(hat[m]);
    }
    return std::sqrt(acc * g.length[0]);
}

inline double rect_quadrature(const fdb::RealField& f,
                              const std::function<double(double)>& integrand) {
    double acc = 0.0;
    for (double x : f.v) acc += integrand(x);
    return acc * f.grid->cell_volume();
}

}  // namespace oracle
