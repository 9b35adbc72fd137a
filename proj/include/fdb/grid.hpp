#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace fdb {

inline constexpr double pi = std::numbers::pi;

inline bool is_power_of_two(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }

// Periodic grid on [0,L1) x [0,L2).  Points per axis must be a power of two
// (>= 8).  Wavenumbers use the standard FFT layout m = 0,1,...,n/2,
// -n/2+1,...,-1 scaled by 2*pi/L.  Two arrays are kept per axis:
//   k[a][i]  : true wavenumber (Nyquist carries +n/2 * 2*pi/L),
//   kd[a][i] : derivative wavenumber, identical except the Nyquist entry is 0
//              so that odd-in-k multipliers (d/dx, Hilbert, Riesz) keep real
//              fields real.
struct Grid {
    int dim = 1;
    std::array<std::size_t, 2> n{0, 0};
    std::array<double, 2> length{0.0, 0.0};
    std::array<std::vector<double>, 2> k;
    std::array<std::vector<double>, 2> kd;
    std::array<std::vector<long>, 2> mode;  // integer frequencies, signed

    std::size_t size() const { return dim == 1 ? n[0] : n[0] * n[1]; }

    // row-major: index = i1*n2 + i2 in 2D
    std::size_t idx(std::size_t i1, std::size_t i2 = 0) const {
        return dim == 1 ? i1 : i1 * n[1] + i2;
    }

    double coord(int axis, std::size_t i) const {
        return length[axis] * static_cast<double>(i) / static_cast<double>(n[axis]);
    }

    double cell_volume() const {
        double v = length[0] / static_cast<double>(n[0]);
        if (dim == 2) v *= length[1] / static_cast<double>(n[1]);
        return v;
    }

    double measure() const { return dim == 1 ? length[0] : length[0] * length[1]; }
};

namespace detail {

inline void fill_axis(Grid& g, int axis, std::size_t n, double L) {
    if (!is_power_of_two(n) || n < 8)
        throw std::invalid_argument("grid: n must be a power of two >= 8");
    if (!(L > 0.0)) throw std::invalid_argument("grid: period must be positive");
    g.n[axis] = n;
    g.length[axis] = L;
    g.k[axis].resize(n);
    g.kd[axis].resize(n);
    g.mode[axis].resize(n);
    const double k0 = 2.0 * pi / L;
    const long half = static_cast<long>(n / 2);
    for (std::size_t i = 0; i < n; ++i) {
        long m = static_cast<long>(i) <= half ? static_cast<long>(i)
                                              : static_cast<long>(i) - static_cast<long>(n);
        g.mode[axis][i] = m;
        g.k[axis][i] = k0 * static_cast<double>(m);
        g.kd[axis][i] = (m == half) ? 0.0 : g.k[axis][i];
    }
}

}  // namespace detail

inline std::shared_ptr<const Grid> make_grid(std::size_t n, double L = 2.0 * pi) {
    auto g = std::make_shared<Grid>();
    g->dim = 1;
    detail::fill_axis(*g, 0, n, L);
    return g;
}

inline std::shared_ptr<const Grid> make_grid(std::size_t n1, std::size_t n2, double L1,
                                             double L2) {
    auto g = std::make_shared<Grid>();
    g->dim = 2;
    detail::fill_axis(*g, 0, n1, L1);
    detail::fill_axis(*g, 1, n2, L2);
    return g;
}

inline std::shared_ptr<const Grid> make_grid_2d(std::size_t n, double L = 2.0 * pi) {
    return make_grid(n, n, L, L);
}

using GridPtr = std::shared_ptr<const Grid>;

}  // namespace fdb
