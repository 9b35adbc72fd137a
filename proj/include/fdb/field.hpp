#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include "fdb/grid.hpp"

namespace fdb {

using Complex = std::complex<double>;
using Spectrum = std::vector<Complex>;

// Real scalar field sampled on a periodic grid.
struct RealField {
    GridPtr grid;
    std::vector<double> v;

    RealField() = default;
    explicit RealField(GridPtr g) : grid(std::move(g)), v(grid->size(), 0.0) {}
    RealField(GridPtr g, std::vector<double> values) : grid(std::move(g)), v(std::move(values)) {
        if (v.size() != grid->size()) throw std::invalid_argument("field size mismatch");
    }

    std::size_t size() const { return v.size(); }
    double& operator[](std::size_t i) { return v[i]; }
    double operator[](std::size_t i) const { return v[i]; }
};

inline void check_same_grid(const RealField& a, const RealField& b) {
    if (a.grid.get() == b.grid.get()) return;
    const Grid &ga = *a.grid, &gb = *b.grid;
    if (ga.dim != gb.dim || ga.n != gb.n || ga.length != gb.length)
        throw std::invalid_argument("fields live on different grids");
}

// Sample f(x) (1D) or f(x1,x2) (2D) on the grid.
inline RealField sample(GridPtr g, const std::function<double(double)>& f) {
    RealField out(g);
    for (std::size_t i = 0; i < g->n[0]; ++i) out.v[i] = f(g->coord(0, i));
    return out;
}

inline RealField sample2d(GridPtr g, const std::function<double(double, double)>& f) {
    RealField out(g);
    for (std::size_t i = 0; i < g->n[0]; ++i)
        for (std::size_t j = 0; j < g->n[1]; ++j)
            out.v[g->idx(i, j)] = f(g->coord(0, i), g->coord(1, j));
    return out;
}

inline double field_min(const RealField& f) { return *std::min_element(f.v.begin(), f.v.end()); }
inline double field_max(const RealField& f) { return *std::max_element(f.v.begin(), f.v.end()); }

inline double max_abs(const RealField& f) {
    double m = 0.0;
    for (double x : f.v) m = std::max(m, std::abs(x));
    return m;
}

inline bool all_finite(const RealField& f) {
    for (double x : f.v)
        if (!std::isfinite(x)) return false;
    return true;
}

inline double mean(const RealField& f) {
    double s = 0.0;
    for (double x : f.v) s += x;
    return s / static_cast<double>(f.v.size());
}

// Raised when a state stops being representable (NaN/Inf or norm explosion).
struct BlowupError : std::runtime_error {
    double t;
    explicit BlowupError(double time)
        : std::runtime_error("numerical blow-up at t=" + std::to_string(time)), t(time) {}
};

// Raised when a multiplier declared real-output produces a complex field.
struct ParityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace fdb
