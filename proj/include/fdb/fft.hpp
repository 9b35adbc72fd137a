#pragma once

#include <fftw3.h>

#include <cstring>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include "fdb/field.hpp"
#include "fdb/grid.hpp"

namespace fdb {

// Discrete transform convention:
//   forward:  fhat(k) = (1/N) sum_x f(x) e^{-i k x}   (fhat(0) is the mean)
//   inverse:  f(x)    =       sum_k fhat(k) e^{i k x}
// so inverse(forward(f)) == f and Parseval reads
//   sum_x |f|^2 = N sum_k |fhat|^2,  i.e.  ||f||_{L2}^2 = L^dim sum_k |fhat|^2.
//
// Plans are complex-to-complex FFTW_ESTIMATE|FFTW_UNALIGNED (deterministic,
// safe for new-array execution on any buffer) and cached per grid shape.
// The cache is locked; execution is re-entrant.
class Transformer {
  public:
    static const Transformer& get(const Grid& g) {
        static std::mutex mtx;
        static std::map<std::tuple<int, std::size_t, std::size_t>, std::unique_ptr<Transformer>>
            cache;
        std::lock_guard<std::mutex> lock(mtx);
        auto key = std::make_tuple(g.dim, g.n[0], g.dim == 2 ? g.n[1] : 0);
        auto it = cache.find(key);
        if (it == cache.end())
            it = cache.emplace(key, std::unique_ptr<Transformer>(new Transformer(g))).first;
        return *it->second;
    }

    // out := forward(in), normalized by 1/N
    void forward(const Complex* in, Complex* out) const {
        scratch_execute(fwd_, in, out);
        const double inv = 1.0 / static_cast<double>(total_);
        for (std::size_t i = 0; i < total_; ++i) out[i] *= inv;
    }

    // out := inverse(in), unnormalized synthesis
    void inverse(const Complex* in, Complex* out) const { scratch_execute(bwd_, in, out); }

    std::size_t size() const { return total_; }

    ~Transformer() {
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
        fftw_free(buf_a_);
        fftw_free(buf_b_);
    }

    Transformer(const Transformer&) = delete;
    Transformer& operator=(const Transformer&) = delete;

  private:
    explicit Transformer(const Grid& g) : total_(g.size()) {
        buf_a_ = fftw_alloc_complex(total_);
        buf_b_ = fftw_alloc_complex(total_);
        const unsigned flags = FFTW_ESTIMATE;
        if (g.dim == 1) {
            fwd_ = fftw_plan_dft_1d(static_cast<int>(g.n[0]), buf_a_, buf_b_, FFTW_FORWARD, flags);
            bwd_ = fftw_plan_dft_1d(static_cast<int>(g.n[0]), buf_a_, buf_b_, FFTW_BACKWARD, flags);
        } else {
            fwd_ = fftw_plan_dft_2d(static_cast<int>(g.n[0]), static_cast<int>(g.n[1]), buf_a_,
                                    buf_b_, FFTW_FORWARD, flags);
            bwd_ = fftw_plan_dft_2d(static_cast<int>(g.n[0]), static_cast<int>(g.n[1]), buf_a_,
                                    buf_b_, FFTW_BACKWARD, flags);
        }
    }

    struct AlignedScratch {
        fftw_complex* p = nullptr;
        std::size_t cap = 0;
        ~AlignedScratch() {
            if (p) fftw_free(p);
        }
        void ensure(std::size_t n) {
            if (cap < n) {
                if (p) fftw_free(p);
                p = fftw_alloc_complex(n);
                cap = n;
            }
        }
    };

    // Bounce through fftw-aligned thread-local scratch: new-array execution
    // only requires matching alignment, and fftw_alloc always yields it.
    // Per-thread buffers keep execution re-entrant.
    void scratch_execute(fftw_plan p, const Complex* in, Complex* out) const {
        static thread_local AlignedScratch ta, tb;
        ta.ensure(total_);
        tb.ensure(total_);
        // std::complex<double> and fftw_complex are layout-compatible
        std::memcpy(static_cast<void*>(ta.p), static_cast<const void*>(in),
                    total_ * sizeof(fftw_complex));
        fftw_execute_dft(p, ta.p, tb.p);
        std::memcpy(static_cast<void*>(out), static_cast<const void*>(tb.p),
                    total_ * sizeof(fftw_complex));
    }

    std::size_t total_;
    fftw_complex* buf_a_ = nullptr;
    fftw_complex* buf_b_ = nullptr;
    fftw_plan fwd_ = nullptr;
    fftw_plan bwd_ = nullptr;
};

inline Spectrum to_spectrum(const RealField& f) {
    const auto& tr = Transformer::get(*f.grid);
    Spectrum in(f.size()), out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) in[i] = Complex(f.v[i], 0.0);
    tr.forward(in.data(), out.data());
    return out;
}

// Callers that compose verified-parity operators can skip the realness check;
// a field that is round-off dust has arbitrary parity and only the caller
// knows the meaningful comparison scale.
inline constexpr double realness_unchecked = std::numeric_limits<double>::infinity();

// Synthesis back to a real field.  With abs_tol < 0 the imaginary residue is
// checked against 1e-9 * max|f| (appropriate when the output has the scale of
// the input); otherwise abs_tol is an absolute residue threshold, and
// realness_unchecked disables the check.
inline RealField to_field(GridPtr g, const Spectrum& spec, double abs_tol = -1.0) {
    const auto& tr = Transformer::get(*g);
    Spectrum out(spec.size());
    tr.inverse(spec.data(), out.data());
    RealField f(g);
    double max_im = 0.0, max_re = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        f.v[i] = out[i].real();
        max_im = std::max(max_im, std::abs(out[i].imag()));
        max_re = std::max(max_re, std::abs(out[i].real()));
    }
    const double limit = abs_tol < 0.0 ? 1e-9 * std::max(max_re, 1e-300) : abs_tol;
    if (max_im > limit)
        throw ParityError("inverse transform produced imaginary residue " +
                          std::to_string(max_im) + " against magnitude " + std::to_string(max_re));
    return f;
}

}  // namespace fdb
