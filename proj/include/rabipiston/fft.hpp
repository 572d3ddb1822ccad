#ifndef RABIPISTON_FFT_HPP
#define RABIPISTON_FFT_HPP

#include <complex>
#include <mutex>

#include <fftw3.h>

#include "rabipiston/errors.hpp"

namespace rabipiston::detail {

/// Owning wrapper around an in-place complex-to-complex FFTW transform.
/// Plans use FFTW_ESTIMATE so planning is deterministic run to run. Plan
/// creation/destruction is serialized globally (FFTW requirement); execution
/// on distinct instances is safe concurrently.
class Fft1D {
  public:
    explicit Fft1D(int n) : n_(n) {
        std::lock_guard<std::mutex> lock(plan_mutex());
        buf_ = fftw_alloc_complex(static_cast<std::size_t>(n));
        if (!buf_) throw NumericalError("fftw_alloc_complex failed");
        fwd_ = fftw_plan_dft_1d(n, buf_, buf_, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft_1d(n, buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);
        if (!fwd_ || !bwd_) throw NumericalError("fftw planning failed");
    }

    ~Fft1D() {
        std::lock_guard<std::mutex> lock(plan_mutex());
        if (fwd_) fftw_destroy_plan(fwd_);
        if (bwd_) fftw_destroy_plan(bwd_);
        if (buf_) fftw_free(buf_);
    }

    Fft1D(const Fft1D&) = delete;
    Fft1D& operator=(const Fft1D&) = delete;

    int n() const { return n_; }

    std::complex<double>* data() { return reinterpret_cast<std::complex<double>*>(buf_); }
    const std::complex<double>* data() const {
        return reinterpret_cast<const std::complex<double>*>(buf_);
    }

    void forward() { fftw_execute(fwd_); }
    /// Unnormalized inverse; callers fold the 1/n into their spectral tables.
    void backward() { fftw_execute(bwd_); }

  private:
    static std::mutex& plan_mutex() {
        static std::mutex m;
        return m;
    }

    int n_;
    fftw_complex* buf_ = nullptr;
    fftw_plan fwd_ = nullptr;
    fftw_plan bwd_ = nullptr;
};

}  // namespace rabipiston::detail

#endif
