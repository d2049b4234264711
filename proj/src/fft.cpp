#include "fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <new>

namespace lfsmlab::detail {

namespace {
// The FFTW planner is not thread safe; execution is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
} // namespace

RealFft::RealFft(std::size_t n) : n_(n) {
    real_ = static_cast<double*>(fftw_malloc(sizeof(double) * n));
    spec_ = reinterpret_cast<std::complex<double>*>(fftw_malloc(sizeof(fftw_complex) * (n / 2 + 1)));
    if (real_ == nullptr || spec_ == nullptr) {
        fftw_free(real_);
        fftw_free(spec_);
        throw std::bad_alloc();
    }
    std::lock_guard lock(planner_mutex());
    const int len = static_cast<int>(n);
    auto* cspec = reinterpret_cast<fftw_complex*>(spec_);
    fwd_ = fftw_plan_dft_r2c_1d(len, real_, cspec, FFTW_ESTIMATE);
    inv_ = fftw_plan_dft_c2r_1d(len, cspec, real_, FFTW_ESTIMATE);
}

RealFft::~RealFft() {
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
        fftw_destroy_plan(static_cast<fftw_plan>(inv_));
    }
    fftw_free(real_);
    fftw_free(spec_);
}

void RealFft::forward() { fftw_execute(static_cast<fftw_plan>(fwd_)); }

void RealFft::inverse() { fftw_execute(static_cast<fftw_plan>(inv_)); }

} // namespace lfsmlab::detail
