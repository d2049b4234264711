#pragma once

#include <complex>
#include <cstddef>
#include <span>

// Thin RAII wrapper over an FFTW real-to-complex / complex-to-real plan pair.
// Plans use FFTW_ESTIMATE so the algorithm choice, and therefore the output
// bits, do not depend on machine timing.
namespace lfsmlab::detail {

class RealFft {
public:
    explicit RealFft(std::size_t n);
    ~RealFft();
    RealFft(const RealFft&) = delete;
    RealFft& operator=(const RealFft&) = delete;

    std::size_t size() const noexcept { return n_; }
    std::size_t spectrum_size() const noexcept { return n_ / 2 + 1; }

    std::span<double> real() noexcept { return {real_, n_}; }
    std::span<std::complex<double>> spectrum() noexcept { return {spec_, n_ / 2 + 1}; }

    /// real() -> spectrum()
    void forward();
    /// spectrum() -> real(), unnormalized (result is n times the inverse DFT).
    /// Overwrites spectrum().
    void inverse();

private:
    std::size_t n_;
    double* real_ = nullptr;
    std::complex<double>* spec_ = nullptr;
    void* fwd_ = nullptr;
    void* inv_ = nullptr;
};

} // namespace lfsmlab::detail
