#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace lfsmlab {

/// Symmetric alpha-stable law with characteristic function
/// exp(-scale^alpha |k|^alpha). Skewness and location are fixed at zero.
/// Note alpha = 2, scale = 1 is a Gaussian with variance 2.
struct StableLaw {
    double alpha = 2.0;
    double scale = 1.0;

    /// Throws DomainError unless 0 < alpha <= 2 and scale > 0.
    void validate() const;
};

/// Standard variate from the angle phi in (-pi/2, pi/2) and a unit exponential w.
/// Odd in phi: stable_from_angle(a, -phi, w) == -stable_from_angle(a, phi, w).
double stable_from_angle(double alpha, double phi, double w);

/// Two-uniform transform to a standard symmetric stable variate (cf exp(-|k|^alpha)).
/// u1 and u2 are clamped into [eps, 1 - eps] before use.
double sample_standard_stable(double alpha, double u1, double u2);

/// n i.i.d. variates from `law`. Identical (law, n, seed) gives identical output.
std::vector<double> sample_stable_vector(const StableLaw& law, std::size_t n, std::uint64_t seed);

/// Fill `out` with standard variates drawn from an existing engine.
void fill_standard_stable(double alpha, std::mt19937_64& eng, std::span<double> out);

} // namespace lfsmlab
