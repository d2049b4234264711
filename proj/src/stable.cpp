#include "lfsmlab/stable.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "lfsmlab/errors.hpp"
#include "lfsmlab/rng.hpp"

namespace lfsmlab {

namespace {

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha <= 2.0)) {
        throw DomainError("stable law: alpha must lie in (0, 2], got " + std::to_string(alpha));
    }
}

// Precomputed exponents for the Chambers-Mallows-Stuck transform.
struct CmsKernel {
    double alpha;
    double inv_alpha;
    double tail_power; // (1 - alpha) / alpha

    explicit CmsKernel(double a) : alpha(a), inv_alpha(1.0 / a), tail_power((1.0 - a) / a) {}

    double operator()(double phi, double w) const {
        if (alpha == 2.0) {
            return 2.0 * std::sqrt(w) * std::sin(phi);
        }
        if (alpha == 1.0) {
            return std::tan(phi);
        }
        const double c = std::cos(phi);
        return std::sin(alpha * phi) / std::pow(c, inv_alpha) *
               std::pow(std::cos((1.0 - alpha) * phi) / w, tail_power);
    }
};

constexpr double kEps = std::numeric_limits<double>::min();

double clamp_unit(double u) { return std::clamp(u, kEps, 1.0 - std::numeric_limits<double>::epsilon() / 2); }

} // namespace

void StableLaw::validate() const {
    check_alpha(alpha);
    if (!(scale > 0.0) || !std::isfinite(scale)) {
        throw DomainError("stable law: scale must be positive, got " + std::to_string(scale));
    }
}

double stable_from_angle(double alpha, double phi, double w) {
    check_alpha(alpha);
    return CmsKernel(alpha)(phi, w);
}

double sample_standard_stable(double alpha, double u1, double u2) {
    check_alpha(alpha);
    if (!(u1 > 0.0 && u1 < 1.0) || !(u2 > 0.0 && u2 < 1.0)) {
        throw DomainError("sample_standard_stable: uniforms must lie strictly inside (0, 1)");
    }
    const double phi = std::numbers::pi * (clamp_unit(u1) - 0.5);
    const double w = -std::log(clamp_unit(u2));
    return CmsKernel(alpha)(phi, w);
}

void fill_standard_stable(double alpha, std::mt19937_64& eng, std::span<double> out) {
    check_alpha(alpha);
    const CmsKernel cms(alpha);
    for (double& x : out) {
        const double phi = std::numbers::pi * (open_unit(eng) - 0.5);
        const double w = -std::log(open_unit(eng));
        x = cms(phi, w);
    }
}

std::vector<double> sample_stable_vector(const StableLaw& law, std::size_t n, std::uint64_t seed) {
    law.validate();
    if (n == 0) {
        throw DomainError("sample_stable_vector: n must be at least 1");
    }
    std::vector<double> out(n);
    auto eng = make_stream(seed);
    fill_standard_stable(law.alpha, eng, out);
    if (law.scale != 1.0) {
        for (double& x : out) x *= law.scale;
    }
    return out;
}

} // namespace lfsmlab
