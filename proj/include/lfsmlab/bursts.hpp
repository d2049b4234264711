#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lfsmlab/lfsm.hpp"
#include "lfsmlab/tail_fit.hpp"

namespace lfsmlab {

/// One excursion above a fixed threshold.
///
/// up_index is the last sample at or below the threshold before the excursion,
/// down_index the last sample above it. Every sample in (up_index, down_index]
/// lies above the threshold.
struct Burst {
    std::size_t up_index = 0;
    std::size_t down_index = 0;
    double duration = 0.0; ///< (down_index - up_index) * dt
    double size = 0.0;     ///< sum over (up_index, down_index] of (y - threshold) * dt
    double threshold = 0.0;

    bool operator==(const Burst&) const = default;
};

struct BurstEnsemble {
    std::vector<Burst> bursts;
    double threshold = 0.0;
    double dt = 1.0;

    std::size_t size() const noexcept { return bursts.size(); }
    bool empty() const noexcept { return bursts.empty(); }
    std::vector<double> durations() const;
    std::vector<double> sizes() const;
};

/// Pair each upward crossing (y_k <= L < y_{k+1}) with the following downward
/// crossing (y_k > L >= y_{k+1}). Excursions still open at either end of the
/// record are dropped.
BurstEnsemble find_bursts(std::span<const double> values, double dt, double threshold);

inline BurstEnsemble find_bursts(const SamplePath& path, double threshold) {
    return find_bursts(path.values, path.dt, threshold);
}

/// Ensembles smaller than this are fitted but flagged low-confidence.
inline constexpr std::size_t kMinBursts = 500;

/// Power-law tail of the duration sample (pdf exponent, p(tau) ~ tau^-beta).
TailFit duration_exponent(const BurstEnsemble& ens, std::size_t min_bursts = kMinBursts);

/// Power-law tail of the size sample (pdf exponent magnitude |gamma|).
TailFit size_exponent(const BurstEnsemble& ens, std::size_t min_bursts = kMinBursts);

inline constexpr std::size_t kMinBurstsForPsi = 100;
inline constexpr double kMinDecadesForPsi = 1.5;

/// Slope psi of log(size) against log(duration), fitted through binned
/// medians on log-spaced duration bins.
double size_duration_exponent(const BurstEnsemble& ens);

/// Reference scaling exponents for self-similarity exponent H.
struct PredictedExponents {
    double beta;  ///< duration: 2 - H
    double gamma; ///< size magnitude: 2 / (1 + H)
    double psi;   ///< size against duration: 1 + H
};

PredictedExponents predicted_exponents(double hurst);

/// Number of threshold crossings (sign changes of y - L, with y == L counted
/// as below) among the first `window + 1` samples.
std::size_t crossing_count(std::span<const double> values, double threshold, std::size_t window);

} // namespace lfsmlab
