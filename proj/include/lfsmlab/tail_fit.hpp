#pragma once

#include <cstddef>
#include <span>

namespace lfsmlab {

/// Continuous power-law tail p(x) ~ x^-exponent for x >= xmin.
/// `exponent` follows the pdf convention; the complementary CDF decays with
/// exponent - 1.
struct TailFit {
    double exponent = 0.0;
    double xmin = 0.0;
    double ks = 0.0;
    std::size_t n_tail = 0;
    double std_error = 0.0;
    /// Set by burst-level fits when the ensemble is below the confidence floor.
    bool low_confidence = false;
};

struct ExponentEstimate {
    double exponent;
    double std_error;
};

/// Continuous MLE: exponent = 1 + n / sum(ln(x_i / xmin)) over samples >= xmin,
/// stderr = (exponent - 1) / sqrt(n).
ExponentEstimate fit_exponent(std::span<const double> samples, double xmin);

/// Sup distance between the empirical CDF of samples >= xmin and
/// 1 - (x / xmin)^(1 - exponent).
double ks_distance(std::span<const double> samples, double xmin, double exponent);

/// Default tail-size floor for xmin candidates.
inline constexpr std::size_t kMinTail = 50;

/// Cap on the number of xmin candidates scanned; candidates are spread evenly
/// over the distinct sample values when there are more.
inline constexpr std::size_t kMaxXminCandidates = 2000;

/// xmin among the sample values minimizing the KS distance of the fitted tail,
/// subject to at least `min_tail` samples >= xmin.
double select_xmin(std::span<const double> samples, std::size_t min_tail = kMinTail);

/// select_xmin followed by fit_exponent and ks_distance at the chosen cutoff.
TailFit fit_tail(std::span<const double> samples, std::size_t min_tail = kMinTail);

/// fit_exponent and ks_distance at a caller-supplied cutoff.
TailFit fit_tail_at(std::span<const double> samples, double xmin);

} // namespace lfsmlab
