#include "lfsmlab/tail_fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "lfsmlab/errors.hpp"

namespace lfsmlab {

namespace {

void check_positive(std::span<const double> samples) {
    for (double x : samples) {
        if (!(x > 0.0) || !std::isfinite(x)) {
            throw DomainError("tail fit: samples must be positive and finite");
        }
    }
}

// KS distance over an ascending tail given logs of the tail values.
double ks_sorted_logs(std::span<const double> log_tail, double log_xmin, double exponent) {
    const double n = static_cast<double>(log_tail.size());
    const double slope = 1.0 - exponent;
    double d = 0.0;
    for (std::size_t i = 0; i < log_tail.size(); ++i) {
        const double cdf = -std::expm1(slope * (log_tail[i] - log_xmin));
        const double lo = static_cast<double>(i) / n;
        const double hi = static_cast<double>(i + 1) / n;
        d = std::max({d, hi - cdf, cdf - lo});
    }
    return d;
}

} // namespace

ExponentEstimate fit_exponent(std::span<const double> samples, double xmin) {
    if (!(xmin > 0.0)) {
        throw DomainError("fit_exponent: xmin must be positive");
    }
    double sum_log = 0.0;
    std::size_t n = 0;
    for (double x : samples) {
        if (x >= xmin) {
            sum_log += std::log(x / xmin);
            ++n;
        }
    }
    if (n < 2) {
        throw EstimationError("fit_exponent: fewer than two samples at or above xmin");
    }
    if (!(sum_log > 0.0)) {
        throw EstimationError("fit_exponent: all tail samples equal xmin, estimate diverges");
    }
    const double nd = static_cast<double>(n);
    const double exponent = 1.0 + nd / sum_log;
    return {exponent, (exponent - 1.0) / std::sqrt(nd)};
}

double ks_distance(std::span<const double> samples, double xmin, double exponent) {
    if (!(xmin > 0.0)) {
        throw DomainError("ks_distance: xmin must be positive");
    }
    std::vector<double> logs;
    for (double x : samples) {
        if (x >= xmin) logs.push_back(std::log(x));
    }
    if (logs.empty()) {
        throw EstimationError("ks_distance: no samples at or above xmin");
    }
    std::sort(logs.begin(), logs.end());
    return ks_sorted_logs(logs, std::log(xmin), exponent);
}

double select_xmin(std::span<const double> samples, std::size_t min_tail) {
    check_positive(samples);
    if (samples.size() < min_tail || samples.size() < 2) {
        throw EstimationError("select_xmin: need at least " + std::to_string(min_tail) + " samples, got " +
                              std::to_string(samples.size()));
    }
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> logs(sorted.size());
    std::transform(sorted.begin(), sorted.end(), logs.begin(), [](double x) { return std::log(x); });

    // suffix[i] = sum of logs[i..]
    std::vector<double> suffix(logs.size() + 1, 0.0);
    for (std::size_t i = logs.size(); i-- > 0;) suffix[i] = suffix[i + 1] + logs[i];

    // First index of each distinct value that still leaves min_tail samples.
    std::vector<std::size_t> starts;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (sorted.size() - i < std::max<std::size_t>(min_tail, 2)) break;
        if (i == 0 || sorted[i] != sorted[i - 1]) starts.push_back(i);
    }
    if (starts.size() > kMaxXminCandidates) {
        std::vector<std::size_t> thinned;
        const double step = static_cast<double>(starts.size() - 1) / static_cast<double>(kMaxXminCandidates - 1);
        for (std::size_t k = 0; k < kMaxXminCandidates; ++k) {
            thinned.push_back(starts[static_cast<std::size_t>(std::llround(step * static_cast<double>(k)))]);
        }
        thinned.erase(std::unique(thinned.begin(), thinned.end()), thinned.end());
        starts = std::move(thinned);
    }

    double best_ks = std::numeric_limits<double>::infinity();
    double best_xmin = 0.0;
    for (std::size_t i : starts) {
        if (sorted[i] == sorted.back()) break; // constant tail
        const double nt = static_cast<double>(sorted.size() - i);
        const double sum_log = suffix[i] - nt * logs[i];
        if (!(sum_log > 0.0)) continue;
        const double exponent = 1.0 + nt / sum_log;
        const double d = ks_sorted_logs(std::span(logs).subspan(i), logs[i], exponent);
        if (d < best_ks) {
            best_ks = d;
            best_xmin = sorted[i];
        }
    }
    if (!std::isfinite(best_ks)) {
        throw EstimationError("select_xmin: no cutoff with a non-degenerate tail of at least " +
                              std::to_string(min_tail) + " samples");
    }
    return best_xmin;
}

TailFit fit_tail_at(std::span<const double> samples, double xmin) {
    const auto est = fit_exponent(samples, xmin);
    TailFit fit;
    fit.exponent = est.exponent;
    fit.std_error = est.std_error;
    fit.xmin = xmin;
    fit.n_tail = static_cast<std::size_t>(
        std::count_if(samples.begin(), samples.end(), [xmin](double x) { return x >= xmin; }));
    fit.ks = ks_distance(samples, xmin, est.exponent);
    return fit;
}

TailFit fit_tail(std::span<const double> samples, std::size_t min_tail) {
    return fit_tail_at(samples, select_xmin(samples, min_tail));
}

} // namespace lfsmlab
