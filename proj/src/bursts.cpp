#include "lfsmlab/bursts.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lfsmlab/errors.hpp"

namespace lfsmlab {

std::vector<double> BurstEnsemble::durations() const {
    std::vector<double> out;
    out.reserve(bursts.size());
    for (const auto& b : bursts) out.push_back(b.duration);
    return out;
}

std::vector<double> BurstEnsemble::sizes() const {
    std::vector<double> out;
    out.reserve(bursts.size());
    for (const auto& b : bursts) out.push_back(b.size);
    return out;
}

BurstEnsemble find_bursts(std::span<const double> values, double dt, double threshold) {
    if (values.size() < 2) {
        throw DomainError("find_bursts: path must contain at least two samples");
    }
    BurstEnsemble ens;
    ens.threshold = threshold;
    ens.dt = dt;

    bool open = false;
    std::size_t up = 0;
    double area = 0.0;
    for (std::size_t k = 0; k + 1 < values.size(); ++k) {
        const double y0 = values[k];
        const double y1 = values[k + 1];
        if (!open) {
            if (y0 <= threshold && threshold < y1) {
                open = true;
                up = k;
                area = 0.0;
            }
            continue;
        }
        area += y0 - threshold;
        if (y1 <= threshold) {
            ens.bursts.push_back(Burst{up, k, static_cast<double>(k - up) * dt, area * dt, threshold});
            open = false;
        }
    }
    return ens;
}

namespace {

TailFit burst_tail(std::vector<double> sample, std::size_t min_bursts, const char* what) {
    if (sample.empty()) {
        throw EstimationError(std::string(what) + ": empty burst ensemble");
    }
    if (std::all_of(sample.begin(), sample.end(), [&](double x) { return x == sample.front(); })) {
        throw EstimationError(std::string(what) + ": all values identical, tail is degenerate");
    }
    TailFit fit = fit_tail(sample);
    fit.low_confidence = sample.size() < min_bursts;
    return fit;
}

} // namespace

TailFit duration_exponent(const BurstEnsemble& ens, std::size_t min_bursts) {
    return burst_tail(ens.durations(), min_bursts, "duration_exponent");
}

TailFit size_exponent(const BurstEnsemble& ens, std::size_t min_bursts) {
    return burst_tail(ens.sizes(), min_bursts, "size_exponent");
}

double size_duration_exponent(const BurstEnsemble& ens) {
    if (ens.size() < kMinBurstsForPsi) {
        throw EstimationError("size_duration_exponent: need at least " + std::to_string(kMinBurstsForPsi) +
                              " bursts, got " + std::to_string(ens.size()));
    }
    double tmin = ens.bursts.front().duration, tmax = tmin;
    for (const auto& b : ens.bursts) {
        tmin = std::min(tmin, b.duration);
        tmax = std::max(tmax, b.duration);
    }
    const double decades = std::log10(tmax / tmin);
    if (!(decades >= kMinDecadesForPsi)) {
        throw EstimationError("size_duration_exponent: durations span only " + std::to_string(decades) +
                              " decades");
    }

    // Four bins per decade; bins with fewer than three bursts are skipped.
    constexpr double kBinsPerDecade = 4.0;
    constexpr std::size_t kMinPerBin = 3;
    const auto nbins = static_cast<std::size_t>(std::ceil(decades * kBinsPerDecade));
    const double lo = std::log10(tmin);
    const double width = decades / static_cast<double>(nbins);
    std::vector<std::vector<const Burst*>> bins(nbins);
    for (const auto& b : ens.bursts) {
        auto idx = static_cast<std::size_t>((std::log10(b.duration) - lo) / width);
        bins[std::min(idx, nbins - 1)].push_back(&b);
    }

    // Lower medians, so each bin contributes an actual (duration, size) pair
    // when size is monotone in duration.
    auto lower_median = [](std::vector<double> v) {
        const auto mid = (v.size() - 1) / 2;
        std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
        return v[mid];
    };
    std::vector<double> lx, ly;
    for (const auto& bin : bins) {
        if (bin.size() < kMinPerBin) continue;
        std::vector<double> t, s;
        for (const Burst* b : bin) {
            t.push_back(b->duration);
            s.push_back(b->size);
        }
        const double mt = lower_median(std::move(t));
        const double ms = lower_median(std::move(s));
        if (!(ms > 0.0)) continue;
        lx.push_back(std::log(mt));
        ly.push_back(std::log(ms));
    }
    if (lx.size() < 3) {
        throw EstimationError("size_duration_exponent: fewer than three populated duration bins");
    }
    return ols_slope(lx, ly);
}

PredictedExponents predicted_exponents(double hurst) {
    if (!(hurst > 0.0 && hurst < 1.0)) {
        throw DomainError("predicted_exponents: hurst must lie in (0, 1)");
    }
    return {2.0 - hurst, 2.0 / (1.0 + hurst), 1.0 + hurst};
}

std::size_t crossing_count(std::span<const double> values, double threshold, std::size_t window) {
    const std::size_t last = std::min(window, values.empty() ? 0 : values.size() - 1);
    std::size_t count = 0;
    for (std::size_t k = 0; k < last; ++k) {
        const bool above0 = values[k] > threshold;
        const bool above1 = values[k + 1] > threshold;
        if (above0 != above1) ++count;
    }
    return count;
}

} // namespace lfsmlab
