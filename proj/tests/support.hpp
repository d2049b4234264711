#pragma once

// Reference implementations used as oracles by the tests. Nothing here calls
// into the library.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

namespace support {

/// Asymptotic Kolmogorov survival function Q(lambda) = 2 sum (-1)^(k-1) exp(-2 k^2 lambda^2).
inline double kolmogorov_q(double lambda) {
    if (lambda < 0.2) return 1.0;
    double s = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        s += (k % 2 ? 2.0 : -2.0) * term;
        if (term < 1e-18) break;
    }
    return std::clamp(s, 0.0, 1.0);
}

/// One-sample KS p-value (Stephens' small-sample correction).
inline double ks_pvalue(std::vector<double> x, const std::function<double(double)>& cdf) {
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double f = cdf(x[i]);
        d = std::max({d, (i + 1) / n - f, f - i / n});
    }
    const double sn = std::sqrt(n);
    return kolmogorov_q((sn + 0.12 + 0.11 / sn) * d);
}

/// Two-sample KS p-value, ties handled by evaluating both ECDFs after each
/// distinct value.
inline double ks2_pvalue(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == v) ++i;
        while (j < b.size() && b[j] == v) ++j;
        d = std::max(d, std::abs(i / na - j / nb));
    }
    const double ne = std::sqrt(na * nb / (na + nb));
    return kolmogorov_q((ne + 0.12 + 0.11 / ne) * d);
}

inline double normal_cdf(double x, double sd) { return 0.5 * std::erfc(-x / (sd * std::numbers::sqrt2)); }

/// Inverse-CDF draws from p(x) ~ x^-exponent on [xmin, inf).
inline std::vector<double> pareto(std::size_t n, double exponent, double xmin, std::uint64_t seed) {
    std::mt19937_64 eng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> out(n);
    for (auto& x : out) x = xmin * std::pow(1.0 - u(eng), -1.0 / (exponent - 1.0));
    return out;
}

/// Inverse-CDF standard Cauchy draws.
inline std::vector<double> cauchy(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 eng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> out(n);
    for (auto& x : out) x = std::tan(std::numbers::pi * (u(eng) - 0.5));
    return out;
}

struct RefBurst {
    std::size_t up, down;
    double duration, size;
};

/// Bursts as maximal runs of samples strictly above L that are bounded on both
/// sides by samples at or below L.
inline std::vector<RefBurst> brute_force_bursts(const std::vector<double>& y, double dt, double L) {
    std::vector<RefBurst> out;
    const std::size_t n = y.size();
    std::size_t k = 0;
    while (k < n) {
        if (!(y[k] > L)) {
            ++k;
            continue;
        }
        const std::size_t first = k;
        while (k < n && y[k] > L) ++k;
        const std::size_t last = k - 1;
        if (first == 0 || k == n) continue;
        double area = 0.0;
        for (std::size_t i = first; i <= last; ++i) area += y[i] - L;
        out.push_back({first - 1, last, static_cast<double>(last - (first - 1)) * dt, area * dt});
    }
    return out;
}

inline double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

/// Type-7 sample quantile.
inline double quantile(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    const double h = (static_cast<double>(v.size()) - 1.0) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

inline double slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double mx = mean(x), my = mean(y);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

} // namespace support
