#include "lfsmlab/lfsm.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <limits>
#include <new>
#include <string>

#include "fft.hpp"
#include "lfsmlab/errors.hpp"
#include "lfsmlab/rng.hpp"
#include "lfsmlab/stable.hpp"

namespace lfsmlab {

namespace {

constexpr double kMemorylessTol = 1e-12;

// Largest workspace (bytes) synthesize_lfsm will allocate.
constexpr double kMaxWorkspaceBytes = 3.0 * (1ULL << 30);
constexpr double kMaxPathBytes = 16.0 * (1ULL << 30);

// (x)^d - (x - 1)^d for x = j/m > 1, written to avoid cancellation.
double kernel_difference(double j, double m, double d) {
    const double x = j / m;
    return -std::pow(x, d) * std::expm1(d * std::log1p(-m / j));
}

std::vector<double> causal_taps(double d, std::size_t m, std::size_t M) {
    const std::size_t len = m * M;
    std::vector<double> w(len);
    const double md = static_cast<double>(m);
    for (std::size_t j = 1; j <= len; ++j) {
        const double jd = static_cast<double>(j);
        w[j - 1] = (j <= m) ? std::pow(jd / md, d) : kernel_difference(jd, md, d);
    }
    return w;
}

void normalize_alpha(std::vector<double>& w, double alpha) {
    const double norm = std::pow(alpha_norm(w, alpha), 1.0 / alpha);
    if (!(norm > 0.0) || !std::isfinite(norm)) {
        throw DomainError("kernel_weights: kernel has zero or non-finite alpha-norm");
    }
    for (double& x : w) x /= norm;
}

} // namespace

bool LfsmSpec::is_memoryless() const noexcept { return std::abs(memory_exponent()) < kMemorylessTol; }

void LfsmSpec::validate() const {
    if (!(hurst > 0.0 && hurst < 1.0)) {
        throw DomainError("lfsm: hurst must lie in (0, 1), got " + std::to_string(hurst));
    }
    if (!(alpha > 0.0 && alpha <= 2.0)) {
        throw DomainError("lfsm: alpha must lie in (0, 2], got " + std::to_string(alpha));
    }
    if (b1 == 0.0 && b2 == 0.0) {
        throw DomainError("lfsm: kernel coefficients b1, b2 are both zero");
    }
    if (!std::isfinite(b1) || !std::isfinite(b2)) {
        throw DomainError("lfsm: kernel coefficients must be finite");
    }
    if (!(scale > 0.0) || !std::isfinite(scale)) {
        throw DomainError("lfsm: scale must be positive");
    }
    if (!(std::abs(memory_exponent()) < 1.0)) {
        throw DomainError("lfsm: memory exponent d = H - 1/alpha must satisfy |d| < 1, got " +
                          std::to_string(memory_exponent()));
    }
}

void SynthesisGrid::validate() const {
    if (n < 1 || mesh < 1 || truncation < 1) {
        throw DomainError("synthesis grid: n, mesh and truncation must be at least 1");
    }
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw DomainError("synthesis grid: dt must be positive");
    }
    constexpr auto kMax = std::numeric_limits<std::size_t>::max();
    if (truncation > kMax - n || mesh > kMax / (truncation + n)) {
        throw CapacityError("synthesis grid: mesh * (truncation + n) overflows");
    }
}

double alpha_norm(std::span<const double> weights, double alpha) {
    double s = 0.0;
    for (double x : weights) s += std::pow(std::abs(x), alpha);
    return s;
}

KernelTaps kernel_weights(const LfsmSpec& spec, std::size_t mesh, std::size_t truncation) {
    spec.validate();
    if (mesh < 1 || truncation < 1) {
        throw DomainError("kernel_weights: mesh and truncation must be at least 1");
    }
    KernelTaps taps;
    if (spec.is_memoryless()) {
        taps.weights = {1.0};
        taps.first_offset = 1;
        taps.degenerate = true;
        return taps;
    }
    const double d = spec.memory_exponent();
    const std::vector<double> causal = causal_taps(d, mesh, truncation);
    if (spec.b2 == 0.0) {
        taps.weights = causal;
        if (spec.b1 != 1.0) {
            for (double& x : taps.weights) x *= spec.b1;
        }
        taps.first_offset = 1;
    } else {
        // Anticausal branch: tap at offset j is -w(m - j), so offsets run from
        // m - m*M up to m*M.
        const auto m = static_cast<std::ptrdiff_t>(mesh);
        const auto len = static_cast<std::ptrdiff_t>(causal.size());
        const std::ptrdiff_t lo = m - len;
        const std::ptrdiff_t hi = len;
        taps.weights.assign(static_cast<std::size_t>(hi - lo + 1), 0.0);
        for (std::ptrdiff_t j = lo; j <= hi; ++j) {
            double v = 0.0;
            if (j >= 1) v += spec.b1 * causal[static_cast<std::size_t>(j - 1)];
            const std::ptrdiff_t mirror = m - j;
            if (mirror >= 1 && mirror <= len) v -= spec.b2 * causal[static_cast<std::size_t>(mirror - 1)];
            taps.weights[static_cast<std::size_t>(j - lo)] = v;
        }
        taps.first_offset = lo;
    }
    normalize_alpha(taps.weights, spec.alpha);
    return taps;
}

SamplePath synthesize_lfsm(const LfsmSpec& spec, const SynthesisGrid& grid) {
    spec.validate();
    grid.validate();

    SamplePath path;
    path.dt = grid.dt;
    path.spec = spec;
    path.grid = grid;
    if (static_cast<double>(grid.n + 1) * sizeof(double) > kMaxPathBytes) {
        throw CapacityError("synthesize_lfsm: path of " + std::to_string(grid.n) + " steps exceeds the memory limit");
    }
    try {
        path.values.assign(grid.n + 1, 0.0);
    } catch (const std::bad_alloc&) {
        throw CapacityError("synthesize_lfsm: cannot allocate a path of " + std::to_string(grid.n) + " steps");
    }

    const double step_scale = spec.scale * std::pow(grid.dt, spec.hurst);
    const KernelTaps taps = kernel_weights(spec, grid.mesh, grid.truncation);

    if (taps.degenerate) {
        auto eng = make_stream(grid.seed, 0);
        std::vector<double> noise(grid.n);
        fill_standard_stable(spec.alpha, eng, noise);
        double acc = 0.0;
        for (std::size_t i = 0; i < grid.n; ++i) {
            acc += step_scale * noise[i];
            path.values[i + 1] = acc;
        }
        return path;
    }

    // Polyphase split: with k = m*q + r the noise is
    //   Y(i) = sum_r sum_q h_r[q] x_r[i - q],   h_r[q] = h[m*q + r],
    // where x_r[p] = L(m*p - first_offset - r) are disjoint i.i.d. streams.
    const std::size_t m = grid.mesh;
    const std::size_t K = taps.weights.size();
    const std::size_t Q = (K + m - 1) / m;
    const std::size_t block = std::min(std::max<std::size_t>(4096, std::bit_ceil(4 * Q)),
                                       std::bit_ceil(grid.n + Q));
    const std::size_t valid = block - Q + 1;
    const std::size_t bins = block / 2 + 1;

    const double workspace = static_cast<double>(m) *
                             (static_cast<double>(bins) * sizeof(std::complex<double>) +
                              static_cast<double>(Q) * sizeof(double));
    if (workspace > kMaxWorkspaceBytes) {
        throw CapacityError("synthesize_lfsm: workspace of " + std::to_string(workspace / (1 << 20)) +
                            " MiB exceeds the limit; reduce mesh or truncation");
    }

    detail::RealFft fft(block);

    std::vector<std::complex<double>> kernel_spectra(m * bins);
    for (std::size_t r = 0; r < m; ++r) {
        auto buf = fft.real();
        std::fill(buf.begin(), buf.end(), 0.0);
        for (std::size_t q = 0; q < Q; ++q) {
            const std::size_t k = m * q + r;
            if (k < K) buf[q] = taps.weights[k];
        }
        fft.forward();
        std::copy(fft.spectrum().begin(), fft.spectrum().end(), kernel_spectra.begin() + r * bins);
    }

    std::vector<std::mt19937_64> streams;
    streams.reserve(m);
    for (std::size_t r = 0; r < m; ++r) streams.push_back(make_stream(grid.seed, r + 1));

    // Per-residue carry of the last Q-1 innovations (overlap-save history).
    std::vector<double> history(m * (Q - 1));
    std::vector<std::complex<double>> acc(bins);
    const double inv_block = 1.0 / static_cast<double>(block);

    double level = 0.0;
    bool first_block = true;
    for (std::size_t i0 = 1; i0 <= grid.n; i0 += valid) {
        std::fill(acc.begin(), acc.end(), std::complex<double>{});
        for (std::size_t r = 0; r < m; ++r) {
            auto buf = fft.real();
            double* hist = history.data() + r * (Q - 1);
            if (first_block) {
                fill_standard_stable(spec.alpha, streams[r], buf.first(Q - 1));
            } else {
                std::copy(hist, hist + (Q - 1), buf.begin());
            }
            fill_standard_stable(spec.alpha, streams[r], buf.subspan(Q - 1));
            std::copy(buf.end() - static_cast<std::ptrdiff_t>(Q - 1), buf.end(), hist);
            fft.forward();
            const auto spec_r = fft.spectrum();
            const std::complex<double>* ker = kernel_spectra.data() + r * bins;
            for (std::size_t b = 0; b < bins; ++b) acc[b] += spec_r[b] * ker[b];
        }
        first_block = false;
        std::copy(acc.begin(), acc.end(), fft.spectrum().begin());
        fft.inverse();
        const auto out = fft.real();
        const std::size_t count = std::min(valid, grid.n - i0 + 1);
        for (std::size_t t = 0; t < count; ++t) {
            level += step_scale * out[Q - 1 + t] * inv_block;
            path.values[i0 + t] = level;
        }
    }
    return path;
}

double increment_quantile(std::span<const double> values, std::size_t lag, double q) {
    if (!(q > 0.0 && q < 1.0)) {
        throw DomainError("increment_quantile: q must lie in (0, 1)");
    }
    if (lag == 0) {
        throw DomainError("increment_quantile: lag must be positive");
    }
    constexpr std::size_t kMinIncrements = 16;
    if (values.size() < lag + kMinIncrements) {
        throw EstimationError("increment_quantile: fewer than " + std::to_string(kMinIncrements) +
                              " increments at lag " + std::to_string(lag));
    }
    std::vector<double> inc(values.size() - lag);
    for (std::size_t i = 0; i < inc.size(); ++i) inc[i] = std::abs(values[i + lag] - values[i]);

    const double pos = q * static_cast<double>(inc.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const double frac = pos - static_cast<double>(lo);
    std::nth_element(inc.begin(), inc.begin() + static_cast<std::ptrdiff_t>(lo), inc.end());
    const double a = inc[lo];
    if (frac == 0.0 || lo + 1 >= inc.size()) return a;
    const double b = *std::min_element(inc.begin() + static_cast<std::ptrdiff_t>(lo) + 1, inc.end());
    return a + frac * (b - a);
}

double ols_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw EstimationError("ols_slope: need at least two paired points");
    }
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    if (!(sxx > 0.0)) {
        throw EstimationError("ols_slope: abscissae have no spread");
    }
    return sxy / sxx;
}

double estimate_hurst(std::span<const double> values, std::span<const std::size_t> lags, double q) {
    if (lags.size() < 3) {
        throw DomainError("estimate_hurst: at least three lags are required");
    }
    std::vector<double> lx, ly;
    for (std::size_t lag : lags) {
        const double qv = increment_quantile(values, lag, q);
        if (!(qv > 0.0)) {
            throw EstimationError("estimate_hurst: zero increment quantile at lag " + std::to_string(lag));
        }
        lx.push_back(std::log(static_cast<double>(lag)));
        ly.push_back(std::log(qv));
    }
    return ols_slope(lx, ly);
}

} // namespace lfsmlab
