#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace lfsmlab {

/// Parameters of linear fractional stable motion.
///
/// The memory kernel is b1 * [(t-s)_+^d - (-s)_+^d] + b2 * [(t-s)_-^d - (-s)_-^d]
/// with memory exponent d = hurst - 1/alpha. b1 = 1, b2 = 0 is the causal
/// (one-sided) moving average. `scale` is the stable scale of a unit-time
/// increment.
struct LfsmSpec {
    double hurst = 0.5;
    double alpha = 2.0;
    double b1 = 1.0;
    double b2 = 0.0;
    double scale = 1.0;

    double memory_exponent() const noexcept { return hurst - 1.0 / alpha; }

    /// True when d vanishes (H = 1/alpha): ordinary Levy motion, no memory.
    bool is_memoryless() const noexcept;

    void validate() const;
};

/// Accuracy knobs of the moving-average discretization.
///   n           output samples after the origin
///   mesh        sub-steps per unit step (m)
///   truncation  unit steps of kernel history kept (M)
struct SynthesisGrid {
    std::size_t n = 1024;
    std::size_t mesh = 64;
    std::size_t truncation = 512;
    double dt = 1.0;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Uniformly sampled realization. values.size() == grid.n + 1 and values[0] == 0.
struct SamplePath {
    double dt = 1.0;
    std::vector<double> values;
    LfsmSpec spec;
    SynthesisGrid grid;

    std::size_t size() const noexcept { return values.size(); }
};

/// Discretized noise kernel: the noise at step i is
///   sum_k weights[k] * L(mesh * i - (first_offset + k)),
/// L i.i.d. standard stable on the mesh. Weights are normalized to unit
/// alpha-norm, so the noise is standard stable.
struct KernelTaps {
    std::vector<double> weights;
    std::ptrdiff_t first_offset = 1;
    bool degenerate = false;
};

/// Kernel for `spec` on a mesh of m sub-steps, truncated after M unit steps.
/// Causal specs give m*M taps w(j) ~ (j/m)^d - ((j-m)/m)^d, j = 1..m*M (second
/// term only for j > m). A nonzero b2 adds the mirrored anticausal branch.
/// When d == 0 the result is the single tap {1} with `degenerate` set.
KernelTaps kernel_weights(const LfsmSpec& spec, std::size_t mesh, std::size_t truncation);

/// Sum of |w|^alpha.
double alpha_norm(std::span<const double> weights, double alpha);

/// Synthesize one path by convolving stable innovations with the discretized
/// kernel (FFT overlap-save, decomposed by mesh residue) and cumulating.
/// Deterministic in (spec, grid). Throws CapacityError for oversized workspaces.
SamplePath synthesize_lfsm(const LfsmSpec& spec, const SynthesisGrid& grid);

/// Empirical q-quantile (linear interpolation between order statistics) of
/// |values[i + lag] - values[i]| over all admissible i.
double increment_quantile(std::span<const double> values, std::size_t lag, double q);

/// Self-similarity exponent from the least-squares slope of
/// log(q-quantile of |increment at lag|) against log(lag).
double estimate_hurst(std::span<const double> values, std::span<const std::size_t> lags, double q);

inline double estimate_hurst(const SamplePath& path, std::span<const std::size_t> lags, double q) {
    return estimate_hurst(path.values, lags, q);
}

/// Ordinary least-squares slope of y on x.
double ols_slope(std::span<const double> x, std::span<const double> y);

} // namespace lfsmlab
