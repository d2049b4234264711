#include "doctest.h"

#include <cmath>
#include <numeric>

#include "lfsmlab/errors.hpp"
#include "lfsmlab/lfsm.hpp"
#include "lfsmlab/stable.hpp"
#include "../support.hpp"

using namespace lfsmlab;

namespace {

std::vector<double> increments(const std::vector<double>& v, std::size_t lag) {
    std::vector<double> out;
    for (std::size_t i = 0; i + lag < v.size(); i += lag) out.push_back(v[i + lag] - v[i]);
    return out;
}

double variance(const std::vector<double>& v) {
    const double m = support::mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / (v.size() - 1.0);
}

const std::vector<std::size_t> kLags{1, 2, 4, 8, 16, 32, 64};

} // namespace

TEST_CASE("memory exponent and validation") {
    CHECK(LfsmSpec{0.7, 1.5}.memory_exponent() == doctest::Approx(0.7 - 1.0 / 1.5));
    CHECK(LfsmSpec{0.5, 2.0}.is_memoryless());
    CHECK_FALSE(LfsmSpec{0.6, 2.0}.is_memoryless());
    CHECK_THROWS_AS((LfsmSpec{0.0, 2.0}.validate()), DomainError);
    CHECK_THROWS_AS((LfsmSpec{1.0, 2.0}.validate()), DomainError);
    CHECK_THROWS_AS((LfsmSpec{0.5, 0.0}.validate()), DomainError);
    CHECK_THROWS_AS((LfsmSpec{0.5, 2.5}.validate()), DomainError);
    CHECK_THROWS_AS((LfsmSpec{0.5, 2.0, 0.0, 0.0}.validate()), DomainError);
    CHECK_THROWS_AS((LfsmSpec{0.5, 2.0, 1.0, 0.0, 0.0}.validate()), DomainError);
    // d = 0.2 - 1/0.8 = -1.05
    CHECK_THROWS_AS((LfsmSpec{0.2, 0.8}.validate()), DomainError);
    CHECK_THROWS_AS((SynthesisGrid{0, 64, 512}.validate()), DomainError);
    CHECK_THROWS_AS((SynthesisGrid{16, 64, 512, 0.0}.validate()), DomainError);
    CHECK_THROWS_AS((SynthesisGrid{std::size_t{1} << 40, std::size_t{1} << 40, 1}.validate()), CapacityError);
}

TEST_CASE("kernel: degenerate at d = 0") {
    const auto taps = kernel_weights(LfsmSpec{0.5, 2.0}, 64, 512);
    CHECK(taps.degenerate);
    CHECK(taps.weights == std::vector<double>{1.0});
    CHECK(kernel_weights(LfsmSpec{1.0 / 1.5, 1.5}, 8, 8).degenerate);
}

TEST_CASE("kernel: difference formula with m = 1") {
    const auto taps = kernel_weights(LfsmSpec{0.8, 2.0}, 1, 3);
    REQUIRE(taps.weights.size() == 3);
    CHECK_FALSE(taps.degenerate);
    CHECK(taps.first_offset == 1);
    const double d = 0.3;
    const std::vector<double> raw{1.0, std::pow(2.0, d) - 1.0, std::pow(3.0, d) - std::pow(2.0, d)};
    for (std::size_t i = 1; i < 3; ++i) {
        CHECK(taps.weights[i] / taps.weights[0] == doctest::Approx(raw[i] / raw[0]).epsilon(1e-14));
    }
    CHECK(taps.weights[0] > 0.0);
}

TEST_CASE("kernel: unit alpha-norm after normalization") {
    for (auto [h, a] : {std::pair{0.7, 1.5}, std::pair{0.3, 2.0}, std::pair{0.2, 1.0}, std::pair{0.9, 1.6}}) {
        const auto taps = kernel_weights(LfsmSpec{h, a}, 16, 128);
        CHECK(taps.weights.size() == 16 * 128);
        double s = 0.0;
        for (double w : taps.weights) s += std::pow(std::abs(w), a);
        CHECK(std::abs(s - 1.0) < 1e-12);
        CHECK(alpha_norm(taps.weights, a) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("kernel: two-sided branch") {
    const std::size_t m = 4, M = 8;
    const auto taps = kernel_weights(LfsmSpec{0.7, 1.8, 1.0, 1.0}, m, M);
    const auto lo = taps.first_offset;
    CHECK(lo == static_cast<std::ptrdiff_t>(m) - static_cast<std::ptrdiff_t>(m * M));
    CHECK(taps.weights.size() == 2 * m * M - m + 1);
    auto tap = [&](std::ptrdiff_t j) { return taps.weights[static_cast<std::size_t>(j - lo)]; };
    // b1 = b2: tap(j) = w(j) - w(m - j) is odd about m / 2.
    for (std::ptrdiff_t j = lo; j <= static_cast<std::ptrdiff_t>(m * M); ++j) {
        CHECK(tap(j) == doctest::Approx(-tap(static_cast<std::ptrdiff_t>(m) - j)).epsilon(1e-14));
    }
    const auto anti = kernel_weights(LfsmSpec{0.7, 1.8, 0.0, 1.0}, m, M);
    const auto causal = kernel_weights(LfsmSpec{0.7, 1.8}, m, M);
    // Pure anticausal: tap at m - j equals minus the causal tap at j.
    for (std::size_t j = 1; j <= m * M; ++j) {
        const auto k = static_cast<std::ptrdiff_t>(m) - static_cast<std::ptrdiff_t>(j) - anti.first_offset;
        CHECK(anti.weights[static_cast<std::size_t>(k)] == doctest::Approx(-causal.weights[j - 1]).epsilon(1e-14));
    }
}

TEST_CASE("synthesis: shape, origin and determinism") {
    const LfsmSpec spec{0.7, 1.5};
    const SynthesisGrid grid{5000, 8, 32, 0.1, 99};
    const auto a = synthesize_lfsm(spec, grid);
    CHECK(a.values.size() == 5001);
    CHECK(a.values[0] == 0.0);
    CHECK(a.dt == 0.1);
    for (double v : a.values) REQUIRE(std::isfinite(v));
    const auto b = synthesize_lfsm(spec, grid);
    CHECK(a.values == b.values);
    auto other = grid;
    other.seed = 100;
    CHECK(synthesize_lfsm(spec, other).values != a.values);

    const auto two_sided = synthesize_lfsm(LfsmSpec{0.7, 1.5, 1.0, 0.5}, grid);
    CHECK(two_sided.values[0] == 0.0);
    for (double v : two_sided.values) REQUIRE(std::isfinite(v));
}

TEST_CASE("synthesis: single output sample and tiny grids") {
    const auto p = synthesize_lfsm(LfsmSpec{0.3, 2.0}, SynthesisGrid{1, 1, 1});
    CHECK(p.values.size() == 2);
    CHECK(std::isfinite(p.values[1]));
}

TEST_CASE("synthesis: scale and dt act multiplicatively") {
    const SynthesisGrid g{4096, 8, 64, 1.0, 3};
    const auto base = synthesize_lfsm(LfsmSpec{0.7, 1.7}, g);
    const auto scaled = synthesize_lfsm(LfsmSpec{0.7, 1.7, 1.0, 0.0, 2.5}, g);
    auto g2 = g;
    g2.dt = 0.25;
    const auto fine = synthesize_lfsm(LfsmSpec{0.7, 1.7}, g2);
    const double f = std::pow(0.25, 0.7);
    for (std::size_t i = 0; i < base.values.size(); i += 97) {
        CHECK(scaled.values[i] == doctest::Approx(2.5 * base.values[i]).epsilon(1e-12));
        CHECK(fine.values[i] == doctest::Approx(f * base.values[i]).epsilon(1e-12));
    }
}

TEST_CASE("synthesis: unit increments have the stable scale of the spec") {
    const auto p = synthesize_lfsm(LfsmSpec{0.7, 2.0}, SynthesisGrid{1 << 17, 64, 512, 1.0, 17});
    CHECK(variance(increments(p.values, 1)) == doctest::Approx(2.0).epsilon(0.02));
}

TEST_CASE("synthesis: Brownian limit has Gaussian increments") {
    const auto p = synthesize_lfsm(LfsmSpec{0.5, 2.0}, SynthesisGrid{1 << 16, 64, 512, 1.0, 4});
    const auto inc = increments(p.values, 1);
    CHECK(support::ks_pvalue(inc, [](double x) { return support::normal_cdf(x, std::sqrt(2.0)); }) > 0.01);

    std::vector<double> lx, ly;
    for (std::size_t lag : kLags) {
        lx.push_back(std::log(static_cast<double>(lag)));
        ly.push_back(std::log(variance(increments(p.values, lag))));
    }
    CHECK(support::slope(lx, ly) == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("synthesis: d = 0 is the running sum of sampler output") {
    const SynthesisGrid g{20000, 64, 512, 1.0, 8};
    const auto p = synthesize_lfsm(LfsmSpec{1.0 / 1.5, 1.5}, g);
    const auto z = sample_stable_vector(StableLaw{1.5, 1.0}, g.n, g.seed);
    double s = 0.0;
    for (std::size_t i = 0; i < g.n; ++i) {
        s += z[i];
        REQUIRE(p.values[i + 1] == doctest::Approx(s).epsilon(1e-12));
    }

    // And distributionally: against an independent cumulative sum.
    const auto other = sample_stable_vector(StableLaw{1.5, 1.0}, g.n, 12345);
    CHECK(support::ks2_pvalue(increments(p.values, 1), other) > 0.01);
}

TEST_CASE("estimate_hurst on exact and degenerate inputs") {
    std::vector<double> line(1000);
    std::iota(line.begin(), line.end(), 0.0);
    CHECK(std::abs(estimate_hurst(line, kLags, 0.75) - 1.0) < 1e-12);

    std::vector<double> flat(1000, 2.0);
    CHECK_THROWS_AS(estimate_hurst(flat, kLags, 0.75), EstimationError);
    const std::vector<std::size_t> two{1, 2};
    CHECK_THROWS_AS(estimate_hurst(line, two, 0.75), DomainError);
    CHECK_THROWS_AS(estimate_hurst(line, kLags, 0.0), DomainError);
    CHECK_THROWS_AS(estimate_hurst(line, kLags, 1.0), DomainError);
    const std::vector<std::size_t> too_long{1, 2, 990};
    CHECK_THROWS_AS(estimate_hurst(line, too_long, 0.75), EstimationError);
}

TEST_CASE("estimate_hurst: increment quantile uses linear interpolation") {
    const std::vector<double> v{0, 1, 3, 6, 10};
    // |lag-1 increments| = 1, 2, 3, 4 -> 0.5 quantile 2.5; needs 16 increments, so pad.
    std::vector<double> longer;
    for (int i = 0; i <= 20; ++i) longer.push_back(i * (i + 1) / 2.0);
    // increments 1..20; type-7 0.25 quantile = 1 + 0.25 * 19
    CHECK(increment_quantile(longer, 1, 0.25) == doctest::Approx(1.0 + 0.25 * 19.0));
    CHECK_THROWS_AS(increment_quantile(v, 1, 0.5), EstimationError);
}

TEST_CASE("estimate_hurst recovers the generator exponent") {
    SUBCASE("Brownian") {
        const auto p = synthesize_lfsm(LfsmSpec{0.5, 2.0}, SynthesisGrid{1 << 18, 64, 512, 1.0, 21});
        CHECK(estimate_hurst(p, kLags, 0.75) == doctest::Approx(0.5).epsilon(0.03 / 0.5));
    }
    SUBCASE("ordinary Levy motion") {
        const auto p = synthesize_lfsm(LfsmSpec{1.0 / 1.5, 1.5}, SynthesisGrid{1 << 18, 64, 512, 1.0, 22});
        CHECK(std::abs(estimate_hurst(p, kLags, 0.75) - 1.0 / 1.5) < 0.05);
    }
    SUBCASE("lfsm alpha = 1.5, H = 0.7") {
        const auto p = synthesize_lfsm(LfsmSpec{0.7, 1.5}, SynthesisGrid{1 << 18, 64, 512, 1.0, 23});
        CHECK(std::abs(estimate_hurst(p, kLags, 0.75) - 0.7) < 0.05);
    }
}

TEST_CASE("self-similarity of increment quantiles") {
    const double H = 0.7;
    const auto p = synthesize_lfsm(LfsmSpec{H, 1.5}, SynthesisGrid{1 << 17, 64, 512, 1.0, 31});
    const double q1 = increment_quantile(p.values, 1, 0.75);
    for (std::size_t lag : {2, 4, 8}) {
        const double ratio = increment_quantile(p.values, lag, 0.75) / q1;
        CHECK(ratio == doctest::Approx(std::pow(static_cast<double>(lag), H)).epsilon(0.10));
    }
}

TEST_CASE("stationary increments") {
    const auto p = synthesize_lfsm(LfsmSpec{0.3, 1.6}, SynthesisGrid{1 << 17, 64, 512, 1.0, 41});
    const std::size_t half = p.values.size() / 2;
    const std::span<const double> all(p.values);
    for (std::size_t lag : {1, 16}) {
        const double a = increment_quantile(all.first(half), lag, 0.75);
        const double b = increment_quantile(all.subspan(half), lag, 0.75);
        CHECK(a == doctest::Approx(b).epsilon(0.05));
    }
}

TEST_CASE("mesh convergence") {
    const LfsmSpec spec{0.7, 1.5};
    const auto coarse = synthesize_lfsm(spec, SynthesisGrid{1 << 17, 64, 512, 1.0, 51});
    const auto fine = synthesize_lfsm(spec, SynthesisGrid{1 << 17, 128, 512, 1.0, 51});
    CHECK(increment_quantile(fine.values, 1, 0.75) ==
          doctest::Approx(increment_quantile(coarse.values, 1, 0.75)).epsilon(0.02));
}

TEST_CASE("oversized workspace is refused") {
    CHECK_THROWS_AS(synthesize_lfsm(LfsmSpec{0.7, 1.5}, SynthesisGrid{std::size_t{1} << 36, 64, 512}),
                    CapacityError);
}
