#include "lfsmlab/kinetics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "fft.hpp"
#include "lfsmlab/errors.hpp"

namespace lfsmlab {

namespace {

using std::numbers::pi;

// exp(-u) < 1e-16 beyond u = 16 ln 10.
const double kCutoffExponent = 16.0 * std::numbers::ln10;

void check_time(double t) {
    if (!(t > 0.0) || !std::isfinite(t)) {
        throw DomainError("pdf: t must be positive (t = 0 is a point mass), got " + std::to_string(t));
    }
}

double cutoff_wavenumber(double alpha, double width) { return std::pow(kCutoffExponent / width, 1.0 / alpha); }


} // namespace

void PdfSpec::validate() const {
    if (!(alpha > 0.0 && alpha <= 2.0)) {
        throw DomainError("pdf: alpha must lie in (0, 2], got " + std::to_string(alpha));
    }
    if (!(hurst > 0.0 && hurst < 1.0)) {
        throw DomainError("pdf: hurst must lie in (0, 1), got " + std::to_string(hurst));
    }
    if (!(sigma_bar > 0.0) || !std::isfinite(sigma_bar)) {
        throw DomainError("pdf: sigma_bar must be positive");
    }
    if (!(diffusion > 0.0) || !std::isfinite(diffusion)) {
        throw DomainError("pdf: diffusion coefficient must be positive");
    }
}

double PdfSpec::width(double t) const { return sigma_bar * std::pow(t, alpha * hurst); }

std::vector<double> UniformGrid::points() const {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = (*this)[i];
    return out;
}

bool UniformGrid::is_symmetric() const noexcept {
    if (n == 0) return false;
    const double last = (*this)[n - 1];
    return std::abs(x0 + last) <= 1e-12 * std::max(1.0, std::abs(x0));
}

UniformGrid UniformGrid::symmetric(double xmax, std::size_t n) {
    if (!(xmax > 0.0) || n < 2) {
        throw DomainError("UniformGrid::symmetric: need xmax > 0 and n >= 2");
    }
    UniformGrid g;
    g.n = n;
    g.h = 2.0 * xmax / static_cast<double>(n);
    g.x0 = -xmax + 0.5 * g.h;
    return g;
}

double characteristic_function(const PdfSpec& spec, double k, double t) {
    spec.validate();
    check_time(t);
    return std::exp(-spec.width(t) * std::pow(std::abs(k), spec.alpha));
}

namespace {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 21>;
using TanhSinh = boost::math::quadrature::tanh_sinh<double>;

TanhSinh& endpoint_rule() {
    thread_local TanhSinh rule;
    return rule;
}

// Adaptive Gauss-Kronrod (10/21) with an absolute tolerance, bisecting until
// the Gauss/Kronrod difference is below abs_tol.
template <class F>
double kronrod_adaptive(const F& f, double a, double b, double abs_tol, unsigned depth, double& err) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    // G10 nodes sit at the odd Kronrod indices; 10 is even so there is no centre node for the Gauss rule.
    const auto& xk = Kronrod::abscissa();
    const auto& wk = Kronrod::weights();
    const auto& wg = boost::math::quadrature::gauss<double, 10>::weights();
    double kronrod = f(mid) * wk[0];
    double gauss = 0.0;
    for (std::size_t i = 1; i < xk.size(); ++i) {
        const double pair = f(mid + half * xk[i]) + f(mid - half * xk[i]);
        kronrod += pair * wk[i];
        if (i % 2 == 1) gauss += pair * wg[i / 2];
    }
    const double v = half * kronrod;
    const double e = std::max(half * std::abs(kronrod - gauss), std::abs(v) * 4e-16);
    if (e <= abs_tol || depth == 0) {
        err += e;
        return v;
    }
    return kronrod_adaptive(f, a, mid, abs_tol / 2, depth - 1, err) +
           kronrod_adaptive(f, mid, b, abs_tol / 2, depth - 1, err);
}

// (1/pi) int_0^K g(k) exp(-w k^alpha) dk split into panels no wider than
// `panel`. The first panel carries the k^alpha cusp at the origin and uses
// tanh-sinh; the rest use adaptive Gauss-Kronrod. `g_bound` bounds |g|.
template <class G>
double transform_integral(G g, double g_bound, double alpha, double w, double panel, const QuadratureOptions& opts,
                          const char* what) {
    const double K = cutoff_wavenumber(alpha, w);
    auto f = [&](double k) { return g(k) * std::exp(-w * std::pow(k, alpha)); };
    panel = std::min(panel, K / 8.0);
    const auto panels = static_cast<std::size_t>(std::ceil(K / panel));
    const double step = K / static_cast<double>(panels);
    // int_0^inf exp(-w k^alpha) dk, the size of the integral at x = 0.
    const double scale = g_bound * std::tgamma(1.0 + 1.0 / alpha) / std::pow(w, 1.0 / alpha);
    const double panel_tol = opts.rel_tol * scale * step / K;

    double total = 0.0;
    double err_total = 0.0;
    {
        double err = 0.0, l1 = 0.0;
        std::size_t levels = 0;
        total += endpoint_rule().integrate(f, 0.0, step, opts.rel_tol, &err, &l1, &levels);
        err_total += err;
    }
    for (std::size_t i = 1; i < panels; ++i) {
        const double a = step * static_cast<double>(i);
        const double b = (i + 1 == panels) ? K : a + step;
        total += kronrod_adaptive(f, a, b, panel_tol, 12, err_total);
    }
    if (!(err_total <= opts.max_error) || !std::isfinite(total)) {
        throw AccuracyError(std::string(what) + ": quadrature did not converge", err_total);
    }
    return total / pi;
}

} // namespace

double cf_pdf(const PdfSpec& spec, double t, double x, const QuadratureOptions& opts) {
    spec.validate();
    check_time(t);
    const double ax = std::abs(x);
    const double w = spec.width(t);
    // Half a period of cos(k x) per panel.
    const double panel = ax > 0.0 ? pi / ax : std::numeric_limits<double>::infinity();
    const double v = transform_integral([ax](double k) { return std::cos(k * ax); }, 1.0, spec.alpha, w, panel, opts,
                                        "cf_pdf");
    return std::max(v, 0.0);
}

std::vector<double> cf_pdf(const PdfSpec& spec, double t, std::span<const double> x, const QuadratureOptions& opts) {
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = cf_pdf(spec, t, x[i], opts);
    return out;
}

double central_mass(const PdfSpec& spec, double t, double L, const QuadratureOptions& opts) {
    spec.validate();
    check_time(t);
    if (!(L > 0.0)) return 0.0;
    const double w = spec.width(t);
    // P(|X| <= L) = (2/pi) int_0^inf sin(k L)/k cf(k) dk
    auto g = [L](double k) { return k == 0.0 ? L : std::sin(k * L) / k; };
    const double v = 2.0 * transform_integral(g, L, spec.alpha, w, pi / L, opts, "central_mass");
    return std::clamp(v, 0.0, 1.0);
}

PdfGrid tabulate_pdf(const PdfSpec& spec, const UniformGrid& x, std::span<const double> times) {
    PdfGrid grid;
    grid.x = x;
    grid.t.assign(times.begin(), times.end());
    const auto pts = x.points();
    for (double t : times) grid.p.push_back(cf_pdf(spec, t, pts));
    return grid;
}

double normalization_defect(const PdfSpec& spec, double t, const UniformGrid& x, std::span<const double> p) {
    if (p.size() != x.n) {
        throw DomainError("normalization_defect: pdf sample does not match the grid");
    }
    double sum = 0.0;
    for (double v : p) sum += v;
    const double xmax = x[x.n - 1] + 0.5 * x.h;
    return sum * x.h - central_mass(spec, t, xmax);
}

RieszResult riesz_apply(std::span<const double> f, const UniformGrid& grid, double alpha, double edge_tolerance) {
    if (!(alpha > 0.0 && alpha <= 2.0)) {
        throw DomainError("riesz_apply: alpha must lie in (0, 2]");
    }
    if (f.size() != grid.n || f.size() < 2) {
        throw DomainError("riesz_apply: sample size does not match grid");
    }
    const std::size_t n = f.size();
    RieszResult res;
    double peak = 0.0;
    for (double v : f) peak = std::max(peak, std::abs(v));
    const double edge = std::max(std::abs(f.front()), std::abs(f.back()));
    res.wraparound = edge > edge_tolerance * peak;

    detail::RealFft fft(n);
    std::copy(f.begin(), f.end(), fft.real().begin());
    fft.forward();
    auto spec = fft.spectrum();
    const double dk = 2.0 * pi / grid.period();
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t j = 0; j < spec.size(); ++j) {
        spec[j] *= -std::pow(dk * static_cast<double>(j), alpha) * inv_n;
    }
    fft.inverse();
    res.values.assign(fft.real().begin(), fft.real().end());
    return res;
}

namespace {

// Convergent (alpha < 1) or asymptotic (1 <= alpha < 2) large-|x| expansion of
// the symmetric stable density with cf exp(-w |k|^alpha). Empty when the terms
// stop shrinking before reaching double precision.
std::optional<double> stable_tail_series(double alpha, double w, double x) {
    const double s = std::pow(w, 1.0 / alpha);
    const double z = std::abs(x) / s;
    if (z < 12.0) return std::nullopt;
    const double lz = std::log(z);
    double sum = 0.0;
    double prev = std::numeric_limits<double>::infinity();
    for (int n = 1; n <= 80; ++n) {
        const double nd = n;
        const double sine = std::sin(nd * pi * alpha / 2.0);
        const double mag = std::exp(std::lgamma(nd * alpha + 1.0) - std::lgamma(nd + 1.0) - (nd * alpha + 1.0) * lz);
        if (mag > prev) return std::nullopt;
        prev = mag;
        const double term = ((n % 2 == 1) ? 1.0 : -1.0) * sine * mag;
        sum += term;
        if (mag < 1e-17 * std::abs(sum)) return sum / (pi * s);
    }
    return std::nullopt;
}

double far_pdf(const PdfSpec& spec, double t, double x) {
    const double w = spec.width(t);
    if (spec.alpha == 2.0) {
        return std::exp(-x * x / (4.0 * w)) / (2.0 * std::sqrt(pi * w));
    }
    if (auto v = stable_tail_series(spec.alpha, w, x)) return *v;
    return cf_pdf(spec, t, x);
}

// Rough size of the pdf at distance r, used to decide how far to extend the
// periodic domain.
double tail_estimate(const PdfSpec& spec, double t, double r) {
    const double w = spec.width(t);
    if (spec.alpha == 2.0) {
        return std::exp(-r * r / (4.0 * w)) / (2.0 * std::sqrt(pi * w));
    }
    const double c = std::tgamma(spec.alpha + 1.0) * std::sin(pi * spec.alpha / 2.0) / pi;
    return c * w * std::pow(r, -1.0 - spec.alpha);
}

constexpr std::array<std::size_t, 9> kExtensions{1, 3, 7, 15, 31, 63, 127, 255, 511};
constexpr double kImageTolerance = 1e-11;

} // namespace

KineticResidual kinetic_residual(const PdfSpec& spec, double t, const UniformGrid& grid, double dt_fd) {
    spec.validate();
    check_time(t);
    if (!grid.is_symmetric()) {
        throw DomainError("kinetic_residual: grid must be symmetric about 0");
    }
    if (!(dt_fd > 0.0) || !(dt_fd < t)) {
        throw DomainError("kinetic_residual: need 0 < dt_fd < t");
    }
    const double ah = spec.alpha * spec.hurst;
    const double coeff = ah * std::pow(t, ah - 1.0) * spec.diffusion;
    const auto x = grid.points();

    KineticResidual out;

    // Transform space: complex-step time derivative against the symbol.
    {
        const double dk = 2.0 * pi / grid.period();
        const double step = 1e-20 * t;
        double worst = 0.0, scale = 0.0;
        for (std::size_t j = 0; j <= grid.n / 2; ++j) {
            const double k = dk * static_cast<double>(j);
            const double ka = std::pow(k, spec.alpha);
            const std::complex<double> tc(t, step);
            const std::complex<double> phat = std::exp(-spec.sigma_bar * ka * std::pow(tc, ah));
            const double lhs = phat.imag() / step;
            const double rhs = -coeff * ka * characteristic_function(spec, k, t);
            worst = std::max(worst, std::abs(lhs - rhs));
            scale = std::max(scale, std::abs(lhs));
        }
        out.spectral = scale > 0.0 ? worst / scale : worst;
    }

    const auto p = cf_pdf(spec, t, x);
    const auto p_plus = cf_pdf(spec, t + dt_fd, x);
    const auto p_minus = cf_pdf(spec, t - dt_fd, x);

    const double xmax = -grid.x0 + 0.5 * grid.h;
    std::size_t ext = kExtensions.back();
    for (std::size_t e : kExtensions) {
        if (tail_estimate(spec, t, static_cast<double>(e) * xmax) < kImageTolerance) {
            ext = e;
            break;
        }
    }
    out.extension = ext;

    UniformGrid wide = grid;
    wide.n = grid.n * ext;
    const std::size_t offset = grid.n * (ext - 1) / 2;
    wide.x0 = grid.x0 - static_cast<double>(offset) * grid.h;
    std::vector<double> pw(wide.n);
    for (std::size_t i = 0; i < wide.n; ++i) {
        if (i >= offset && i < offset + grid.n) {
            pw[i] = p[i - offset];
        } else {
            // Mirror so both tails evaluate identically.
            const std::size_t mirror = wide.n - 1 - i;
            pw[i] = (mirror < i) ? pw[mirror] : far_pdf(spec, t, wide[i]);
        }
    }
    const auto riesz = riesz_apply(pw, wide, spec.alpha);

    double sup = 0.0, sq = 0.0;
    for (std::size_t i = 0; i < grid.n; ++i) {
        const double dpdt = (p_plus[i] - p_minus[i]) / (2.0 * dt_fd);
        const double r = dpdt - coeff * riesz.values[offset + i];
        sup = std::max(sup, std::abs(r));
        sq += r * r;
    }
    out.sup = sup;
    out.l2 = std::sqrt(sq * grid.h);
    out.normalization_defect = normalization_defect(spec, t, grid, p);
    return out;
}

double selfsimilar_form_check(const PdfSpec& spec, double t1, double t2, std::span<const double> x) {
    spec.validate();
    check_time(t1);
    check_time(t2);
    const double s1 = std::pow(t1, spec.hurst);
    const double s2 = std::pow(t2, spec.hurst);
    std::vector<double> x1(x.size()), x2(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        x1[i] = x[i] * s1;
        x2[i] = x[i] * s2;
    }
    const auto p1 = cf_pdf(spec, t1, x1);
    const auto p2 = cf_pdf(spec, t2, x2);
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(s1 * p1[i] - s2 * p2[i]));
    return worst;
}

} // namespace lfsmlab
