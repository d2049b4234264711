#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace lfsmlab {

/// One-point law of lfsm: characteristic function
/// exp(-sigma_bar |k|^alpha t^(alpha H)). `diffusion` (D) multiplies the
/// spatial operator in the kinetic equation
///   dp/dt = alpha H t^(alpha H - 1) D d^alpha p / d|x|^alpha,
/// which holds exactly when D == sigma_bar.
struct PdfSpec {
    double alpha = 2.0;
    double hurst = 0.5;
    double sigma_bar = 1.0;
    double diffusion = 1.0;

    void validate() const;
    /// sigma_bar * t^(alpha H): the cf width parameter at time t.
    double width(double t) const;
};

/// Uniform grid x_i = x0 + i h, i = 0..n-1.
struct UniformGrid {
    double x0 = 0.0;
    double h = 1.0;
    std::size_t n = 0;

    double operator[](std::size_t i) const noexcept { return x0 + static_cast<double>(i) * h; }
    std::vector<double> points() const;
    double period() const noexcept { return static_cast<double>(n) * h; }
    bool is_symmetric() const noexcept;

    /// Cell-centred grid of n points covering [-xmax, xmax]; x_i = -x_{n-1-i} exactly.
    static UniformGrid symmetric(double xmax, std::size_t n);
};

/// Quadrature controls for the cosine-transform pdf.
struct QuadratureOptions {
    double rel_tol = 1e-14;
    /// Accumulated error estimate above which AccuracyError is thrown.
    double max_error = 1e-10;
};

/// Characteristic function at wavenumber k and time t.
double characteristic_function(const PdfSpec& spec, double k, double t);

/// p(x, t) = (1/pi) int_0^inf cos(k x) exp(-sigma_bar k^alpha t^(alpha H)) dk,
/// integrated adaptively up to the wavenumber where the integrand drops below
/// 1e-16. Even in x by construction.
std::vector<double> cf_pdf(const PdfSpec& spec, double t, std::span<const double> x,
                           const QuadratureOptions& opts = {});
double cf_pdf(const PdfSpec& spec, double t, double x, const QuadratureOptions& opts = {});

/// P(|X_t| <= L) from the sine transform of the characteristic function.
double central_mass(const PdfSpec& spec, double t, double L, const QuadratureOptions& opts = {});

/// Tabulated pdf over a spatial grid and a list of times.
struct PdfGrid {
    UniformGrid x;
    std::vector<double> t;
    std::vector<std::vector<double>> p; ///< p[time index][space index]
};

PdfGrid tabulate_pdf(const PdfSpec& spec, const UniformGrid& x, std::span<const double> times);

/// Midpoint integral of a cell-centred pdf sample minus the exact mass inside
/// [-xmax, xmax]. Near zero for an accurate, well-resolved pdf.
double normalization_defect(const PdfSpec& spec, double t, const UniformGrid& x, std::span<const double> p);

struct RieszResult {
    std::vector<double> values;
    /// f is not negligible at the grid edges, so the periodic application
    /// mixes in wrapped-around mass.
    bool wraparound = false;
};

/// Apply the symmetric Riesz derivative (Fourier symbol -|k|^alpha) to grid
/// samples of f, treating them as one period.
RieszResult riesz_apply(std::span<const double> f, const UniformGrid& grid, double alpha,
                        double edge_tolerance = 1e-8);

struct KineticResidual {
    double sup = 0.0;                  ///< max |dp/dt - rhs| on the grid
    double l2 = 0.0;                   ///< sqrt(h sum (dp/dt - rhs)^2)
    double spectral = 0.0;             ///< relative residual in transform space
    double normalization_defect = 0.0; ///< see normalization_defect()
    std::size_t extension = 1;         ///< periodic domain used for the Riesz term, in grid lengths
};

/// Residual of the kinetic equation at time t on a symmetric grid.
/// dp/dt: central difference of cf_pdf with step dt_fd. Spatial term:
/// riesz_apply on the grid extended (with the pdf's asymptotic tail) until the
/// periodic images are negligible. The transform-space residual compares a
/// complex-step time derivative of the characteristic function with the
/// symbol applied to it.
KineticResidual kinetic_residual(const PdfSpec& spec, double t, const UniformGrid& grid, double dt_fd);

/// max_x |t1^H p(x t1^H, t1) - t2^H p(x t2^H, t2)|.
double selfsimilar_form_check(const PdfSpec& spec, double t1, double t2, std::span<const double> x);

} // namespace lfsmlab
