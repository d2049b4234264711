#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "lfsmlab/bursts.hpp"
#include "lfsmlab/errors.hpp"
#include "lfsmlab/kinetics.hpp"
#include "lfsmlab/lfsm.hpp"
#include "lfsmlab/path_io.hpp"
#include "lfsmlab/stable.hpp"
#include "lfsmlab/sweep.hpp"
#include "lfsmlab/tail_fit.hpp"
#include "lfsmlab/version.hpp"

namespace py = pybind11;
using namespace lfsmlab;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

py::array_t<double> to_numpy(std::vector<double> v) {
    auto* heap = new std::vector<double>(std::move(v));
    py::capsule owner(heap, [](void* p) { delete static_cast<std::vector<double>*>(p); });
    return py::array_t<double>(static_cast<py::ssize_t>(heap->size()), heap->data(), owner);
}

std::span<const double> view(const Array& a) {
    if (a.ndim() != 1) throw py::value_error("expected a one-dimensional array");
    return {a.data(), static_cast<std::size_t>(a.size())};
}

} // namespace

PYBIND11_MODULE(_lfsmlab, m) {
    m.doc() = "Linear fractional stable motion: synthesis, bursts, tail fits, kinetics";
    m.attr("__version__") = version();

    py::register_exception<EstimationError>(m, "EstimationError", PyExc_RuntimeError);
    py::register_exception<AccuracyError>(m, "AccuracyError", PyExc_ArithmeticError);
    py::register_exception<CapacityError>(m, "CapacityError", PyExc_MemoryError);
    py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<LookupError>(m, "LookupError", PyExc_LookupError);

    // stable innovations
    m.def("sample_standard_stable", &sample_standard_stable, py::arg("alpha"), py::arg("u1"), py::arg("u2"));
    m.def(
        "sample_stable_vector",
        [](double alpha, std::size_t n, std::uint64_t seed, double scale) {
            return to_numpy(sample_stable_vector(StableLaw{alpha, scale}, n, seed));
        },
        py::arg("alpha"), py::arg("n"), py::arg("seed"), py::arg("scale") = 1.0);

    // synthesis
    py::class_<LfsmSpec>(m, "LfsmSpec")
        .def(py::init([](double hurst, double alpha, double b1, double b2, double scale) {
                 LfsmSpec s{hurst, alpha, b1, b2, scale};
                 s.validate();
                 return s;
             }),
             py::arg("hurst") = 0.5, py::arg("alpha") = 2.0, py::arg("b1") = 1.0, py::arg("b2") = 0.0,
             py::arg("scale") = 1.0)
        .def_readwrite("hurst", &LfsmSpec::hurst)
        .def_readwrite("alpha", &LfsmSpec::alpha)
        .def_readwrite("b1", &LfsmSpec::b1)
        .def_readwrite("b2", &LfsmSpec::b2)
        .def_readwrite("scale", &LfsmSpec::scale)
        .def_property_readonly("memory_exponent", &LfsmSpec::memory_exponent);

    py::class_<SynthesisGrid>(m, "SynthesisGrid")
        .def(py::init([](std::size_t n, std::size_t mesh, std::size_t truncation, double dt, std::uint64_t seed) {
                 return SynthesisGrid{n, mesh, truncation, dt, seed};
             }),
             py::arg("n") = 1024, py::arg("mesh") = 64, py::arg("truncation") = 512, py::arg("dt") = 1.0,
             py::arg("seed") = 0)
        .def_readwrite("n", &SynthesisGrid::n)
        .def_readwrite("mesh", &SynthesisGrid::mesh)
        .def_readwrite("truncation", &SynthesisGrid::truncation)
        .def_readwrite("dt", &SynthesisGrid::dt)
        .def_readwrite("seed", &SynthesisGrid::seed);

    py::class_<SamplePath>(m, "SamplePath")
        .def_readonly("dt", &SamplePath::dt)
        .def_readonly("spec", &SamplePath::spec)
        .def_readonly("grid", &SamplePath::grid)
        .def_property_readonly("values", [](const SamplePath& p) { return to_numpy(p.values); })
        .def("__len__", &SamplePath::size);

    m.def(
        "kernel_weights",
        [](const LfsmSpec& spec, std::size_t mesh, std::size_t truncation) {
            auto taps = kernel_weights(spec, mesh, truncation);
            return py::make_tuple(to_numpy(std::move(taps.weights)), taps.first_offset, taps.degenerate);
        },
        py::arg("spec"), py::arg("mesh"), py::arg("truncation"),
        "Returns (weights, first_offset, degenerate).");
    m.def("synthesize_lfsm", &synthesize_lfsm, py::arg("spec"), py::arg("grid"),
          py::call_guard<py::gil_scoped_release>());
    m.def(
        "estimate_hurst",
        [](const Array& values, std::vector<std::size_t> lags, double q) {
            return estimate_hurst(view(values), lags, q);
        },
        py::arg("values"), py::arg("lags"), py::arg("q") = 0.75);
    m.def("write_path", [](const SamplePath& p, const std::filesystem::path& file, bool binary) {
        binary ? write_path_binary(p, file) : write_path_csv(p, file);
    }, py::arg("path"), py::arg("file"), py::arg("binary") = false);
    m.def("read_path", &read_path, py::arg("file"));

    // bursts
    py::class_<Burst>(m, "Burst")
        .def_readonly("up_index", &Burst::up_index)
        .def_readonly("down_index", &Burst::down_index)
        .def_readonly("duration", &Burst::duration)
        .def_readonly("size", &Burst::size)
        .def_readonly("threshold", &Burst::threshold)
        .def("__repr__", [](const Burst& b) {
            return "Burst(up_index=" + std::to_string(b.up_index) + ", down_index=" + std::to_string(b.down_index) +
                   ", duration=" + std::to_string(b.duration) + ", size=" + std::to_string(b.size) + ")";
        });

    py::class_<BurstEnsemble>(m, "BurstEnsemble")
        .def_readonly("bursts", &BurstEnsemble::bursts)
        .def_readonly("threshold", &BurstEnsemble::threshold)
        .def_readonly("dt", &BurstEnsemble::dt)
        .def("durations", [](const BurstEnsemble& e) { return to_numpy(e.durations()); })
        .def("sizes", [](const BurstEnsemble& e) { return to_numpy(e.sizes()); })
        .def("__len__", &BurstEnsemble::size);

    m.def(
        "find_bursts",
        [](const Array& values, double dt, double threshold) { return find_bursts(view(values), dt, threshold); },
        py::arg("values"), py::arg("dt") = 1.0, py::arg("threshold") = 0.0);

    py::class_<TailFit>(m, "TailFit")
        .def_readonly("exponent", &TailFit::exponent)
        .def_readonly("xmin", &TailFit::xmin)
        .def_readonly("ks", &TailFit::ks)
        .def_readonly("n_tail", &TailFit::n_tail)
        .def_readonly("stderr", &TailFit::std_error)
        .def_readonly("low_confidence", &TailFit::low_confidence)
        .def("__repr__", [](const TailFit& f) {
            return "TailFit(exponent=" + std::to_string(f.exponent) + ", xmin=" + std::to_string(f.xmin) +
                   ", ks=" + std::to_string(f.ks) + ", n_tail=" + std::to_string(f.n_tail) +
                   ", stderr=" + std::to_string(f.std_error) + ")";
        });

    m.def("duration_exponent", &duration_exponent, py::arg("ensemble"), py::arg("min_bursts") = kMinBursts);
    m.def("size_exponent", &size_exponent, py::arg("ensemble"), py::arg("min_bursts") = kMinBursts);
    m.def("size_duration_exponent", &size_duration_exponent, py::arg("ensemble"));
    m.def(
        "predicted_exponents",
        [](double h) {
            const auto p = predicted_exponents(h);
            return py::make_tuple(p.beta, p.gamma, p.psi);
        },
        py::arg("hurst"), "Returns (beta, |gamma|, psi).");

    // tail fitting
    m.def(
        "fit_exponent",
        [](const Array& samples, double xmin) {
            const auto e = fit_exponent(view(samples), xmin);
            return py::make_tuple(e.exponent, e.std_error);
        },
        py::arg("samples"), py::arg("xmin"), "Returns (exponent, stderr).");
    m.def(
        "select_xmin", [](const Array& s, std::size_t min_tail) { return select_xmin(view(s), min_tail); },
        py::arg("samples"), py::arg("min_tail") = kMinTail);
    m.def(
        "ks_distance", [](const Array& s, double xmin, double e) { return ks_distance(view(s), xmin, e); },
        py::arg("samples"), py::arg("xmin"), py::arg("exponent"));
    m.def(
        "fit_tail",
        [](const Array& s, std::optional<double> xmin, std::size_t min_tail) {
            return xmin ? fit_tail_at(view(s), *xmin) : fit_tail(view(s), min_tail);
        },
        py::arg("samples"), py::arg("xmin") = py::none(), py::arg("min_tail") = kMinTail);

    // kinetics
    py::class_<PdfSpec>(m, "PdfSpec")
        .def(py::init([](double alpha, double hurst, double sigma_bar, double diffusion) {
                 PdfSpec s{alpha, hurst, sigma_bar, diffusion};
                 s.validate();
                 return s;
             }),
             py::arg("alpha") = 2.0, py::arg("hurst") = 0.5, py::arg("sigma_bar") = 1.0, py::arg("diffusion") = 1.0)
        .def_readwrite("alpha", &PdfSpec::alpha)
        .def_readwrite("hurst", &PdfSpec::hurst)
        .def_readwrite("sigma_bar", &PdfSpec::sigma_bar)
        .def_readwrite("diffusion", &PdfSpec::diffusion);

    py::class_<KineticResidual>(m, "KineticResidual")
        .def_readonly("sup", &KineticResidual::sup)
        .def_readonly("l2", &KineticResidual::l2)
        .def_readonly("spectral", &KineticResidual::spectral)
        .def_readonly("normalization_defect", &KineticResidual::normalization_defect)
        .def_readonly("extension", &KineticResidual::extension);

    m.def(
        "cf_pdf",
        [](const PdfSpec& spec, double t, const Array& x) {
            std::vector<double> out;
            {
                py::gil_scoped_release release;
                out = cf_pdf(spec, t, view(x));
            }
            return to_numpy(std::move(out));
        },
        py::arg("spec"), py::arg("t"), py::arg("x"));
    m.def(
        "symmetric_grid", [](double xmax, std::size_t n) { return to_numpy(UniformGrid::symmetric(xmax, n).points()); },
        py::arg("xmax"), py::arg("n"), "Cell-centred grid of n points on [-xmax, xmax].");
    m.def(
        "riesz_apply",
        [](const Array& f, double x0, double h, double alpha) {
            auto r = riesz_apply(view(f), UniformGrid{x0, h, static_cast<std::size_t>(f.size())}, alpha);
            return py::make_tuple(to_numpy(std::move(r.values)), r.wraparound);
        },
        py::arg("f"), py::arg("x0"), py::arg("h"), py::arg("alpha"), "Returns (values, wraparound).");
    m.def(
        "kinetic_residual",
        [](const PdfSpec& spec, double t, double xmax, std::size_t nx, double dt_fd) {
            return kinetic_residual(spec, t, UniformGrid::symmetric(xmax, nx), dt_fd);
        },
        py::arg("spec"), py::arg("t"), py::arg("xmax") = 20.0, py::arg("nx") = 4096, py::arg("dt_fd") = 1e-4,
        py::call_guard<py::gil_scoped_release>());
    m.def(
        "selfsimilar_form_check",
        [](const PdfSpec& spec, double t1, double t2, const Array& x) {
            return selfsimilar_form_check(spec, t1, t2, view(x));
        },
        py::arg("spec"), py::arg("t1"), py::arg("t2"), py::arg("x"));

    // sweep
    py::class_<SweepConfig>(m, "SweepConfig")
        .def(py::init<>())
        .def_readwrite("alphas", &SweepConfig::alphas)
        .def_readwrite("hursts", &SweepConfig::hursts)
        .def_readwrite("trials", &SweepConfig::trials)
        .def_readwrite("path_length", &SweepConfig::path_length)
        .def_readwrite("threshold", &SweepConfig::threshold)
        .def_readwrite("base_seed", &SweepConfig::base_seed)
        .def_readwrite("mesh", &SweepConfig::mesh)
        .def_readwrite("truncation", &SweepConfig::truncation)
        .def_readwrite("min_bursts", &SweepConfig::min_bursts)
        .def_readwrite("workers", &SweepConfig::workers)
        .def_readwrite("output_dir", &SweepConfig::output_dir);

    py::class_<SweepRow>(m, "SweepRow")
        .def_readonly("alpha", &SweepRow::alpha)
        .def_readonly("hurst", &SweepRow::hurst)
        .def_readonly("trial", &SweepRow::trial)
        .def_readonly("seed", &SweepRow::seed)
        .def_readonly("n_bursts", &SweepRow::n_bursts)
        .def_readonly("beta_hat", &SweepRow::beta_hat)
        .def_readonly("beta_stderr", &SweepRow::beta_stderr)
        .def_readonly("gamma_hat", &SweepRow::gamma_hat)
        .def_readonly("gamma_stderr", &SweepRow::gamma_stderr)
        .def_readonly("psi_hat", &SweepRow::psi_hat)
        .def_readonly("xmin_tau", &SweepRow::xmin_tau)
        .def_readonly("xmin_s", &SweepRow::xmin_s)
        .def_readonly("low_confidence", &SweepRow::low_confidence)
        .def_readonly("status", &SweepRow::status);

    py::class_<SweepAggregate>(m, "SweepAggregate")
        .def_readonly("alpha", &SweepAggregate::alpha)
        .def_readonly("hurst", &SweepAggregate::hurst)
        .def_readonly("trials", &SweepAggregate::trials)
        .def_readonly("beta_mean", &SweepAggregate::beta_mean)
        .def_readonly("beta_sd", &SweepAggregate::beta_sd)
        .def_readonly("gamma_mean", &SweepAggregate::gamma_mean)
        .def_readonly("gamma_sd", &SweepAggregate::gamma_sd)
        .def_readonly("psi_mean", &SweepAggregate::psi_mean)
        .def_readonly("psi_sd", &SweepAggregate::psi_sd)
        .def_readonly("beta_pred", &SweepAggregate::beta_pred)
        .def_readonly("gamma_pred", &SweepAggregate::gamma_pred)
        .def_readonly("psi_pred", &SweepAggregate::psi_pred);

    py::class_<SweepResult>(m, "SweepResult")
        .def_readonly("config", &SweepResult::config)
        .def_readonly("rows", &SweepResult::rows)
        .def_readonly("aggregates", &SweepResult::aggregates);

    m.def("run_sweep", [](const SweepConfig& cfg) { return run_sweep(cfg); }, py::arg("config"),
          py::call_guard<py::gil_scoped_release>());
    m.def(
        "figure_data",
        [](const SweepResult& r, int id) {
            const auto t = figure_data(r, id);
            py::list rows;
            for (const auto& p : t.points) rows.append(py::make_tuple(p.hurst, p.exponent, p.predicted));
            return rows;
        },
        py::arg("result"), py::arg("figure_id"), "List of (hurst, exponent or None, predicted).");
    m.def("write_sweep_outputs", &write_sweep_outputs, py::arg("result"), py::arg("directory"));
    m.def("read_sweep", &read_sweep, py::arg("directory"));
}
