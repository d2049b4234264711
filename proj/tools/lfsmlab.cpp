// lfsmlab: synthesize lfsm paths, extract bursts, fit tails, check the
// kinetic equation and run exponent sweeps.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "lfsmlab/bursts.hpp"
#include "lfsmlab/errors.hpp"
#include "lfsmlab/kinetics.hpp"
#include "lfsmlab/lfsm.hpp"
#include "lfsmlab/path_io.hpp"
#include "lfsmlab/sweep.hpp"
#include "lfsmlab/tail_fit.hpp"
#include "lfsmlab/version.hpp"

using namespace lfsmlab;
using json = nlohmann::ordered_json;

namespace {

struct GenerateArgs {
    LfsmSpec spec;
    SynthesisGrid grid;
    std::string out;
    std::string format = "auto";
};

struct BurstsArgs {
    std::string input;
    double threshold = 0.0;
    std::size_t min_bursts = kMinBursts;
    std::string out;
};

struct FitArgs {
    std::string input;
    std::optional<double> xmin;
    std::size_t min_tail = kMinTail;
};

struct KineticsArgs {
    double alpha = 1.5;
    double hurst = 0.7;
    double sigma = 1.0;
    std::optional<double> diffusion;
    double t = 1.0;
    double xmax = 20.0;
    std::size_t nx = 4096;
    std::optional<double> dtfd;
};

struct SweepArgs {
    std::string config;
    std::vector<double> alphas, hursts;
    std::optional<std::size_t> trials, n, mesh, truncation, min_bursts, workers;
    std::optional<double> threshold;
    std::optional<std::uint64_t> seed;
    std::string out;
    bool quiet = false;
};

struct FigureArgs {
    std::string from;
    std::vector<int> ids;
    std::string out;
};

std::ostream& open_or_stdout(const std::string& file, std::ofstream& holder) {
    if (file.empty() || file == "-") return std::cout;
    holder.open(file, std::ios::out | std::ios::trunc);
    if (!holder) throw std::runtime_error("cannot open '" + file + "' for writing");
    return holder;
}

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

int run_generate(const GenerateArgs& a) {
    const auto path = synthesize_lfsm(a.spec, a.grid);
    bool binary = a.format == "binary";
    if (a.format == "auto") binary = ends_with(a.out, ".bin");
    if (binary) {
        write_path_binary(path, a.out);
    } else {
        write_path_csv(path, a.out);
    }
    std::cerr << "wrote " << path.size() << " samples to " << a.out << '\n';
    return 0;
}

int run_bursts(const BurstsArgs& a) {
    const auto path = read_path(a.input);
    const auto ens = find_bursts(path, a.threshold);
    if (ens.size() < a.min_bursts) {
        std::cerr << "warning: " << ens.size() << " bursts, below the confidence floor of " << a.min_bursts << '\n';
    }
    std::ofstream holder;
    auto& out = open_or_stdout(a.out, holder);
    out << "burst_id,up_index,down_index,duration,size\n";
    char buf[64];
    for (std::size_t i = 0; i < ens.bursts.size(); ++i) {
        const auto& b = ens.bursts[i];
        out << i << ',' << b.up_index << ',' << b.down_index << ',';
        std::snprintf(buf, sizeof buf, "%.17g,%.17g", b.duration, b.size);
        out << buf << '\n';
    }
    return 0;
}

int run_fit(const FitArgs& a) {
    const auto samples = read_samples(a.input);
    const TailFit f = a.xmin ? fit_tail_at(samples, *a.xmin) : fit_tail(samples, a.min_tail);
    const json report{{"exponent", f.exponent}, {"xmin", f.xmin}, {"ks", f.ks}, {"n_tail", f.n_tail},
                      {"stderr", f.std_error}};
    std::cout << report.dump(2) << '\n';
    return 0;
}

int run_kinetics(const KineticsArgs& a) {
    const PdfSpec spec{a.alpha, a.hurst, a.sigma, a.diffusion.value_or(a.sigma)};
    const auto grid = UniformGrid::symmetric(a.xmax, a.nx);
    const auto r = kinetic_residual(spec, a.t, grid, a.dtfd.value_or(1e-4 * a.t));
    const json report{{"residual_sup", r.sup},
                      {"residual_l2", r.l2},
                      {"residual_spectral", r.spectral},
                      {"normalization_defect", r.normalization_defect}};
    std::cout << report.dump(2) << '\n';
    return 0;
}

int run_sweep_cmd(const SweepArgs& a) {
    SweepConfig cfg = a.config.empty() ? SweepConfig{} : load_sweep_config(a.config);
    if (!a.alphas.empty()) cfg.alphas = a.alphas;
    if (!a.hursts.empty()) cfg.hursts = a.hursts;
    if (a.trials) cfg.trials = *a.trials;
    if (a.n) cfg.path_length = *a.n;
    if (a.mesh) cfg.mesh = *a.mesh;
    if (a.truncation) cfg.truncation = *a.truncation;
    if (a.min_bursts) cfg.min_bursts = *a.min_bursts;
    if (a.workers) cfg.workers = *a.workers;
    if (a.threshold) cfg.threshold = *a.threshold;
    if (a.seed) cfg.base_seed = *a.seed;
    if (!a.out.empty()) cfg.output_dir = a.out;
    cfg.validate();

    SweepProgress progress;
    if (!a.quiet) {
        progress = [](const SweepRow& r, std::size_t done, std::size_t total) {
            std::fprintf(stderr, "[%zu/%zu] alpha=%g H=%g trial=%zu bursts=%zu %s\n", done, total, r.alpha, r.hurst,
                         r.trial, r.n_bursts, r.status.c_str());
        };
    }
    const auto result = run_sweep(cfg, progress);
    write_sweep_outputs(result, cfg.output_dir);
    std::cerr << "wrote " << result.rows.size() << " rows to " << cfg.output_dir.string() << '\n';
    return 0;
}

int run_figure(const FigureArgs& a) {
    const auto result = read_sweep(a.from);
    if (a.ids.size() == 1 && !ends_with(a.out, "/") && !std::filesystem::is_directory(a.out)) {
        const auto table = figure_data(result, a.ids.front());
        if (a.out.empty() || a.out == "-") {
            write_figure_csv(table, std::cout);
        } else {
            write_figure_csv(table, std::filesystem::path(a.out));
        }
        return 0;
    }
    const std::filesystem::path dir = a.out.empty() ? std::filesystem::path(a.from) : std::filesystem::path(a.out);
    std::filesystem::create_directories(dir);
    std::vector<int> ids = a.ids;
    if (ids.empty()) {
        for (int id = 1; id <= kFigureCount; ++id) ids.push_back(id);
    }
    int written = 0;
    for (int id : ids) {
        try {
            write_figure_csv(figure_data(result, id), dir / ("figure" + std::to_string(id) + ".csv"));
            ++written;
        } catch (const LookupError& e) {
            if (!a.ids.empty()) throw;
        }
    }
    std::cerr << "wrote " << written << " figure tables to " << dir.string() << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"lfsmlab: linear fractional stable motion laboratory"};
    app.set_version_flag("--version", std::string(version()));
    app.require_subcommand(1);

    GenerateArgs gen;
    auto* g = app.add_subcommand("generate", "Synthesize one lfsm path");
    g->add_option("--hurst,-H", gen.spec.hurst, "Self-similarity exponent H in (0,1)")->capture_default_str();
    g->add_option("--alpha,-a", gen.spec.alpha, "Stability exponent in (0,2]")->capture_default_str();
    g->add_option("--b1", gen.spec.b1, "Causal kernel coefficient")->capture_default_str();
    g->add_option("--b2", gen.spec.b2, "Anticausal kernel coefficient")->capture_default_str();
    g->add_option("--scale", gen.spec.scale, "Stable scale of a unit increment")->capture_default_str();
    g->add_option("--n,-n", gen.grid.n, "Number of steps")->capture_default_str();
    g->add_option("--mesh,-m", gen.grid.mesh, "Kernel sub-steps per step")->capture_default_str();
    g->add_option("--truncation,-M", gen.grid.truncation, "Kernel memory in steps")->capture_default_str();
    g->add_option("--dt", gen.grid.dt, "Time step")->capture_default_str();
    g->add_option("--seed,-s", gen.grid.seed, "Random seed")->capture_default_str();
    g->add_option("--out,-o", gen.out, "Output file")->required();
    g->add_option("--format", gen.format, "csv, binary or auto (binary for *.bin)")
        ->check(CLI::IsMember({"auto", "csv", "binary"}))
        ->capture_default_str();

    BurstsArgs bur;
    auto* b = app.add_subcommand("bursts", "Extract threshold bursts from a path file");
    b->add_option("input", bur.input, "Path file (CSV or binary)")->required()->check(CLI::ExistingFile);
    b->add_option("--threshold,-L", bur.threshold, "Threshold level")->capture_default_str();
    b->add_option("--min-bursts", bur.min_bursts, "Warn below this many bursts")->capture_default_str();
    b->add_option("--out,-o", bur.out, "Output CSV (default stdout)");

    FitArgs fit;
    auto* f = app.add_subcommand("fit", "Fit a power-law tail to a one-column sample file");
    f->add_option("input", fit.input, "Sample file")->required()->check(CLI::ExistingFile);
    f->add_option("--xmin", fit.xmin, "Fixed lower cutoff (default: KS-minimizing)");
    f->add_option("--min-tail", fit.min_tail, "Smallest tail for automatic xmin")->capture_default_str();

    KineticsArgs kin;
    auto* k = app.add_subcommand("kinetics-check", "Residual of the lfsm kinetic equation");
    k->add_option("--alpha", kin.alpha)->capture_default_str();
    k->add_option("--hurst", kin.hurst)->capture_default_str();
    k->add_option("--sigma", kin.sigma, "Width parameter sigma_bar")->capture_default_str();
    k->add_option("--diffusion", kin.diffusion, "Coefficient D (default: sigma)");
    k->add_option("--t", kin.t, "Time")->capture_default_str();
    k->add_option("--xmax", kin.xmax, "Grid half-width")->capture_default_str();
    k->add_option("--nx", kin.nx, "Grid points")->capture_default_str();
    k->add_option("--dtfd", kin.dtfd, "Finite-difference time step (default 1e-4 t)");

    SweepArgs sw;
    auto* s = app.add_subcommand("sweep", "Burst exponents over an (alpha, H) grid");
    s->add_option("--config,-c", sw.config, "JSON config file")->check(CLI::ExistingFile);
    s->add_option("--alphas", sw.alphas, "Override alphas")->delimiter(',');
    s->add_option("--hursts", sw.hursts, "Override hursts")->delimiter(',');
    s->add_option("--trials", sw.trials);
    s->add_option("--n", sw.n, "Path length");
    s->add_option("--mesh", sw.mesh);
    s->add_option("--truncation", sw.truncation);
    s->add_option("--min-bursts", sw.min_bursts);
    s->add_option("--workers,-j", sw.workers);
    s->add_option("--threshold", sw.threshold);
    s->add_option("--seed", sw.seed, "Base seed");
    s->add_option("--out,-o", sw.out, "Output directory");
    s->add_flag("--quiet,-q", sw.quiet, "No per-cell progress");

    FigureArgs fig;
    auto* fi = app.add_subcommand("figure", "Exponent-versus-H tables from a finished sweep");
    fi->add_option("--from", fig.from, "Sweep output directory")->required()->check(CLI::ExistingDirectory);
    fi->add_option("--id", fig.ids, "Figure ids 1-11 (default: all available)")->check(CLI::Range(1, kFigureCount));
    fi->add_option("--out,-o", fig.out, "File for a single id, directory otherwise");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*g) return run_generate(gen);
        if (*b) return run_bursts(bur);
        if (*f) return run_fit(fit);
        if (*k) return run_kinetics(kin);
        if (*s) return run_sweep_cmd(sw);
        if (*fi) return run_figure(fig);
    } catch (const std::exception& e) {
        std::cerr << "lfsmlab: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
