#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lfsmlab {

/// Campaign over an (alpha, hurst) grid with repeated trials per cell.
struct SweepConfig {
    std::vector<double> alphas{2.0, 1.8, 1.6, 1.0};
    std::vector<double> hursts{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    std::size_t trials = 7;
    std::size_t path_length = std::size_t{1} << 20;
    double threshold = 0.0;
    std::uint64_t base_seed = 1;
    std::size_t mesh = 64;
    std::size_t truncation = 512;
    std::size_t min_bursts = 500;
    /// Worker threads; 0 picks the hardware concurrency.
    std::size_t workers = 0;
    std::filesystem::path output_dir = "sweep-out";

    void validate() const;
};

/// Parse a JSON object whose keys mirror SweepConfig field names. Unknown keys
/// are rejected. Missing keys keep their defaults.
SweepConfig parse_sweep_config(std::string_view json_text);
SweepConfig load_sweep_config(const std::filesystem::path& file);
std::string sweep_config_json(const SweepConfig& cfg);

/// Seed of one (alpha, hurst, trial) cell.
std::uint64_t cell_seed(std::uint64_t base_seed, std::size_t alpha_index, std::size_t hurst_index, std::size_t trial);

/// One (alpha, hurst, trial) outcome. Estimates that could not be formed are
/// empty and `status` names the reason.
struct SweepRow {
    double alpha = 0.0;
    double hurst = 0.0;
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    std::size_t n_bursts = 0;
    std::optional<double> beta_hat;
    std::optional<double> beta_stderr;
    std::optional<double> gamma_hat;
    std::optional<double> gamma_stderr;
    std::optional<double> psi_hat;
    std::optional<double> xmin_tau;
    std::optional<double> xmin_s;
    bool low_confidence = false;
    std::string status = "ok";
};

/// Trial statistics of one (alpha, hurst) cell. Means and standard deviations
/// run over the trials where the estimate exists.
struct SweepAggregate {
    double alpha = 0.0;
    double hurst = 0.0;
    std::size_t trials = 0;
    std::size_t n_beta = 0;
    std::size_t n_gamma = 0;
    std::size_t n_psi = 0;
    std::optional<double> beta_mean, beta_sd;
    std::optional<double> gamma_mean, gamma_sd;
    std::optional<double> psi_mean, psi_sd;
    double beta_pred = 0.0;
    double gamma_pred = 0.0;
    double psi_pred = 0.0;
};

struct SweepResult {
    SweepConfig config;
    std::vector<SweepRow> rows;            ///< sorted by (alpha index, hurst index, trial)
    std::vector<SweepAggregate> aggregates; ///< sorted by (alpha index, hurst index)
};

/// Synthesize, extract bursts and fit exponents for a single cell.
SweepRow run_cell(const SweepConfig& cfg, std::size_t alpha_index, std::size_t hurst_index, std::size_t trial);

using SweepProgress = std::function<void(const SweepRow&, std::size_t done, std::size_t total)>;

/// All cells on a bounded worker pool. Deterministic in the config regardless
/// of scheduling; per-cell failures are recorded in the rows.
SweepResult run_sweep(const SweepConfig& cfg, const SweepProgress& progress = {});

/// Aggregates in first-appearance order of (alpha, hurst) in `rows`.
std::vector<SweepAggregate> aggregate_rows(const std::vector<SweepRow>& rows);

struct FigurePoint {
    double hurst = 0.0;
    std::optional<double> exponent;
    double predicted = 0.0;
    std::optional<double> sd;
    std::size_t trials = 0;
};

/// Exponent-versus-H table of one figure.
///   1, 2   beta, |gamma| at alpha = 2, trial means
///   3, 4   beta, |gamma| at alpha = 2, first trial only
///   5      psi at alpha = 2
///   6, 7   beta, |gamma| at alpha = 1.8
///   8, 9   beta, |gamma| at alpha = 1.6
///   10, 11 beta, |gamma| at alpha = 1
struct FigureTable {
    int id = 0;
    double alpha = 0.0;
    std::string quantity; ///< "beta", "gamma" or "psi"
    bool single_trial = false;
    std::vector<FigurePoint> points;
};

inline constexpr int kFigureCount = 11;

/// Throws LookupError when the figure id is unknown or the result lacks its alpha.
FigureTable figure_data(const SweepResult& result, int figure_id);

/// sweep.csv, aggregates.csv, manifest.json and figureN.csv for every figure
/// whose alpha is present.
void write_sweep_outputs(const SweepResult& result, const std::filesystem::path& dir);

void write_figure_csv(const FigureTable& table, std::ostream& out);
void write_figure_csv(const FigureTable& table, const std::filesystem::path& file);

/// Reload rows (and the config echo from manifest.json) written by
/// write_sweep_outputs; aggregates are recomputed from the rows.
SweepResult read_sweep(const std::filesystem::path& dir);

} // namespace lfsmlab
