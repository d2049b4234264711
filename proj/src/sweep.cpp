#include "lfsmlab/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "lfsmlab/bursts.hpp"
#include "lfsmlab/errors.hpp"
#include "lfsmlab/lfsm.hpp"
#include "lfsmlab/rng.hpp"
#include "lfsmlab/version.hpp"
#include "text.hpp"

namespace lfsmlab {

const char* version() noexcept { return LFSMLAB_VERSION; }

using json = nlohmann::ordered_json;

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw DomainError("sweep config: " + msg);
}

} // namespace

void SweepConfig::validate() const {
    require(!alphas.empty(), "alphas must not be empty");
    require(!hursts.empty(), "hursts must not be empty");
    for (double a : alphas) require(a > 0.0 && a <= 2.0, "alpha outside (0, 2]");
    for (double h : hursts) require(h > 0.0 && h < 1.0, "hurst outside (0, 1)");
    require(trials >= 1, "trials must be at least 1");
    require(path_length >= 1, "path_length must be at least 1");
    require(mesh >= 1 && truncation >= 1, "mesh and truncation must be at least 1");
    require(std::isfinite(threshold), "threshold must be finite");
}

SweepConfig parse_sweep_config(std::string_view json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw FormatError(std::string("sweep config: ") + e.what());
    }
    if (!j.is_object()) throw FormatError("sweep config: top level must be an object");

    SweepConfig cfg;
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "alphas") cfg.alphas = value.get<std::vector<double>>();
            else if (key == "hursts") cfg.hursts = value.get<std::vector<double>>();
            else if (key == "trials") cfg.trials = value.get<std::size_t>();
            else if (key == "path_length") cfg.path_length = value.get<std::size_t>();
            else if (key == "threshold") cfg.threshold = value.get<double>();
            else if (key == "base_seed") cfg.base_seed = value.get<std::uint64_t>();
            else if (key == "mesh") cfg.mesh = value.get<std::size_t>();
            else if (key == "truncation") cfg.truncation = value.get<std::size_t>();
            else if (key == "min_bursts") cfg.min_bursts = value.get<std::size_t>();
            else if (key == "workers") cfg.workers = value.get<std::size_t>();
            else if (key == "output_dir") cfg.output_dir = value.get<std::string>();
            else throw FormatError("sweep config: unknown key '" + key + "'");
        }
    } catch (const json::exception& e) {
        throw FormatError(std::string("sweep config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

SweepConfig load_sweep_config(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open '" + file.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_sweep_config(ss.str());
}

namespace {

// Only the fields that determine results; workers and output_dir are left out so
// manifests from the same campaign compare equal.
json result_config_json(const SweepConfig& cfg) {
    return json{{"alphas", cfg.alphas},
                {"hursts", cfg.hursts},
                {"trials", cfg.trials},
                {"path_length", cfg.path_length},
                {"threshold", cfg.threshold},
                {"base_seed", cfg.base_seed},
                {"mesh", cfg.mesh},
                {"truncation", cfg.truncation},
                {"min_bursts", cfg.min_bursts}};
}

json config_to_json(const SweepConfig& cfg) {
    json j = result_config_json(cfg);
    j["workers"] = cfg.workers;
    j["output_dir"] = cfg.output_dir.string();
    return j;
}

} // namespace

std::string sweep_config_json(const SweepConfig& cfg) { return config_to_json(cfg).dump(2); }

std::uint64_t cell_seed(std::uint64_t base_seed, std::size_t alpha_index, std::size_t hurst_index, std::size_t trial) {
    return derive_seed(base_seed, {alpha_index, hurst_index, trial});
}

SweepRow run_cell(const SweepConfig& cfg, std::size_t alpha_index, std::size_t hurst_index, std::size_t trial) {
    SweepRow row;
    row.alpha = cfg.alphas.at(alpha_index);
    row.hurst = cfg.hursts.at(hurst_index);
    row.trial = trial;
    row.seed = cell_seed(cfg.base_seed, alpha_index, hurst_index, trial);

    std::vector<std::string> issues;
    BurstEnsemble ens;
    try {
        const LfsmSpec spec{row.hurst, row.alpha};
        const SynthesisGrid grid{cfg.path_length, cfg.mesh, cfg.truncation, 1.0, row.seed};
        ens = find_bursts(synthesize_lfsm(spec, grid), cfg.threshold);
    } catch (const std::exception&) {
        row.status = "synthesis_failed";
        return row;
    }
    row.n_bursts = ens.size();
    row.low_confidence = ens.size() < cfg.min_bursts;
    if (row.low_confidence) issues.emplace_back("low_confidence");

    try {
        const TailFit f = duration_exponent(ens, cfg.min_bursts);
        row.beta_hat = f.exponent;
        row.beta_stderr = f.std_error;
        row.xmin_tau = f.xmin;
    } catch (const EstimationError&) {
        issues.emplace_back("beta_failed");
    }
    try {
        const TailFit f = size_exponent(ens, cfg.min_bursts);
        row.gamma_hat = f.exponent;
        row.gamma_stderr = f.std_error;
        row.xmin_s = f.xmin;
    } catch (const EstimationError&) {
        issues.emplace_back("gamma_failed");
    }
    try {
        row.psi_hat = size_duration_exponent(ens);
    } catch (const EstimationError&) {
        issues.emplace_back("psi_failed");
    }

    if (!issues.empty()) {
        row.status.clear();
        for (const auto& s : issues) {
            if (!row.status.empty()) row.status += ';';
            row.status += s;
        }
    }
    return row;
}

SweepResult run_sweep(const SweepConfig& cfg, const SweepProgress& progress) {
    cfg.validate();
    struct Job {
        std::size_t a, h, t;
    };
    std::vector<Job> jobs;
    for (std::size_t a = 0; a < cfg.alphas.size(); ++a)
        for (std::size_t h = 0; h < cfg.hursts.size(); ++h)
            for (std::size_t t = 0; t < cfg.trials; ++t) jobs.push_back({a, h, t});

    std::vector<SweepRow> rows(jobs.size());
    std::atomic<std::size_t> next{0};
    std::size_t done = 0;
    std::mutex mu;
    std::exception_ptr failure;

    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= jobs.size()) return;
            try {
                rows[i] = run_cell(cfg, jobs[i].a, jobs[i].h, jobs[i].t);
            } catch (...) {
                std::lock_guard lock(mu);
                if (!failure) failure = std::current_exception();
                next = jobs.size();
                return;
            }
            std::lock_guard lock(mu);
            ++done;
            if (progress) progress(rows[i], done, jobs.size());
        }
    };

    std::size_t nworkers = cfg.workers ? cfg.workers : std::max(1u, std::thread::hardware_concurrency());
    nworkers = std::min(nworkers, jobs.size());
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 1; w < nworkers; ++w) pool.emplace_back(worker);
        worker();
    }
    if (failure) std::rethrow_exception(failure);

    SweepResult result;
    result.config = cfg;
    result.rows = std::move(rows);
    result.aggregates = aggregate_rows(result.rows);
    return result;
}

namespace {

struct Moments {
    std::size_t n = 0;
    std::optional<double> mean, sd;
};

Moments moments(const std::vector<double>& v) {
    Moments m;
    m.n = v.size();
    if (v.empty()) return m;
    double sum = 0.0;
    for (double x : v) sum += x;
    const double mean = sum / static_cast<double>(v.size());
    m.mean = mean;
    if (v.size() >= 2) {
        double ss = 0.0;
        for (double x : v) ss += (x - mean) * (x - mean);
        m.sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
    }
    return m;
}

} // namespace

std::vector<SweepAggregate> aggregate_rows(const std::vector<SweepRow>& rows) {
    std::vector<std::pair<double, double>> order;
    std::map<std::pair<double, double>, std::vector<const SweepRow*>> cells;
    for (const auto& r : rows) {
        const auto key = std::make_pair(r.alpha, r.hurst);
        auto [it, inserted] = cells.try_emplace(key);
        if (inserted) order.push_back(key);
        it->second.push_back(&r);
    }

    std::vector<SweepAggregate> out;
    for (const auto& key : order) {
        const auto& members = cells[key];
        std::vector<double> b, g, p;
        for (const SweepRow* r : members) {
            if (r->beta_hat) b.push_back(*r->beta_hat);
            if (r->gamma_hat) g.push_back(*r->gamma_hat);
            if (r->psi_hat) p.push_back(*r->psi_hat);
        }
        SweepAggregate agg;
        agg.alpha = key.first;
        agg.hurst = key.second;
        agg.trials = members.size();
        const auto mb = moments(b), mg = moments(g), mp = moments(p);
        agg.n_beta = mb.n;
        agg.beta_mean = mb.mean;
        agg.beta_sd = mb.sd;
        agg.n_gamma = mg.n;
        agg.gamma_mean = mg.mean;
        agg.gamma_sd = mg.sd;
        agg.n_psi = mp.n;
        agg.psi_mean = mp.mean;
        agg.psi_sd = mp.sd;
        const auto pred = predicted_exponents(agg.hurst);
        agg.beta_pred = pred.beta;
        agg.gamma_pred = pred.gamma;
        agg.psi_pred = pred.psi;
        out.push_back(agg);
    }
    return out;
}

namespace {

struct FigureSpec {
    double alpha;
    const char* quantity;
    bool single_trial;
};

FigureSpec figure_spec(int id) {
    switch (id) {
    case 1: return {2.0, "beta", false};
    case 2: return {2.0, "gamma", false};
    case 3: return {2.0, "beta", true};
    case 4: return {2.0, "gamma", true};
    case 5: return {2.0, "psi", false};
    case 6: return {1.8, "beta", false};
    case 7: return {1.8, "gamma", false};
    case 8: return {1.6, "beta", false};
    case 9: return {1.6, "gamma", false};
    case 10: return {1.0, "beta", false};
    case 11: return {1.0, "gamma", false};
    default: throw LookupError("figure_data: unknown figure id " + std::to_string(id));
    }
}

bool same_alpha(double a, double b) { return std::abs(a - b) <= 1e-12; }

} // namespace

FigureTable figure_data(const SweepResult& result, int figure_id) {
    const FigureSpec fs = figure_spec(figure_id);
    FigureTable table;
    table.id = figure_id;
    table.alpha = fs.alpha;
    table.quantity = fs.quantity;
    table.single_trial = fs.single_trial;
    const std::string q = fs.quantity;

    if (fs.single_trial) {
        for (const auto& r : result.rows) {
            if (!same_alpha(r.alpha, fs.alpha) || r.trial != 0) continue;
            const auto pred = predicted_exponents(r.hurst);
            FigurePoint pt;
            pt.hurst = r.hurst;
            pt.exponent = q == "beta" ? r.beta_hat : r.gamma_hat;
            pt.predicted = q == "beta" ? pred.beta : pred.gamma;
            pt.trials = pt.exponent ? 1 : 0;
            table.points.push_back(pt);
        }
    } else {
        for (const auto& agg : result.aggregates) {
            if (!same_alpha(agg.alpha, fs.alpha)) continue;
            FigurePoint pt;
            pt.hurst = agg.hurst;
            if (q == "beta") {
                pt.exponent = agg.beta_mean;
                pt.sd = agg.beta_sd;
                pt.predicted = agg.beta_pred;
                pt.trials = agg.n_beta;
            } else if (q == "gamma") {
                pt.exponent = agg.gamma_mean;
                pt.sd = agg.gamma_sd;
                pt.predicted = agg.gamma_pred;
                pt.trials = agg.n_gamma;
            } else {
                pt.exponent = agg.psi_mean;
                pt.sd = agg.psi_sd;
                pt.predicted = agg.psi_pred;
                pt.trials = agg.n_psi;
            }
            table.points.push_back(pt);
        }
    }
    if (table.points.empty()) {
        throw LookupError("figure_data: result has no cells at alpha = " + detail::format_number(fs.alpha));
    }
    std::stable_sort(table.points.begin(), table.points.end(),
                     [](const FigurePoint& a, const FigurePoint& b) { return a.hurst < b.hurst; });
    return table;
}

namespace {

std::string opt(const std::optional<double>& v) { return v ? detail::format_number(*v) : std::string(); }

std::ofstream open_out(const std::filesystem::path& file) {
    std::ofstream out(file, std::ios::out | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + file.string() + "' for writing");
    return out;
}

constexpr const char* kRowHeader =
    "alpha,hurst,trial,seed,n_bursts,beta_hat,beta_stderr,gamma_hat,gamma_stderr,psi_hat,xmin_tau,xmin_s,"
    "low_confidence,status";

} // namespace

void write_figure_csv(const FigureTable& table, const std::filesystem::path& file) {
    auto out = open_out(file);
    write_figure_csv(table, out);
}

void write_figure_csv(const FigureTable& table, std::ostream& out) {
    out << "hurst,exponent,predicted,sd,trials\n";
    for (const auto& p : table.points) {
        out << detail::format_number(p.hurst) << ',' << opt(p.exponent) << ',' << detail::format_number(p.predicted)
            << ',' << opt(p.sd) << ',' << p.trials << '\n';
    }
}

void write_sweep_outputs(const SweepResult& result, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    {
        auto out = open_out(dir / "sweep.csv");
        out << kRowHeader << '\n';
        for (const auto& r : result.rows) {
            out << detail::format_number(r.alpha) << ',' << detail::format_number(r.hurst) << ',' << r.trial << ','
                << r.seed << ',' << r.n_bursts << ',' << opt(r.beta_hat) << ',' << opt(r.beta_stderr) << ','
                << opt(r.gamma_hat) << ',' << opt(r.gamma_stderr) << ',' << opt(r.psi_hat) << ','
                << opt(r.xmin_tau) << ',' << opt(r.xmin_s) << ',' << (r.low_confidence ? 1 : 0) << ','
                << r.status << '\n';
        }
    }
    {
        auto out = open_out(dir / "aggregates.csv");
        out << "alpha,hurst,trials,n_beta,beta_mean,beta_sd,beta_pred,n_gamma,gamma_mean,gamma_sd,gamma_pred,"
               "n_psi,psi_mean,psi_sd,psi_pred\n";
        for (const auto& a : result.aggregates) {
            out << detail::format_number(a.alpha) << ',' << detail::format_number(a.hurst) << ',' << a.trials << ','
                << a.n_beta << ',' << opt(a.beta_mean) << ',' << opt(a.beta_sd) << ','
                << detail::format_number(a.beta_pred) << ',' << a.n_gamma << ',' << opt(a.gamma_mean) << ','
                << opt(a.gamma_sd) << ',' << detail::format_number(a.gamma_pred) << ',' << a.n_psi << ','
                << opt(a.psi_mean) << ',' << opt(a.psi_sd) << ',' << detail::format_number(a.psi_pred) << '\n';
        }
    }
    {
        json cells = json::array();
        for (const auto& r : result.rows) {
            cells.push_back({{"alpha", r.alpha}, {"hurst", r.hurst}, {"trial", r.trial}, {"seed", r.seed}});
        }
        const json manifest{
            {"tool", "lfsmlab"},
            {"version", version()},
            {"config", result_config_json(result.config)},
            {"conventions",
             {{"exponents", "pdf decay magnitudes: p(x) ~ x^-exponent; ccdf exponent is one less"},
              {"xmin", "KS-minimizing cutoff over sample values with n_tail >= 50"},
              {"burst_size", "sum of (y - threshold) * dt over the excursion"},
              {"seed", "splitmix64 hash of (base_seed, alpha_index, hurst_index, trial)"}}},
            {"outputs", {"sweep.csv", "aggregates.csv"}},
            {"cells", cells}};
        auto out = open_out(dir / "manifest.json");
        out << manifest.dump(2) << '\n';
    }
    for (int id = 1; id <= kFigureCount; ++id) {
        FigureTable table;
        try {
            table = figure_data(result, id);
        } catch (const LookupError&) {
            continue;
        }
        write_figure_csv(table, dir / ("figure" + std::to_string(id) + ".csv"));
    }
}

namespace {

std::optional<double> parse_opt(std::string_view s, const std::string& where) {
    if (detail::trim(s).empty()) return std::nullopt;
    double v = 0;
    if (!detail::parse_number(s, v)) throw FormatError(where + ": bad number '" + std::string(s) + "'");
    return v;
}

} // namespace

SweepResult read_sweep(const std::filesystem::path& dir) {
    SweepResult result;
    {
        std::ifstream in(dir / "manifest.json");
        if (!in) throw std::runtime_error("cannot open '" + (dir / "manifest.json").string() + "'");
        json manifest;
        try {
            manifest = json::parse(in);
        } catch (const json::parse_error& e) {
            throw FormatError(std::string("manifest.json: ") + e.what());
        }
        if (!manifest.contains("config")) throw FormatError("manifest.json: missing config");
        result.config = parse_sweep_config(manifest["config"].dump());
    }

    const auto file = dir / "sweep.csv";
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open '" + file.string() + "'");
    std::string line;
    if (!std::getline(in, line) || detail::trim(line) != kRowHeader) {
        throw FormatError(file.string() + ": unexpected header");
    }
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (detail::trim(line).empty()) continue;
        const std::string where = file.string() + ":" + std::to_string(lineno);
        const auto f = detail::split(line, ',');
        if (f.size() != 14) throw FormatError(where + ": expected 14 fields");
        SweepRow r;
        int low = 0;
        if (!detail::parse_number(f[0], r.alpha) || !detail::parse_number(f[1], r.hurst) ||
            !detail::parse_integer(f[2], r.trial) || !detail::parse_integer(f[3], r.seed) ||
            !detail::parse_integer(f[4], r.n_bursts) || !detail::parse_integer(f[12], low)) {
            throw FormatError(where + ": malformed row");
        }
        r.beta_hat = parse_opt(f[5], where);
        r.beta_stderr = parse_opt(f[6], where);
        r.gamma_hat = parse_opt(f[7], where);
        r.gamma_stderr = parse_opt(f[8], where);
        r.psi_hat = parse_opt(f[9], where);
        r.xmin_tau = parse_opt(f[10], where);
        r.xmin_s = parse_opt(f[11], where);
        r.low_confidence = low != 0;
        r.status = std::string(detail::trim(f[13]));
        result.rows.push_back(std::move(r));
    }
    result.aggregates = aggregate_rows(result.rows);
    return result;
}

} // namespace lfsmlab
