#include "triplets/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <thread>

namespace triplets
{

using nlohmann::json;

namespace
{

struct CsvWriter
{
    explicit CsvWriter(const std::filesystem::path &path) : out(path)
    {
        if (!out)
            throw Error(ErrorCode::IoError, "cannot write " + path.string());
    }

    void header(const char *h) { out << h << '\n'; }

    template <class... T>
    void row(T... values)
    {
        bool first = true;
        ((out << (first ? "" : ",") << fmt(values), first = false), ...);
        out << '\n';
    }

    static std::string fmt(double v)
    {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return buf;
    }
    static std::string fmt(std::size_t v) { return std::to_string(v); }
    static std::string fmt(const std::string &v) { return v; }

    std::ofstream out;
};

void write_json(const std::filesystem::path &path, const json &j)
{
    std::ofstream out(path);
    if (!out)
        throw Error(ErrorCode::IoError, "cannot write " + path.string());
    out << j.dump(2) << '\n';
}

template <class Fn>
void parallel_for(std::size_t count, int workers, Fn &&fn)
{
    const auto n_threads = std::min<std::size_t>(static_cast<std::size_t>(resolve_worker_count(workers)), count);
    if (n_threads <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++)
                fn(i);
        });
    for (auto &th : pool)
        th.join();
}

double waveguide_sigma_pm(const WaveguideSource &w)
{
    const double beta_f = local_taylor(w.disp_f, w.omega_f()).beta2;
    return beta_f == 0.0 ? 0.0 : pmf_bandwidth(w.length, beta_f);
}

PumpSpec &pump_of(SourceConfig &s)
{
    return std::visit([](auto &src) -> PumpSpec & { return src.pump; }, s);
}

const PumpSpec &pump_of(const SourceConfig &s)
{
    return std::visit([](const auto &src) -> const PumpSpec & { return src.pump; }, s);
}

FilterResult build_filtered(const RunConfig &config)
{
    const FrequencyGrid grid = resolve_grid(config);
    Jsa j = std::visit(
        [&](const auto &src) {
            using T = std::decay_t<decltype(src)>;
            if constexpr (std::is_same_v<T, WaveguideSource>)
                return build_waveguide_jsa(src, grid);
            else
                return build_ring_jsa(src, grid);
        },
        config.source);
    if (!config.filter)
        return FilterResult{std::move(j), 1.0};
    return apply_filter(j, config.filter->first, config.filter->second);
}

json seed_json(const SeedReport &r)
{
    return {{"seed", r.seed},
            {"eta", r.eta},
            {"eta_phase", r.eta_phase},
            {"grad_norm", r.grad_norm},
            {"iterations", r.iterations},
            {"converged", r.converged}};
}

} // namespace

int resolve_worker_count(int requested)
{
    if (requested > 0)
        return requested;
    if (const char *env = std::getenv("TRIPLETS_WORKERS"); env && *env) {
        const int n = std::atoi(env);
        if (n > 0)
            return n;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

FrequencyGrid resolve_grid(const RunConfig &config)
{
    return std::visit(
        [&](const auto &src) {
            using T = std::decay_t<decltype(src)>;
            constexpr bool waveguide = std::is_same_v<T, WaveguideSource>;
            const std::size_t n = config.grid.n_points != 0 ? config.grid.n_points : (waveguide ? 101u : 161u);
            if (config.grid.window)
                return FrequencyGrid(config.grid.window->first, config.grid.window->second, n);
            if constexpr (waveguide)
                return default_waveguide_grid(src, n);
            else
                return default_ring_grid(src, n);
        },
        config.source);
}

Jsa build_jsa(const RunConfig &config) { return build_filtered(config).jsa; }

PipelineResult evaluate(const RunConfig &config)
{
    FilterResult filtered = build_filtered(config);
    ReducedDensity rd = reduced_density_matrix(filtered.jsa);
    ModeDecomposition md = pseudo_schmidt(rd);

    RunSummary s;
    s.name = config.name;
    s.config_hash = config_hash(config.document);
    s.source_type = std::holds_alternative<WaveguideSource>(config.source) ? "waveguide" : "ring";
    const auto &g = filtered.jsa.grid();
    s.omega_min = g.omega_min();
    s.omega_max = g.omega_max();
    s.n_points = g.size();
    s.pump_sigma = pump_of(config.source).sigma;
    if (const auto *w = std::get_if<WaveguideSource>(&config.source))
        s.sigma_pm = waveguide_sigma_pm(*w);
    s.epsilon_sq = filtered.jsa.probability();
    s.retained_power = filtered.retained_power;
    s.kappa = kappa(rd);
    s.kappa_modes = kappa(md);
    s.purity = rd.purity();
    s.concurrence = concurrence(rd);
    const std::size_t n_frac = std::min<std::size_t>(10, md.fractions.size());
    s.fractions.assign(md.fractions.begin(), md.fractions.begin() + static_cast<std::ptrdiff_t>(n_frac));
    s.mode_count = md.mode_count();

    std::optional<OptimizerReport> best;
    if (config.detection) {
        const auto &d = *config.detection;
        const LocalOscillator f0(g, md.modes.front());
        const auto f0_eval = evaluate_eta(filtered.jsa, f0);

        std::vector<std::optional<OptimizerReport>> reports(static_cast<std::size_t>(d.seeds));
        parallel_for(reports.size(), config.workers, [&](std::size_t i) {
            const std::uint64_t seed = d.rng_seed + i;
            const LocalOscillator start = uniform_random_lo(g, seed);
            GradientParams gp{d.tol, d.max_iter, 0.5};
            OptimizerReport r = d.optimizer == OptimizerKind::GradientDescent
                                    ? optimize_lo_gd(filtered.jsa, start, gp)
                                    : optimize_lo_basinhopping(filtered.jsa, start,
                                                               BasinHoppingParams{d.n_hops, d.perturb_scale, seed, gp});
            r.seed = seed;
            reports[i] = std::move(r);
        });

        DetectionSummary ds;
        ds.optimizer = d.optimizer == OptimizerKind::GradientDescent ? "gd" : "bh";
        ds.eta_f0 = std::abs(f0_eval.eta);
        ds.grad_norm_f0 = f0_eval.tangent_norm;
        for (auto &r : reports) {
            ds.runs.push_back(SeedReport{r->seed, r->eta_final, r->eta_phase, r->grad_norm_final, r->iterations,
                                         r->converged});
            if (!best || r->eta_final > best->eta_final)
                best = std::move(*r);
        }
        ds.eta_best = best->eta_final;
        ds.overlap_best_f0 = std::abs(best->g_final.inner(md.modes.front()));
        s.detection = std::move(ds);
    }

    return PipelineResult{std::move(filtered.jsa), std::move(rd), std::move(md), std::move(best), std::move(s)};
}

RunSummary run(const RunConfig &config)
{
    PipelineResult r = evaluate(config);
    if (config.output_dir.empty())
        return r.summary;

    const std::filesystem::path dir(config.output_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw Error(ErrorCode::IoError, "cannot create " + dir.string() + ": " + ec.message());

    const auto &g = r.jsa.grid();
    const std::size_t n = g.size();
    auto &files = r.summary.files;

    {
        const Eigen::MatrixXd s = project_s(r.jsa);
        CsvWriter csv(dir / "projection_s.csv");
        csv.header("omega1,omega2,value");
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                csv.row(g.omega(a), g.omega(b), s(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)));
        files.push_back("projection_s.csv");
    }
    {
        const std::size_t mid = n / 2;
        CsvWriter csv(dir / "psi_abs2_slice.csv");
        csv.header("omega1,omega2,value");
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                csv.row(g.omega(a), g.omega(b), std::norm(r.jsa.psi(a, b, mid)));
        files.push_back("psi_abs2_slice.csv");
    }
    {
        CsvWriter csv(dir / "rho.csv");
        csv.header("omega1,omega2,re_rho,im_rho");
        const auto &m = r.density.rho.values();
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) {
                const cplx v = m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
                csv.row(g.omega(a), g.omega(b), v.real(), v.imag());
            }
        files.push_back("rho.csv");
    }
    {
        CsvWriter csv(dir / "fractions.csv");
        csv.header("n,r_n");
        for (std::size_t m = 0; m < r.modes.fractions.size(); ++m)
            csv.row(m, r.modes.fractions[m]);
        files.push_back("fractions.csv");
    }
    const std::size_t n_modes = std::min<std::size_t>(5, r.modes.modes.size());
    for (std::size_t m = 0; m < n_modes; ++m) {
        const std::string name = "mode_" + std::to_string(m) + ".csv";
        CsvWriter csv(dir / name);
        csv.header("omega,re_f,im_f");
        for (std::size_t i = 0; i < n; ++i)
            csv.row(g.omega(i), r.modes.modes[m][i].real(), r.modes.modes[m][i].imag());
        files.push_back(name);
    }

    if (r.best_lo) {
        CsvWriter csv(dir / "lo.csv");
        csv.header("omega,re_g,im_g");
        const auto &v = r.best_lo->g_final.values();
        for (std::size_t i = 0; i < n; ++i)
            csv.row(g.omega(i), v[i].real(), v[i].imag());
        files.push_back("lo.csv");

        json runs = json::array();
        for (const auto &s : r.summary.detection->runs)
            runs.push_back(seed_json(s));
        write_json(dir / "optimizer_report.json",
                   {{"optimizer", r.summary.detection->optimizer},
                    {"eta", r.best_lo->eta_final},
                    {"grad_norm", r.best_lo->grad_norm_final},
                    {"iterations", r.best_lo->iterations},
                    {"converged", r.best_lo->converged},
                    {"seed", r.best_lo->seed},
                    {"runs", runs}});
        files.push_back("optimizer_report.json");
    }

    write_json(dir / "jsa_meta.json",
               {{"grid", {{"omega_min", g.omega_min()}, {"omega_max", g.omega_max()}, {"n_points", n}}},
                {"epsilon", r.jsa.epsilon.real()},
                {"epsilon_sq", r.jsa.probability()},
                {"retained_power", r.summary.retained_power},
                {"config_hash", r.summary.config_hash},
                {"source", config.document.contains("source") ? config.document.at("source") : json()}});
    files.push_back("jsa_meta.json");
    files.push_back("summary.json");

    write_json(dir / "summary.json", json(r.summary));
    return r.summary;
}

RunConfig with_parameter(const RunConfig &base, SweepParameter p, double value)
{
    RunConfig c = base;
    c.sweep.reset();
    c.detection.reset();
    c.output_dir.clear();
    PumpSpec &pump = pump_of(c.source);
    switch (p) {
    case SweepParameter::PumpSigma:
        if (!(value > 0.0))
            throw Error(ErrorCode::InvalidArgument, "pump bandwidth must be positive");
        pump.sigma = value;
        break;
    case SweepParameter::PumpSigmaRatio: {
        const auto *w = std::get_if<WaveguideSource>(&c.source);
        if (!w)
            throw Error(ErrorCode::InvalidArgument, "pump_sigma_ratio requires a waveguide source");
        const double spm = pmf_bandwidth(w->length, local_taylor(w->disp_f, w->omega_f()).beta2);
        if (!(value > 0.0))
            throw Error(ErrorCode::InvalidArgument, "bandwidth ratio must be positive");
        pump.sigma = value * spm;
        break;
    }
    case SweepParameter::PumpLambda:
        pump.omega_p = omega_from_wavelength(value * 1e-9);
        break;
    case SweepParameter::PulseDuration:
        pump.sigma = sigma_from_duration(value);
        break;
    }
    c.document["sweep_point"] = {{"parameter", sweep_parameter_name(p)}, {"value", value}};
    c.document.erase("sweep");
    c.document.erase("detection");
    c.document.erase("output_dir");
    return c;
}

SweepTable sweep(const RunConfig &base, SweepParameter p, std::span<const double> values, int workers)
{
    SweepTable table{p, std::vector<SweepRow>(values.size())};
    parallel_for(values.size(), workers != 0 ? workers : base.workers, [&](std::size_t i) {
        SweepRow &row = table.rows[i];
        row.value = values[i];
        try {
            const RunConfig point = with_parameter(base, p, values[i]);
            const Jsa j = build_jsa(point);
            row.kappa = kappa(reduced_density_matrix(j));
            row.epsilon_sq = j.probability();
        } catch (const std::exception &e) {
            row.error = e.what();
        }
    });
    return table;
}

SweepTable sweep_pump_bandwidth(const RunConfig &base, std::span<const double> ratios, int workers)
{
    if (!std::holds_alternative<WaveguideSource>(base.source))
        throw Error(ErrorCode::InvalidArgument, "bandwidth sweep requires a waveguide source");
    return sweep(base, SweepParameter::PumpSigmaRatio, ratios, workers);
}

SweepTable sweep_pump_wavelength(const RunConfig &base, std::span<const double> lambdas_nm, int workers)
{
    if (!std::holds_alternative<WaveguideSource>(base.source))
        throw Error(ErrorCode::InvalidArgument, "wavelength sweep requires a waveguide source");
    return sweep(base, SweepParameter::PumpLambda, lambdas_nm, workers);
}

SweepTable sweep_pulse_duration(const RunConfig &base, std::span<const double> durations_s, int workers)
{
    if (!std::holds_alternative<RingSource>(base.source))
        throw Error(ErrorCode::InvalidArgument, "pulse-duration sweep requires a ring source");
    return sweep(base, SweepParameter::PulseDuration, durations_s, workers);
}

void write_sweep(const SweepTable &table, const std::filesystem::path &dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw Error(ErrorCode::IoError, "cannot create " + dir.string() + ": " + ec.message());
    const std::string stem = std::string("sweep_") + sweep_parameter_name(table.parameter);
    CsvWriter csv(dir / (stem + ".csv"));
    csv.header("value,kappa");
    json rows = json::array();
    for (const auto &r : table.rows) {
        if (r.kappa)
            csv.row(r.value, *r.kappa);
        json row = {{"value", r.value}};
        row["kappa"] = r.kappa ? json(*r.kappa) : json();
        row["epsilon_sq"] = r.epsilon_sq ? json(*r.epsilon_sq) : json();
        if (!r.error.empty())
            row["error"] = r.error;
        rows.push_back(std::move(row));
    }
    write_json(dir / (stem + ".json"), {{"parameter", sweep_parameter_name(table.parameter)}, {"rows", rows}});
}

double report_rate(double epsilon_sq, double rep_rate_hz)
{
    if (epsilon_sq < 0.0 || rep_rate_hz < 0.0)
        throw Error(ErrorCode::InvalidArgument, "probability and repetition rate must be non-negative");
    return epsilon_sq * rep_rate_hz;
}

void to_json(json &j, const RunSummary &s)
{
    j = json{{"name", s.name},
             {"config_hash", s.config_hash},
             {"source_type", s.source_type},
             {"grid", {{"omega_min", s.omega_min}, {"omega_max", s.omega_max}, {"n_points", s.n_points}}},
             {"pump_sigma", s.pump_sigma},
             {"sigma_pm", s.sigma_pm},
             {"epsilon_sq", s.epsilon_sq},
             {"retained_power", s.retained_power},
             {"kappa", s.kappa},
             {"kappa_modes", s.kappa_modes},
             {"purity", s.purity},
             {"concurrence", s.concurrence},
             {"fractions", s.fractions},
             {"mode_count", s.mode_count},
             {"files", s.files}};
    if (s.detection) {
        json runs = json::array();
        for (const auto &r : s.detection->runs)
            runs.push_back(seed_json(r));
        j["detection"] = {{"optimizer", s.detection->optimizer},
                          {"eta_f0", s.detection->eta_f0},
                          {"grad_norm_f0", s.detection->grad_norm_f0},
                          {"eta_best", s.detection->eta_best},
                          {"overlap_best_f0", s.detection->overlap_best_f0},
                          {"runs", runs}};
    }
}

void from_json(const json &j, RunSummary &s)
{
    s.name = j.at("name").get<std::string>();
    s.config_hash = j.at("config_hash").get<std::string>();
    s.source_type = j.at("source_type").get<std::string>();
    s.omega_min = j.at("grid").at("omega_min").get<double>();
    s.omega_max = j.at("grid").at("omega_max").get<double>();
    s.n_points = j.at("grid").at("n_points").get<std::size_t>();
    s.pump_sigma = j.at("pump_sigma").get<double>();
    s.sigma_pm = j.at("sigma_pm").get<double>();
    s.epsilon_sq = j.at("epsilon_sq").get<double>();
    s.retained_power = j.at("retained_power").get<double>();
    s.kappa = j.at("kappa").get<double>();
    s.kappa_modes = j.at("kappa_modes").get<double>();
    s.purity = j.at("purity").get<double>();
    s.concurrence = j.at("concurrence").get<double>();
    s.fractions = j.at("fractions").get<std::vector<double>>();
    s.mode_count = j.at("mode_count").get<std::size_t>();
    s.files = j.at("files").get<std::vector<std::string>>();
    s.detection.reset();
    if (j.contains("detection")) {
        const auto &d = j.at("detection");
        DetectionSummary ds;
        ds.optimizer = d.at("optimizer").get<std::string>();
        ds.eta_f0 = d.at("eta_f0").get<double>();
        ds.grad_norm_f0 = d.at("grad_norm_f0").get<double>();
        ds.eta_best = d.at("eta_best").get<double>();
        ds.overlap_best_f0 = d.at("overlap_best_f0").get<double>();
        for (const auto &r : d.at("runs"))
            ds.runs.push_back(SeedReport{r.at("seed").get<std::uint64_t>(), r.at("eta").get<double>(),
                                         r.at("eta_phase").get<double>(), r.at("grad_norm").get<double>(),
                                         r.at("iterations").get<int>(), r.at("converged").get<bool>()});
        s.detection = std::move(ds);
    }
}

} // namespace triplets
