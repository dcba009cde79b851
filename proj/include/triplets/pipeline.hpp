#ifndef TRIPLETS_PIPELINE_HPP
#define TRIPLETS_PIPELINE_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"

#include "triplets/detection.hpp"
#include "triplets/jsa.hpp"
#include "triplets/separability.hpp"

namespace triplets
{

enum class OptimizerKind
{
    GradientDescent,
    BasinHopping,
};

struct DetectionConfig
{
    OptimizerKind optimizer = OptimizerKind::GradientDescent;
    int seeds = 1;
    std::uint64_t rng_seed = 0;
    double tol = 1e-6;
    int max_iter = 5000;
    int n_hops = 20;
    double perturb_scale = 0.1;
};

enum class SweepParameter
{
    PumpSigma,      // rad/s
    PumpSigmaRatio, // sigma / sigma_PM, waveguides only
    PumpLambda,     // nm, triplet centre follows at omega_p / 3
    PulseDuration,  // s FWHM, photon number held fixed
};

const char *sweep_parameter_name(SweepParameter p);
SweepParameter parse_sweep_parameter(const std::string &name);

struct SweepConfig
{
    SweepParameter parameter = SweepParameter::PumpSigma;
    std::vector<double> values;
};

struct GridConfig
{
    std::size_t n_points = 0; // 0: 101 for waveguides, 161 for rings
    std::optional<std::pair<double, double>> window;
};

using SourceConfig = std::variant<WaveguideSource, RingSource>;

struct RunConfig
{
    std::string name;
    SourceConfig source;
    GridConfig grid;
    std::optional<std::pair<double, double>> filter;
    std::optional<DetectionConfig> detection;
    std::optional<SweepConfig> sweep;
    std::string output_dir;
    int workers = 0; // 0: TRIPLETS_WORKERS or hardware concurrency
    nlohmann::json document; // validated input, used for hashing and metadata
};

// Validates and resolves a JSON config. Throws Error(ConfigError) naming the
// offending field path, e.g. "source.pump.lambda_nm".
RunConfig parse_config(const nlohmann::json &doc);
RunConfig load_config(const std::filesystem::path &path);

std::vector<std::string> preset_names();
nlohmann::json preset(const std::string &name); // throws ConfigError for unknown names

std::string config_hash(const nlohmann::json &doc);

struct SeedReport
{
    std::uint64_t seed = 0;
    double eta = 0.0;
    double eta_phase = 0.0;
    double grad_norm = 0.0;
    int iterations = 0;
    bool converged = false;

    bool operator==(const SeedReport &) const = default;
};

struct DetectionSummary
{
    std::string optimizer;
    double eta_f0 = 0.0;
    double grad_norm_f0 = 0.0;
    double eta_best = 0.0;
    double overlap_best_f0 = 0.0; // |<g_best, f0>|
    std::vector<SeedReport> runs;

    bool operator==(const DetectionSummary &) const = default;
};

struct RunSummary
{
    std::string name;
    std::string config_hash;
    std::string source_type;
    double omega_min = 0.0;
    double omega_max = 0.0;
    std::size_t n_points = 0;
    double pump_sigma = 0.0;
    double sigma_pm = 0.0; // 0 for rings
    double epsilon_sq = 0.0;
    double retained_power = 1.0;
    double kappa = 0.0;
    double kappa_modes = 0.0;
    double purity = 0.0;
    double concurrence = 0.0;
    std::vector<double> fractions; // r_0 .. r_9
    std::size_t mode_count = 0;
    std::optional<DetectionSummary> detection;
    std::vector<std::string> files;

    bool operator==(const RunSummary &) const = default;
};

void to_json(nlohmann::json &j, const RunSummary &s);
void from_json(const nlohmann::json &j, RunSummary &s);

// Everything a run computes, before anything touches the filesystem.
struct PipelineResult
{
    Jsa jsa;
    ReducedDensity density;
    ModeDecomposition modes;
    std::optional<OptimizerReport> best_lo;
    RunSummary summary;
};

FrequencyGrid resolve_grid(const RunConfig &config);
Jsa build_jsa(const RunConfig &config); // source -> grid -> JSA -> optional filter

PipelineResult evaluate(const RunConfig &config);

// evaluate() plus the file exports when config.output_dir is set.
RunSummary run(const RunConfig &config);

struct SweepRow
{
    double value = 0.0;
    std::optional<double> kappa;
    std::optional<double> epsilon_sq;
    std::string error;
};

struct SweepTable
{
    SweepParameter parameter = SweepParameter::PumpSigma;
    std::vector<SweepRow> rows;
};

RunConfig with_parameter(const RunConfig &base, SweepParameter p, double value);

// One row per value; per-point failures are recorded in the row, not thrown.
SweepTable sweep(const RunConfig &base, SweepParameter p, std::span<const double> values, int workers = 0);

SweepTable sweep_pump_bandwidth(const RunConfig &base, std::span<const double> ratios, int workers = 0);
SweepTable sweep_pump_wavelength(const RunConfig &base, std::span<const double> lambdas_nm, int workers = 0);
SweepTable sweep_pulse_duration(const RunConfig &base, std::span<const double> durations_s, int workers = 0);

void write_sweep(const SweepTable &table, const std::filesystem::path &dir);

// |epsilon|^2 per pulse times repetition rate.
double report_rate(double epsilon_sq, double rep_rate_hz);

int resolve_worker_count(int requested);

} // namespace triplets

#endif // TRIPLETS_PIPELINE_HPP
