#include "triplets/triplets_c.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "triplets/pipeline.hpp"

using namespace triplets;

struct trp_jsa
{
    Jsa jsa;
};

namespace
{

thread_local std::string last_error;

trp_status status_of(ErrorCode code)
{
    switch (code) {
    case ErrorCode::InvalidArgument: return TRP_INVALID_ARGUMENT;
    case ErrorCode::OutOfRange: return TRP_OUT_OF_RANGE;
    case ErrorCode::NonHermitianInput: return TRP_NON_HERMITIAN;
    case ErrorCode::NegativeRadicand: return TRP_NEGATIVE_RADICAND;
    case ErrorCode::InvalidLength: return TRP_INVALID_LENGTH;
    case ErrorCode::ZeroDispersion: return TRP_ZERO_DISPERSION;
    case ErrorCode::NoSignChange: return TRP_NO_SIGN_CHANGE;
    case ErrorCode::ZeroKernel: return TRP_ZERO_KERNEL;
    case ErrorCode::EmptyFilter: return TRP_EMPTY_FILTER;
    case ErrorCode::InvalidDensity: return TRP_INVALID_DENSITY;
    case ErrorCode::GridMismatch: return TRP_GRID_MISMATCH;
    case ErrorCode::NotNormalized: return TRP_NOT_NORMALIZED;
    case ErrorCode::ConfigError: return TRP_CONFIG_ERROR;
    case ErrorCode::IoError: return TRP_IO_ERROR;
    }
    return TRP_INTERNAL;
}

template <class Fn>
trp_status guarded(Fn &&fn)
{
    last_error.clear();
    try {
        fn();
        return TRP_OK;
    } catch (const Error &e) {
        last_error = e.what();
        return status_of(e.code());
    } catch (const nlohmann::json::exception &e) {
        last_error = std::string("ConfigError: ") + e.what();
        return TRP_CONFIG_ERROR;
    } catch (const std::exception &e) {
        last_error = e.what();
        return TRP_INTERNAL;
    } catch (...) {
        last_error = "unknown error";
        return TRP_INTERNAL;
    }
}

void require(bool ok, const char *what)
{
    if (!ok)
        throw Error(ErrorCode::InvalidArgument, what);
}

char *dup_string(const std::string &s)
{
    char *out = static_cast<char *>(std::malloc(s.size() + 1));
    if (!out)
        throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

RunConfig config_from(const char *text)
{
    require(text != nullptr, "config is null");
    return parse_config(nlohmann::json::parse(text));
}

} // namespace

extern "C" {

const char *trp_last_error(void) { return last_error.c_str(); }

const char *trp_status_name(trp_status status)
{
    switch (status) {
    case TRP_OK: return "Ok";
    case TRP_INTERNAL: return "Internal";
    default: return error_code_name(static_cast<ErrorCode>(static_cast<int>(status) - 1));
    }
}

void trp_string_free(char *s) { std::free(s); }

trp_status trp_run_config(const char *config_json, const char *out_dir, char **summary_json)
{
    return guarded([&] {
        require(summary_json != nullptr, "summary_json is null");
        RunConfig c = config_from(config_json);
        if (out_dir)
            c.output_dir = out_dir;
        *summary_json = dup_string(nlohmann::json(run(c)).dump());
    });
}

trp_status trp_run_preset(const char *name, const char *out_dir, char **summary_json)
{
    return guarded([&] {
        require(name != nullptr && summary_json != nullptr, "null argument");
        RunConfig c = parse_config(preset(name));
        if (out_dir)
            c.output_dir = out_dir;
        *summary_json = dup_string(nlohmann::json(run(c)).dump());
    });
}

trp_status trp_sweep(const char *config_json, const char *parameter, const double *values, size_t count,
                     const char *out_dir, char **table_json)
{
    return guarded([&] {
        require(parameter != nullptr && table_json != nullptr, "null argument");
        require(values != nullptr || count == 0, "values is null");
        const RunConfig c = config_from(config_json);
        const SweepTable t = sweep(c, parse_sweep_parameter(parameter), std::span<const double>(values, count));
        if (out_dir && *out_dir)
            write_sweep(t, out_dir);
        nlohmann::json rows = nlohmann::json::array();
        for (const auto &r : t.rows) {
            nlohmann::json row = {{"value", r.value}};
            row["kappa"] = r.kappa ? nlohmann::json(*r.kappa) : nlohmann::json();
            row["epsilon_sq"] = r.epsilon_sq ? nlohmann::json(*r.epsilon_sq) : nlohmann::json();
            row["error"] = r.error;
            rows.push_back(std::move(row));
        }
        *table_json = dup_string(nlohmann::json{{"parameter", parameter}, {"rows", rows}}.dump());
    });
}

trp_status trp_preset_names(char **names_json)
{
    return guarded([&] {
        require(names_json != nullptr, "names_json is null");
        *names_json = dup_string(nlohmann::json(preset_names()).dump());
    });
}

trp_status trp_preset_show(const char *name, char **config_json)
{
    return guarded([&] {
        require(name != nullptr && config_json != nullptr, "null argument");
        *config_json = dup_string(preset(name).dump(2));
    });
}

trp_status trp_jsa_from_config(const char *config_json, trp_jsa **out)
{
    return guarded([&] {
        require(out != nullptr, "out is null");
        *out = nullptr;
        *out = new trp_jsa{build_jsa(config_from(config_json))};
    });
}

void trp_jsa_free(trp_jsa *jsa) { delete jsa; }

trp_status trp_jsa_grid(const trp_jsa *jsa, double *omega_min, double *omega_max, size_t *n_points)
{
    return guarded([&] {
        require(jsa != nullptr, "jsa is null");
        const auto &g = jsa->jsa.grid();
        if (omega_min)
            *omega_min = g.omega_min();
        if (omega_max)
            *omega_max = g.omega_max();
        if (n_points)
            *n_points = g.size();
    });
}

trp_status trp_jsa_epsilon_sq(const trp_jsa *jsa, double *out)
{
    return guarded([&] {
        require(jsa != nullptr && out != nullptr, "null argument");
        *out = jsa->jsa.probability();
    });
}

trp_status trp_jsa_kappa(const trp_jsa *jsa, double *out)
{
    return guarded([&] {
        require(jsa != nullptr && out != nullptr, "null argument");
        *out = kappa(reduced_density_matrix(jsa->jsa));
    });
}

trp_status trp_jsa_values(const trp_jsa *jsa, double *re, double *im, size_t count)
{
    return guarded([&] {
        require(jsa != nullptr && re != nullptr && im != nullptr, "null argument");
        const auto data = jsa->jsa.psi.data();
        if (count != data.size())
            throw Error(ErrorCode::GridMismatch, "expected " + std::to_string(data.size()) + " values");
        for (std::size_t i = 0; i < count; ++i) {
            re[i] = data[i].real();
            im[i] = data[i].imag();
        }
    });
}

trp_status trp_jsa_overlap(const trp_jsa *jsa, const double *re_g, const double *im_g, size_t n_points,
                           double *eta_abs, double *eta_phase)
{
    return guarded([&] {
        require(jsa != nullptr && re_g != nullptr && eta_abs != nullptr, "null argument");
        const auto &g = jsa->jsa.grid();
        if (n_points != g.size())
            throw Error(ErrorCode::GridMismatch, "local oscillator has " + std::to_string(n_points) + " points, grid has " +
                                                     std::to_string(g.size()));
        std::vector<cplx> v(n_points);
        for (std::size_t i = 0; i < n_points; ++i)
            v[i] = {re_g[i], im_g ? im_g[i] : 0.0};
        const cplx eta = overlap_eta(jsa->jsa, LocalOscillator(g, std::move(v)));
        *eta_abs = std::abs(eta);
        if (eta_phase)
            *eta_phase = std::arg(eta);
    });
}

trp_status trp_pmf_bandwidth(double length_m, double beta2_s2_per_m, double *out)
{
    return guarded([&] {
        require(out != nullptr, "out is null");
        *out = pmf_bandwidth(length_m, beta2_s2_per_m);
    });
}

trp_status trp_quadrature_moments(double epsilon, double eta, double theta, double out[4])
{
    return guarded([&] {
        require(out != nullptr, "out is null");
        const auto m = quadrature_moments(epsilon, eta, theta);
        std::copy(m.begin(), m.end(), out);
    });
}

trp_status trp_report_rate(double epsilon_sq, double rep_rate_hz, double *out)
{
    return guarded([&] {
        require(out != nullptr, "out is null");
        *out = report_rate(epsilon_sq, rep_rate_hz);
    });
}

trp_status trp_splitter_coincidence(const double re_u[3], const double im_u[3], trp_splitter_convention convention,
                                    double *out)
{
    return guarded([&] {
        require(re_u != nullptr && im_u != nullptr && out != nullptr, "null argument");
        require(convention == TRP_SPLITTER_PAPER || convention == TRP_SPLITTER_BOSONIC, "unknown convention");
        const SplitterColumn u{{re_u[0], im_u[0]}, {re_u[1], im_u[1]}, {re_u[2], im_u[2]}};
        *out = splitter_coincidence(u, convention == TRP_SPLITTER_PAPER ? SplitterConvention::Paper
                                                                          : SplitterConvention::Bosonic);
    });
}

} // extern "C"
