#include "triplets/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace triplets
{

using nlohmann::json;

namespace
{

[[noreturn]] void config_error(const std::string &path, const std::string &msg)
{
    throw Error(ErrorCode::ConfigError, path + ": " + msg);
}

std::string join(const std::string &path, const std::string &key)
{
    return path.empty() ? key : path + "." + key;
}

// Read-only view of a JSON object that reports failures with the field path.
class Fields
{
public:
    Fields(const json &j, std::string path) : j_(j), path_(std::move(path))
    {
        if (!j_.is_object())
            config_error(path_.empty() ? "<root>" : path_, "expected an object");
    }

    bool has(const char *key) const { return j_.contains(key) && !j_.at(key).is_null(); }

    double number(const char *key) const
    {
        if (!has(key))
            config_error(join(path_, key), "required field is missing");
        const auto &v = j_.at(key);
        if (!v.is_number())
            config_error(join(path_, key), "expected a number");
        const double d = v.get<double>();
        if (!std::isfinite(d))
            config_error(join(path_, key), "must be finite");
        return d;
    }

    double positive(const char *key) const
    {
        const double d = number(key);
        if (!(d > 0.0))
            config_error(join(path_, key), "must be positive");
        return d;
    }

    std::optional<double> maybe_number(const char *key) const
    {
        if (!has(key))
            return std::nullopt;
        return number(key);
    }

    std::string string(const char *key) const
    {
        if (!has(key) || !j_.at(key).is_string())
            config_error(join(path_, key), "expected a string");
        return j_.at(key).get<std::string>();
    }

    std::string string_or(const char *key, const std::string &fallback) const
    {
        return has(key) ? string(key) : fallback;
    }

    long integer_or(const char *key, long fallback) const
    {
        if (!has(key))
            return fallback;
        const auto &v = j_.at(key);
        if (!v.is_number_integer())
            config_error(join(path_, key), "expected an integer");
        return v.get<long>();
    }

    Fields object(const char *key) const
    {
        if (!has(key))
            config_error(join(path_, key), "required object is missing");
        return Fields(j_.at(key), join(path_, key));
    }

    std::pair<double, double> interval(const char *key) const
    {
        const auto &v = j_.at(key);
        const std::string p = join(path_, key);
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
            config_error(p, "expected [low, high]");
        const double lo = v[0].get<double>(), hi = v[1].get<double>();
        if (!(hi > lo))
            config_error(p, "high must exceed low");
        return {lo, hi};
    }

    const json &raw() const { return j_; }
    const std::string &path() const { return path_; }

private:
    const json &j_;
    std::string path_;
};

cplx parse_gamma(const Fields &f)
{
    if (!f.has("gamma_fff"))
        config_error(join(f.path(), "gamma_fff"), "required field is missing");
    const auto &v = f.raw().at("gamma_fff");
    if (v.is_number())
        return cplx(f.number("gamma_fff"), 0.0);
    const Fields g = f.object("gamma_fff");
    return std::polar(g.number("magnitude"), g.maybe_number("phase_rad").value_or(0.0));
}

double parse_center_omega(const Fields &f, const char *lambda_key, const char *omega_key)
{
    if (f.has(omega_key))
        return f.positive(omega_key);
    if (f.has(lambda_key))
        return omega_from_wavelength(f.positive(lambda_key) * 1e-9);
    config_error(join(f.path(), lambda_key), std::string("one of ") + lambda_key + " or " + omega_key +
                                                 " is required");
}

// Taylor coefficients; the expansion point defaults to `default_omega0`.
DispersionModel parse_dispersion(const Fields &f, double default_omega0)
{
    const std::string model = f.string("model");
    if (model == "taylor") {
        TaylorDispersion t;
        t.omega0 = (f.has("lambda0_nm") || f.has("omega0_rad_s"))
                       ? parse_center_omega(f, "lambda0_nm", "omega0_rad_s")
                       : default_omega0;
        if (f.has("k0_per_m"))
            t.k0 = f.number("k0_per_m");
        else
            t.k0 = f.positive("n_eff") * t.omega0 / constants::c;
        if (f.has("inv_v_s_per_m"))
            t.inv_v = f.number("inv_v_s_per_m");
        else
            t.inv_v = f.positive("group_index") / constants::c;
        if (f.has("beta2_s2_per_m"))
            t.beta2 = f.number("beta2_s2_per_m");
        else
            t.beta2 = f.number("beta2_fs2_per_mm") * fs2_per_mm;
        return t;
    }
    if (model == "table") {
        try {
            return load_dispersion_table(f.string("path"));
        } catch (const Error &e) {
            config_error(join(f.path(), "path"), e.what());
        }
    }
    if (model == "sellmeier") {
        try {
            if (f.has("path"))
                return SellmeierDispersion{load_sellmeier(f.string("path"))};
            if (f.has("family")) {
                const auto fam = load_sellmeier_family(data_directory() / "sellmeier" / (f.string("family") + ".json"));
                return SellmeierDispersion{fam.at(f.number("mol_fraction"))};
            }
            return SellmeierDispersion{
                load_sellmeier(data_directory() / "sellmeier" / (f.string("material") + ".json"))};
        } catch (const Error &e) {
            if (e.code() == ErrorCode::ConfigError)
                throw;
            config_error(f.path(), e.what());
        }
    }
    config_error(join(f.path(), "model"), "unknown dispersion model '" + model + "' (taylor|table|sellmeier)");
}

// Pump centre, bandwidth and photon number. `sigma_pm` resolves
// sigma_over_sigma_pm for waveguides; rings pass 0.
PumpSpec parse_pump(const Fields &f, double sigma_pm)
{
    PumpSpec p;
    p.omega_p = parse_center_omega(f, "lambda_nm", "omega_rad_s");

    int bandwidth_keys = f.has("sigma_rad_s") + f.has("sigma_over_sigma_pm") + f.has("duration_fwhm_s");
    if (bandwidth_keys != 1)
        config_error(join(f.path(), "sigma_rad_s"),
                     "exactly one of sigma_rad_s, sigma_over_sigma_pm, duration_fwhm_s is required");
    if (f.has("sigma_rad_s"))
        p.sigma = f.positive("sigma_rad_s");
    else if (f.has("duration_fwhm_s"))
        p.sigma = sigma_from_duration(f.positive("duration_fwhm_s"));
    else {
        if (!(sigma_pm > 0.0))
            config_error(join(f.path(), "sigma_over_sigma_pm"), "only valid for waveguide sources");
        p.sigma = f.positive("sigma_over_sigma_pm") * sigma_pm;
    }

    if (f.has("pulse_energy_j") && f.has("n_photons"))
        config_error(join(f.path(), "n_photons"), "give either n_photons or pulse_energy_j, not both");
    if (f.has("pulse_energy_j"))
        p.n_photons = f.positive("pulse_energy_j") / (constants::hbar * p.omega_p);
    else
        p.n_photons = f.maybe_number("n_photons").value_or(1.0);
    if (!(p.n_photons > 0.0))
        config_error(join(f.path(), "n_photons"), "must be positive");
    return p;
}

WaveguideSource parse_waveguide(const Fields &f)
{
    WaveguideSource s;
    s.length = f.positive("length_m");
    s.gamma_fff = parse_gamma(f);
    const Fields pump = f.object("pump");
    const double omega_p = parse_center_omega(pump, "lambda_nm", "omega_rad_s");
    const Fields disp = f.object("dispersion");
    s.disp_p = parse_dispersion(disp.object("pump"), omega_p);
    s.disp_f = parse_dispersion(disp.object("triplet"), omega_p / 3.0);

    double sigma_pm = 0.0;
    if (pump.has("sigma_over_sigma_pm")) {
        try {
            sigma_pm = pmf_bandwidth(s.length, local_taylor(s.disp_f, omega_p / 3.0).beta2);
        } catch (const Error &e) {
            config_error(join(pump.path(), "sigma_over_sigma_pm"), e.what());
        }
    }
    s.pump = parse_pump(pump, sigma_pm);
    return s;
}

RingResonance parse_resonance(const Fields &f, double default_omega)
{
    RingResonance r;
    r.omega_res = (f.has("lambda_nm") || f.has("omega_rad_s")) ? parse_center_omega(f, "lambda_nm", "omega_rad_s")
                                                               : default_omega;
    r.q_loaded = f.positive("q_loaded");
    r.gamma_coupling = f.maybe_number("gamma_coupling").value_or(1.0);
    return r;
}

RingSource parse_ring(const Fields &f)
{
    RingSource s;
    if (f.has("circumference_m"))
        s.circumference = f.positive("circumference_m");
    else
        s.circumference = 2.0 * constants::pi * f.positive("radius_m");
    s.gamma_fff = parse_gamma(f);
    s.pump = parse_pump(f.object("pump"), 0.0);
    s.res_p = parse_resonance(f.object("resonance_pump"), s.pump.omega_p);
    s.res_f = parse_resonance(f.object("resonance_triplet"), s.pump.omega_p / 3.0);
    return s;
}

DetectionConfig parse_detection(const Fields &f)
{
    DetectionConfig d;
    const std::string opt = f.string_or("optimizer", "gd");
    if (opt == "gd")
        d.optimizer = OptimizerKind::GradientDescent;
    else if (opt == "bh")
        d.optimizer = OptimizerKind::BasinHopping;
    else
        config_error(join(f.path(), "optimizer"), "expected 'gd' or 'bh'");
    d.seeds = static_cast<int>(f.integer_or("seeds", 1));
    if (d.seeds < 1)
        config_error(join(f.path(), "seeds"), "must be >= 1");
    const long rng = f.integer_or("rng_seed", 0);
    if (rng < 0)
        config_error(join(f.path(), "rng_seed"), "must be non-negative");
    d.rng_seed = static_cast<std::uint64_t>(rng);
    d.tol = f.has("tol") ? f.positive("tol") : 1e-6;
    d.max_iter = static_cast<int>(f.integer_or("max_iter", 5000));
    d.n_hops = static_cast<int>(f.integer_or("n_hops", 20));
    if (d.max_iter < 0 || d.n_hops < 0)
        config_error(f.path(), "max_iter and n_hops must be non-negative");
    d.perturb_scale = f.has("perturb_scale") ? f.positive("perturb_scale") : 0.1;
    return d;
}

} // namespace

const char *sweep_parameter_name(SweepParameter p)
{
    switch (p) {
    case SweepParameter::PumpSigma: return "pump_sigma";
    case SweepParameter::PumpSigmaRatio: return "pump_sigma_ratio";
    case SweepParameter::PumpLambda: return "pump_lambda";
    case SweepParameter::PulseDuration: return "pulse_duration";
    }
    return "unknown";
}

SweepParameter parse_sweep_parameter(const std::string &name)
{
    for (auto p : {SweepParameter::PumpSigma, SweepParameter::PumpSigmaRatio, SweepParameter::PumpLambda,
                   SweepParameter::PulseDuration})
        if (name == sweep_parameter_name(p))
            return p;
    throw Error(ErrorCode::ConfigError,
                "sweep.parameter: unknown parameter '" + name +
                    "' (pump_sigma|pump_sigma_ratio|pump_lambda|pulse_duration)");
}

RunConfig parse_config(const json &doc)
{
    const Fields root(doc, "");
    RunConfig c;
    c.name = root.string_or("name", "run");
    c.document = doc;

    const Fields src = root.object("source");
    const std::string type = src.string("type");
    try {
        if (type == "waveguide")
            c.source = parse_waveguide(src);
        else if (type == "ring")
            c.source = parse_ring(src);
        else
            config_error("source.type", "expected 'waveguide' or 'ring'");
    } catch (const Error &e) {
        if (e.code() == ErrorCode::ConfigError)
            throw;
        config_error("source", e.what());
    }

    if (root.has("grid")) {
        const Fields g = root.object("grid");
        const long n = g.integer_or("n_points", 0);
        if (n != 0 && n < 2)
            config_error("grid.n_points", "must be >= 2");
        c.grid.n_points = static_cast<std::size_t>(n);
        if (g.has("window_rad_s"))
            c.grid.window = g.interval("window_rad_s");
    }
    if (root.has("filter")) {
        const Fields f = root.object("filter");
        const double lo = f.number("omega_lo_rad_s");
        const double hi = f.number("omega_hi_rad_s");
        if (!(hi > lo))
            config_error("filter.omega_hi_rad_s", "must exceed omega_lo_rad_s");
        c.filter = std::make_pair(lo, hi);
    }
    if (root.has("detection"))
        c.detection = parse_detection(root.object("detection"));
    if (root.has("sweep")) {
        const Fields s = root.object("sweep");
        SweepConfig sc;
        sc.parameter = parse_sweep_parameter(s.string("parameter"));
        const auto &vals = s.raw().contains("values") ? s.raw().at("values") : json();
        if (!vals.is_array() || vals.empty())
            config_error("sweep.values", "must be a nonempty array of numbers");
        for (std::size_t i = 0; i < vals.size(); ++i) {
            if (!vals[i].is_number())
                config_error("sweep.values[" + std::to_string(i) + "]", "expected a number");
            sc.values.push_back(vals[i].get<double>());
        }
        c.sweep = std::move(sc);
    }
    c.output_dir = root.string_or("output_dir", "");
    c.workers = static_cast<int>(root.integer_or("workers", 0));
    return c;
}

RunConfig load_config(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::ConfigError, "cannot open config file " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception &e) {
        throw Error(ErrorCode::ConfigError, path.string() + ": " + e.what());
    }
    return parse_config(doc);
}

std::string config_hash(const json &doc)
{
    // FNV-1a over the canonical dump (object keys are sorted)
    const std::string text = doc.dump();
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace triplets
