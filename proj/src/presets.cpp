#include "triplets/pipeline.hpp"

namespace triplets
{

using nlohmann::json;

namespace
{

// Phase- and group-velocity-matched Taylor pair, expanded about the pump
// centre and a third of it.
json taylor_pair(double beta_p_fs2_mm, double beta_f_fs2_mm)
{
    return {
        {"pump", {{"model", "taylor"}, {"n_eff", 1.45}, {"group_index", 1.47},
                  {"beta2_fs2_per_mm", beta_p_fs2_mm}}},
        {"triplet", {{"model", "taylor"}, {"n_eff", 1.45}, {"group_index", 1.47},
                     {"beta2_fs2_per_mm", beta_f_fs2_mm}}},
    };
}

json ideal_waveguide()
{
    return {
        {"name", "ideal-waveguide"},
        {"source",
         {{"type", "waveguide"},
          {"length_m", 0.3},
          {"gamma_fff", 1.0},
          {"pump", {{"lambda_nm", 458.7}, {"sigma_over_sigma_pm", 1.0}, {"n_photons", 1e10}}},
          {"dispersion", taylor_pair(0.0, 21.9)}}},
        {"grid", {{"n_points", 101}}},
        {"detection", {{"optimizer", "gd"}, {"seeds", 10}, {"rng_seed", 1}, {"tol", 1e-6}}},
    };
}

json geo2_taper_taylor()
{
    return {
        {"name", "geo2-taper-taylor"},
        {"source",
         {{"type", "waveguide"},
          {"length_m", 0.3},
          {"gamma_fff", 1.0},
          {"pump", {{"lambda_nm", 458.7}, {"sigma_over_sigma_pm", 1.0}, {"n_photons", 1e10}}},
          {"dispersion", taylor_pair(6.4, 21.9)}}},
        {"grid", {{"n_points", 101}}},
        {"filter", {{"omega_lo_rad_s", 11.5e14}, {"omega_hi_rad_s", 15e14}}},
        {"detection", {{"optimizer", "bh"}, {"seeds", 1}, {"rng_seed", 1}, {"tol", 1e-6}, {"n_hops", 5}}},
    };
}

json ring(const char *name, double q_pump, double duration_s)
{
    return {
        {"name", name},
        {"source",
         {{"type", "ring"},
          {"radius_m", 120e-6},
          {"gamma_fff", 1.0},
          {"pump", {{"lambda_nm", 532.0}, {"duration_fwhm_s", duration_s}, {"pulse_energy_j", 0.1e-6}}},
          {"resonance_pump", {{"q_loaded", q_pump}, {"gamma_coupling", 1.0}}},
          {"resonance_triplet", {{"q_loaded", 1e7}, {"gamma_coupling", 1.0}}}}},
        {"grid", {{"n_points", 161}}},
    };
}

} // namespace

std::vector<std::string> preset_names()
{
    return {"ideal-waveguide", "geo2-taper-taylor", "ring-mismatched-Q", "ring-equal-Q"};
}

json preset(const std::string &name)
{
    if (name == "ideal-waveguide")
        return ideal_waveguide();
    if (name == "geo2-taper-taylor")
        return geo2_taper_taylor();
    if (name == "ring-mismatched-Q")
        return ring("ring-mismatched-Q", 1e5, 10e-12);
    if (name == "ring-equal-Q")
        return ring("ring-equal-Q", 1e7, 1e-12);
    throw Error(ErrorCode::ConfigError, "preset: unknown name '" + name + "'");
}

} // namespace triplets
