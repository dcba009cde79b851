#ifndef TRIPLETS_JSA_HPP
#define TRIPLETS_JSA_HPP

#include <Eigen/Dense>

#include "triplets/dispersion.hpp"
#include "triplets/grid.hpp"

namespace triplets
{

// Gaussian pump: alpha(w) = amplitude * exp(-(w - omega_p)^2 / (2 sigma^2)),
// amplitude chosen so that the integral of |alpha|^2 equals n_photons.
struct PumpSpec
{
    double omega_p = 0.0;   // rad/s
    double sigma = 0.0;     // rad/s
    double n_photons = 1.0;

    // sigma = 2 sqrt(ln 2) / tau_fwhm, n_photons = energy / (hbar omega_p)
    static PumpSpec from_pulse(double pulse_energy_j, double duration_fwhm_s, double lambda_m);

    double peak_amplitude() const;
};

double sigma_from_duration(double duration_fwhm_s);
double duration_from_sigma(double sigma);

cplx pump_envelope(const PumpSpec &p, double omega_sum);

// sinc(length * dk / 2), sinc(0) = 1
double pmf_sinc(double dk, double length);

struct WaveguideSource
{
    DispersionModel disp_p;
    DispersionModel disp_f;
    double length = 0.0;
    cplx gamma_fff{1.0, 0.0};
    PumpSpec pump;

    double omega_f() const { return pump.omega_p / 3.0; }
};

struct RingResonance
{
    double omega_res = 0.0;
    double q_loaded = 0.0;
    double gamma_coupling = 1.0;

    double linewidth() const { return omega_res / (2.0 * q_loaded); }
    static RingResonance from_linewidth(double omega_res, double linewidth, double gamma_coupling = 1.0);
};

struct RingSource
{
    RingResonance res_p;
    RingResonance res_f;
    double circumference = 0.0;
    cplx gamma_fff{1.0, 0.0};
    PumpSpec pump;
};

// Normalized triphoton amplitude plus the per-pulse triplet amplitude
// (real, non-negative; the factor i lives in psi).
struct Jsa
{
    Tensor3C psi;
    cplx epsilon;

    const FrequencyGrid &grid() const { return psi.grid(); }
    double probability() const { return std::norm(epsilon); }
};

// F_{J,sign}(w) = gamma_J^* / (sqrt(L) ((w_J - w) + sign i Gamma_J))
cplx field_enhancement(const RingResonance &res, double omega, int sign, double circumference);

FrequencyGrid default_waveguide_grid(const WaveguideSource &src, std::size_t n_points = 101);
FrequencyGrid default_ring_grid(const RingSource &src, std::size_t n_points = 161);

Jsa build_waveguide_jsa(const WaveguideSource &src, const FrequencyGrid &grid);
Jsa build_ring_jsa(const RingSource &src, const FrequencyGrid &grid);

// Hard box filter on every axis, renormalized; epsilon scaled by the square
// root of the retained power.
struct FilterResult
{
    Jsa jsa;
    double retained_power = 0.0;
};
FilterResult apply_filter(const Jsa &j, double omega_lo, double omega_hi);

// s(w1, w2) = sum_k w_k |psi(w1, w2, w_k)|^2
Eigen::MatrixXd project_s(const Jsa &j);

} // namespace triplets

#endif // TRIPLETS_JSA_HPP
