#include "triplets/jsa.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace triplets
{

namespace
{

// Fills t(i,j,k) = value(i,j,k) for a kernel symmetric in its three indices.
// Each orbit is evaluated once with sorted indices, so psi is exactly
// permutation symmetric.
template <class Fn>
void fill_symmetric(Tensor3C &t, Fn &&value)
{
    const std::size_t n = t.extent();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j)
            for (std::size_t k = j; k < n; ++k) {
                const cplx v = value(i, j, k);
                t(i, j, k) = v;
                t(i, k, j) = v;
                t(j, i, k) = v;
                t(j, k, i) = v;
                t(k, i, j) = v;
                t(k, j, i) = v;
            }
}

double weighted_power(const Tensor3C &t)
{
    const double n = l2_norm3(t);
    return n * n;
}

// psi = i f / sqrt(int |f|^2), |epsilon|^2 = int |f|^2 / 6
Jsa normalize_kernel(Tensor3C kernel)
{
    const double power = weighted_power(kernel);
    if (!(power > 0.0) || !std::isfinite(power))
        throw Error(ErrorCode::ZeroKernel, "kernel integrates to zero on this grid");
    const double eps = std::sqrt(power / 6.0);
    kernel *= cplx(0.0, 1.0 / std::sqrt(power));
    return Jsa{std::move(kernel), cplx(eps, 0.0)};
}

void require_in_domain(const DispersionModel &m, double lo, double hi, const char *what)
{
    if (const auto d = domain(m); d && (lo < d->first || hi > d->second))
        throw Error(ErrorCode::OutOfRange, std::string(what) + " dispersion model does not cover the grid");
}

} // namespace

double sigma_from_duration(double duration_fwhm_s)
{
    if (!(duration_fwhm_s > 0.0))
        throw Error(ErrorCode::InvalidArgument, "pulse duration must be positive");
    return 2.0 * std::sqrt(std::log(2.0)) / duration_fwhm_s;
}

double duration_from_sigma(double sigma)
{
    if (!(sigma > 0.0))
        throw Error(ErrorCode::InvalidArgument, "pump bandwidth must be positive");
    return 2.0 * std::sqrt(std::log(2.0)) / sigma;
}

PumpSpec PumpSpec::from_pulse(double pulse_energy_j, double duration_fwhm_s, double lambda_m)
{
    if (!(pulse_energy_j > 0.0))
        throw Error(ErrorCode::InvalidArgument, "pulse energy must be positive");
    PumpSpec p;
    p.omega_p = omega_from_wavelength(lambda_m);
    p.sigma = sigma_from_duration(duration_fwhm_s);
    p.n_photons = pulse_energy_j / (constants::hbar * p.omega_p);
    return p;
}

double PumpSpec::peak_amplitude() const
{
    if (!(sigma > 0.0))
        throw Error(ErrorCode::InvalidArgument, "pump bandwidth must be positive");
    if (!(n_photons >= 0.0))
        throw Error(ErrorCode::InvalidArgument, "pump photon number must be non-negative");
    return std::sqrt(n_photons / (sigma * std::sqrt(constants::pi)));
}

cplx pump_envelope(const PumpSpec &p, double omega_sum)
{
    const double x = (omega_sum - p.omega_p) / p.sigma;
    return cplx(p.peak_amplitude() * std::exp(-0.5 * x * x), 0.0);
}

double pmf_sinc(double dk, double length)
{
    const double x = 0.5 * length * dk;
    if (std::abs(x) < 1e-8)
        return 1.0 - x * x / 6.0;
    return std::sin(x) / x;
}

RingResonance RingResonance::from_linewidth(double omega_res, double linewidth, double gamma_coupling)
{
    if (!(linewidth > 0.0) || !(omega_res > 0.0))
        throw Error(ErrorCode::InvalidArgument, "resonance and linewidth must be positive");
    return RingResonance{omega_res, omega_res / (2.0 * linewidth), gamma_coupling};
}

cplx field_enhancement(const RingResonance &res, double omega, int sign, double circumference)
{
    if (!(circumference > 0.0))
        throw Error(ErrorCode::InvalidLength, "ring circumference must be positive");
    if (!(res.q_loaded > 0.0))
        throw Error(ErrorCode::InvalidArgument, "loaded Q must be positive");
    const double s = sign >= 0 ? 1.0 : -1.0;
    const cplx denom(res.omega_res - omega, s * res.linewidth());
    return std::conj(cplx(res.gamma_coupling, 0.0)) / (std::sqrt(circumference) * denom);
}

FrequencyGrid default_waveguide_grid(const WaveguideSource &src, std::size_t n_points)
{
    const double wf = src.omega_f();
    double half = 3.5 * src.pump.sigma;
    const double beta_f = local_taylor(src.disp_f, wf).beta2;
    if (beta_f != 0.0)
        half = 3.5 * std::max(src.pump.sigma, pmf_bandwidth(src.length, beta_f));
    return FrequencyGrid::centered(wf, half, n_points);
}

FrequencyGrid default_ring_grid(const RingSource &src, std::size_t n_points)
{
    return FrequencyGrid::centered(src.pump.omega_p / 3.0, 8.0 * src.res_f.linewidth(), n_points);
}

Jsa build_waveguide_jsa(const WaveguideSource &src, const FrequencyGrid &grid)
{
    if (!(src.length > 0.0))
        throw Error(ErrorCode::InvalidLength, "waveguide length must be positive");
    require_in_domain(src.disp_f, grid.omega_min(), grid.omega_max(), "triplet");
    require_in_domain(src.disp_p, 3.0 * grid.omega_min(), 3.0 * grid.omega_max(), "pump");

    const std::size_t n = grid.size();
    std::vector<double> k_f(n);
    for (std::size_t i = 0; i < n; ++i)
        k_f[i] = wavenumber(src.disp_f, grid.omega(i));

    // on a uniform grid the sum frequency depends only on i + j + k
    const std::size_t n_sum = 3 * n - 2;
    std::vector<double> k_p(n_sum);
    std::vector<cplx> alpha(n_sum);
    for (std::size_t s = 0; s < n_sum; ++s) {
        const double w = 3.0 * grid.omega_min() + grid.step() * static_cast<double>(s);
        k_p[s] = wavenumber(src.disp_p, w);
        alpha[s] = pump_envelope(src.pump, w);
    }

    const cplx prefactor = constants::hbar * src.omega_f() / constants::pi * src.gamma_fff * src.length;
    Tensor3C kernel(grid);
    fill_symmetric(kernel, [&](std::size_t i, std::size_t j, std::size_t k) {
        const std::size_t s = i + j + k;
        const double dk = k_p[s] - k_f[i] - k_f[j] - k_f[k];
        return prefactor * alpha[s] * pmf_sinc(dk, src.length);
    });
    return normalize_kernel(std::move(kernel));
}

Jsa build_ring_jsa(const RingSource &src, const FrequencyGrid &grid)
{
    if (!(src.circumference > 0.0))
        throw Error(ErrorCode::InvalidLength, "ring circumference must be positive");

    const std::size_t n = grid.size();
    std::vector<cplx> f_f(n);
    for (std::size_t i = 0; i < n; ++i)
        f_f[i] = std::conj(field_enhancement(src.res_f, grid.omega(i), +1, src.circumference));

    const std::size_t n_sum = 3 * n - 2;
    std::vector<cplx> f_p(n_sum);
    for (std::size_t s = 0; s < n_sum; ++s) {
        const double w = 3.0 * grid.omega_min() + grid.step() * static_cast<double>(s);
        f_p[s] = std::conj(field_enhancement(src.res_p, w, -1, src.circumference)) * pump_envelope(src.pump, w);
    }

    const double omega_f = src.pump.omega_p / 3.0;
    const cplx prefactor = constants::hbar * omega_f / constants::pi * src.gamma_fff * src.circumference;
    Tensor3C kernel(grid);
    fill_symmetric(kernel, [&](std::size_t i, std::size_t j, std::size_t k) {
        return prefactor * f_f[i] * f_f[j] * f_f[k] * f_p[i + j + k];
    });
    return normalize_kernel(std::move(kernel));
}

FilterResult apply_filter(const Jsa &j, double omega_lo, double omega_hi)
{
    const auto &g = j.grid();
    const std::size_t n = g.size();
    std::vector<char> keep(n);
    std::size_t kept = 0;
    for (std::size_t i = 0; i < n; ++i) {
        keep[i] = g.omega(i) >= omega_lo && g.omega(i) <= omega_hi;
        kept += keep[i] ? 1 : 0;
    }
    if (kept == n)
        return FilterResult{j, 1.0};

    Tensor3C psi = j.psi;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c)
                if (!(keep[a] && keep[b] && keep[c]))
                    psi(a, b, c) = cplx(0.0, 0.0);

    const double retained = weighted_power(psi);
    if (!(retained >= 1e-12))
        throw Error(ErrorCode::EmptyFilter, "filter window retains no amplitude");
    psi *= cplx(1.0 / std::sqrt(retained), 0.0);
    return FilterResult{Jsa{std::move(psi), j.epsilon * std::sqrt(retained)}, retained};
}

Eigen::MatrixXd project_s(const Jsa &j)
{
    const auto &g = j.grid();
    const std::size_t n = g.size();
    const auto w = g.weights();
    Eigen::MatrixXd s(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            double acc = 0.0;
            for (std::size_t c = 0; c < n; ++c)
                acc += w[c] * std::norm(j.psi(a, b, c));
            s(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = acc;
        }
    return s;
}

} // namespace triplets
