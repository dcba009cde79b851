#ifndef TRIPLETS_TEST_HELPERS_HPP
#define TRIPLETS_TEST_HELPERS_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "triplets/jsa.hpp"

namespace testing
{

using triplets::cplx;
using triplets::FrequencyGrid;
using triplets::Jsa;
using triplets::Tensor3C;

inline double unit_norm(const FrequencyGrid &g, const std::vector<cplx> &v)
{
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
        s += g.weight(i) * std::norm(v[i]);
    return std::sqrt(s);
}

inline std::vector<cplx> normalized(const FrequencyGrid &g, std::vector<cplx> v)
{
    const double n = unit_norm(g, v);
    for (auto &x : v)
        x /= n;
    return v;
}

// Gaussian with a linear chirp, unit quadrature norm.
inline std::vector<cplx> gaussian_mode(const FrequencyGrid &g, double centre, double width, double chirp = 0.0)
{
    std::vector<cplx> v(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double x = (g.omega(i) - centre) / width;
        v[i] = std::exp(cplx(-0.5 * x * x, chirp * x));
    }
    return normalized(g, v);
}

// Hermite-Gauss order 1, orthogonal to gaussian_mode with the same centre.
inline std::vector<cplx> first_excited_mode(const FrequencyGrid &g, double centre, double width)
{
    std::vector<cplx> v(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double x = (g.omega(i) - centre) / width;
        v[i] = x * std::exp(-0.5 * x * x);
    }
    return normalized(g, v);
}

inline Tensor3C product_tensor(const FrequencyGrid &g, const std::vector<cplx> &a)
{
    Tensor3C t(g);
    const std::size_t n = g.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                t(i, j, k) = a[i] * a[j] * a[k];
    return t;
}

inline Jsa separable_jsa(const FrequencyGrid &g, const std::vector<cplx> &mode)
{
    return Jsa{product_tensor(g, mode), cplx(1e-5, 0.0)};
}

// sqrt(p) a a a + sqrt(1-p) b b b for orthonormal a, b
inline Jsa two_mode_jsa(const FrequencyGrid &g, const std::vector<cplx> &a, const std::vector<cplx> &b, double p)
{
    Tensor3C t(g);
    const std::size_t n = g.size();
    const double sp = std::sqrt(p), sq = std::sqrt(1.0 - p);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                t(i, j, k) = sp * a[i] * a[j] * a[k] + sq * b[i] * b[j] * b[k];
    return Jsa{std::move(t), cplx(1e-5, 0.0)};
}

// Random permutation-symmetric tensor with unit norm.
inline Jsa random_symmetric_jsa(const FrequencyGrid &g, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    const std::size_t n = g.size();
    Tensor3C t(g);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j)
            for (std::size_t k = j; k < n; ++k) {
                const cplx v(nd(rng), nd(rng));
                const std::size_t idx[3] = {i, j, k};
                static constexpr int perm[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
                for (const auto &p : perm)
                    t(idx[p[0]], idx[p[1]], idx[p[2]]) = v;
            }
    const double norm = triplets::l2_norm3(t);
    t *= cplx(1.0 / norm, 0.0);
    return Jsa{std::move(t), cplx(1e-5, 0.0)};
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }


inline triplets::WaveguideSource ideal_waveguide(double ratio = 1.0, double beta_p_fs2mm = 0.0)
{
    using namespace triplets;
    const double wp = omega_from_wavelength(458.7e-9), wf = wp / 3.0;
    const double beta_f = 21.9 * fs2_per_mm, length = 0.3;
    const double kf = 1.45 * wf / constants::c, iv = 1.47 / constants::c;
    WaveguideSource src;
    src.disp_p = TaylorDispersion{wp, 3.0 * kf, iv, beta_p_fs2mm * fs2_per_mm};
    src.disp_f = TaylorDispersion{wf, kf, iv, beta_f};
    src.length = length;
    src.pump = PumpSpec{wp, ratio * pmf_bandwidth(length, beta_f), 1e10};
    return src;
}

inline triplets::RingSource ring_source(double q_p, double q_f, double duration_s)
{
    using namespace triplets;
    RingSource r;
    r.pump = PumpSpec::from_pulse(1e-7, duration_s, 532e-9);
    r.res_p = RingResonance{r.pump.omega_p, q_p, 1.0};
    r.res_f = RingResonance{r.pump.omega_p / 3.0, q_f, 1.0};
    r.circumference = 2.0 * std::numbers::pi * 120e-6;
    return r;
}

} // namespace testing

#endif
