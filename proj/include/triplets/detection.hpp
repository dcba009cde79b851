#ifndef TRIPLETS_DETECTION_HPP
#define TRIPLETS_DETECTION_HPP

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "triplets/grid.hpp"
#include "triplets/jsa.hpp"

namespace triplets
{

// Local-oscillator spectrum g(w) with unit quadrature L2 norm.
class LocalOscillator
{
public:
    // Rescales values to unit norm. Throws NotNormalized for a zero vector.
    LocalOscillator(FrequencyGrid grid, std::vector<cplx> values);

    const FrequencyGrid &grid() const noexcept { return grid_; }
    const std::vector<cplx> &values() const noexcept { return values_; }

    // <this, other> with quadrature weights, conjugate-linear in this.
    cplx inner(std::span<const cplx> other) const;

private:
    FrequencyGrid grid_;
    std::vector<cplx> values_;
};

// Real amplitudes drawn uniformly from [0, 1), then normalized.
LocalOscillator uniform_random_lo(const FrequencyGrid &grid, std::uint64_t seed);

// eta = sum_ijk w_i w_j w_k psi_ijk g_i^* g_j^* g_k^*
cplx overlap_eta(const Jsa &j, const LocalOscillator &lo);

// |eta| and its gradient. The L2 gradient D satisfies
// d|eta| = Re sum_i w_i conj(dg_i) D_i; `tangent` removes the radial part so
// it lies in the tangent space of the unit sphere.
struct EtaEvaluation
{
    cplx eta;
    std::vector<cplx> l2_gradient;
    std::vector<cplx> tangent;
    double tangent_norm = 0.0; // quadrature L2 norm of `tangent`
};
EtaEvaluation evaluate_eta(const Jsa &j, const LocalOscillator &lo);

// Partial derivatives of |eta| with respect to Re g_i and Im g_i, packed as
// d/dRe + i d/dIm.
std::vector<cplx> eta_gradient(const Jsa &j, const LocalOscillator &lo);

struct OptimizerReport
{
    double eta_final = 0.0;
    double eta_phase = 0.0;
    double grad_norm_final = 0.0;
    int iterations = 0;
    bool converged = false;
    std::uint64_t seed = 0;
    LocalOscillator g_final;
};

struct GradientParams
{
    double tol = 1e-6;
    int max_iter = 5000;
    double initial_step = 0.5;
};

struct BasinHoppingParams
{
    int n_hops = 20;
    double perturb_scale = 0.1;
    std::uint64_t rng_seed = 0;
    GradientParams local;
};

// Projected gradient ascent on |eta| over the unit sphere with a
// backtracking step.
OptimizerReport optimize_lo_gd(const Jsa &j, const LocalOscillator &seed, const GradientParams &params = {});

// Local ascent, then repeated {complex Gaussian kick of relative size
// perturb_scale, renormalize, local ascent}, keeping strict improvements.
OptimizerReport optimize_lo_basinhopping(const Jsa &j, const LocalOscillator &seed,
                                         const BasinHoppingParams &params = {});

// p(x|theta) to first order in epsilon * eta.
double quadrature_pdf(double x, double theta, double epsilon, double eta);

struct PdfSamples
{
    std::vector<double> density;
    bool negative_density = false; // first-order expansion broke down somewhere
};
PdfSamples quadrature_pdf(std::span<const double> xs, double theta, double epsilon, double eta);

// Central moments (m1, m2, m3, m4) to leading order.
std::array<double, 4> quadrature_moments(double epsilon, double eta, double theta);

// Same moments by trapezoid integration of quadrature_pdf over
// [-half_width, half_width].
std::array<double, 4> numeric_quadrature_moments(double epsilon, double eta, double theta,
                                                 double half_width = 10.0, std::size_t n_points = 4001);

struct SplitterColumn
{
    cplx u0, u1, u2;
};

enum class SplitterConvention
{
    Paper,   // |u0 u1 u2|^2
    Bosonic, // 6 |u0 u1 u2|^2
};

double splitter_coincidence(const SplitterColumn &u, SplitterConvention convention);

} // namespace triplets

#endif // TRIPLETS_DETECTION_HPP
