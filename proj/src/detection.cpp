#include "triplets/detection.hpp"

#include <cmath>
#include <random>

namespace triplets
{

namespace
{

double l2_norm(const FrequencyGrid &g, std::span<const cplx> v)
{
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
        s += g.weight(i) * std::norm(v[i]);
    return std::sqrt(s);
}

void require_same_grid(const Jsa &j, const LocalOscillator &lo)
{
    if (!(j.grid() == lo.grid()))
        throw Error(ErrorCode::GridMismatch, "local oscillator and JSA live on different grids");
}

// T_i = sum_jk psi_ijk u_j u_k and eta = sum_i u_i T_i with u = w conj(g).
struct Contraction
{
    cplx eta;
    Eigen::VectorXcd t;
};

Contraction contract(const Jsa &j, const LocalOscillator &lo)
{
    const auto &g = j.grid();
    const auto n = static_cast<Eigen::Index>(g.size());
    Eigen::VectorXcd u(n);
    for (Eigen::Index i = 0; i < n; ++i)
        u(i) = g.weight(static_cast<std::size_t>(i)) * std::conj(lo.values()[static_cast<std::size_t>(i)]);

    using RowMajor = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const Eigen::Map<const RowMajor> flat(j.psi.data().data(), n * n, n);
    Eigen::VectorXcd y = flat * u;
    const Eigen::Map<const RowMajor> y_mat(y.data(), n, n);
    Contraction c;
    c.t = y_mat * u;
    c.eta = (u.transpose() * c.t)(0);
    return c;
}

} // namespace

LocalOscillator::LocalOscillator(FrequencyGrid grid, std::vector<cplx> values)
    : grid_(grid), values_(std::move(values))
{
    if (values_.size() != grid_.size())
        throw Error(ErrorCode::GridMismatch, "local oscillator size does not match grid");
    const double nrm = l2_norm(grid_, values_);
    if (!(nrm > 0.0) || !std::isfinite(nrm))
        throw Error(ErrorCode::NotNormalized, "local oscillator has zero norm");
    for (auto &v : values_)
        v /= nrm;
}

cplx LocalOscillator::inner(std::span<const cplx> other) const
{
    cplx s(0.0, 0.0);
    for (std::size_t i = 0; i < values_.size(); ++i)
        s += grid_.weight(i) * std::conj(values_[i]) * other[i];
    return s;
}

LocalOscillator uniform_random_lo(const FrequencyGrid &grid, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    std::vector<cplx> v(grid.size());
    for (auto &x : v)
        x = cplx(dist(rng), 0.0);
    return LocalOscillator(grid, std::move(v));
}

cplx overlap_eta(const Jsa &j, const LocalOscillator &lo)
{
    require_same_grid(j, lo);
    return contract(j, lo).eta;
}

EtaEvaluation evaluate_eta(const Jsa &j, const LocalOscillator &lo)
{
    require_same_grid(j, lo);
    const auto c = contract(j, lo);
    const std::size_t n = j.grid().size();
    EtaEvaluation ev;
    ev.eta = c.eta;
    ev.l2_gradient.assign(n, cplx(0.0, 0.0));
    ev.tangent.assign(n, cplx(0.0, 0.0));
    const double mag = std::abs(c.eta);
    if (mag == 0.0)
        return ev;
    const cplx phase = std::conj(c.eta) / mag;
    for (std::size_t i = 0; i < n; ++i)
        ev.l2_gradient[i] = 3.0 * c.t(static_cast<Eigen::Index>(i)) * phase;
    const double radial = lo.inner(ev.l2_gradient).real();
    for (std::size_t i = 0; i < n; ++i)
        ev.tangent[i] = ev.l2_gradient[i] - radial * lo.values()[i];
    ev.tangent_norm = l2_norm(lo.grid(), ev.tangent);
    return ev;
}

std::vector<cplx> eta_gradient(const Jsa &j, const LocalOscillator &lo)
{
    // gradient of the unconstrained map g -> |eta(g)|; the LO's own
    // normalization is not part of the objective here
    auto ev = evaluate_eta(j, lo);
    for (std::size_t i = 0; i < ev.l2_gradient.size(); ++i)
        ev.l2_gradient[i] *= j.grid().weight(i);
    return ev.l2_gradient;
}

namespace
{

OptimizerReport ascend(const Jsa &j, LocalOscillator g, const GradientParams &params, std::uint64_t seed)
{
    EtaEvaluation ev = evaluate_eta(j, g);
    double step = params.initial_step;
    int it = 0;
    bool converged = ev.tangent_norm < params.tol;
    while (!converged && it < params.max_iter) {
        ++it;
        std::vector<cplx> trial(g.values().size());
        for (std::size_t i = 0; i < trial.size(); ++i)
            trial[i] = g.values()[i] + step * ev.tangent[i];
        LocalOscillator cand(g.grid(), std::move(trial));
        EtaEvaluation cev = evaluate_eta(j, cand);
        if (std::abs(cev.eta) > std::abs(ev.eta)) {
            g = std::move(cand);
            ev = std::move(cev);
            step = std::min(step * 1.25, 4.0);
        } else {
            step *= 0.5;
            if (step < 1e-14)
                break;
        }
        converged = ev.tangent_norm < params.tol;
    }
    return OptimizerReport{std::abs(ev.eta), std::arg(ev.eta), ev.tangent_norm, it, converged, seed, std::move(g)};
}

} // namespace

OptimizerReport optimize_lo_gd(const Jsa &j, const LocalOscillator &seed, const GradientParams &params)
{
    require_same_grid(j, seed);
    return ascend(j, seed, params, 0);
}

OptimizerReport optimize_lo_basinhopping(const Jsa &j, const LocalOscillator &seed, const BasinHoppingParams &params)
{
    require_same_grid(j, seed);
    OptimizerReport best = ascend(j, seed, params.local, params.rng_seed);
    int total_iterations = best.iterations;

    std::mt19937_64 rng(params.rng_seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const std::size_t n = seed.values().size();
    for (int hop = 0; hop < params.n_hops; ++hop) {
        double rms = 0.0;
        for (const auto &v : best.g_final.values())
            rms += std::norm(v);
        rms = std::sqrt(rms / static_cast<double>(n));

        std::vector<cplx> kicked(best.g_final.values());
        for (auto &v : kicked) {
            const double re = normal(rng);
            const double im = normal(rng);
            v += params.perturb_scale * rms * cplx(re, im) / std::sqrt(2.0);
        }
        OptimizerReport local = ascend(j, LocalOscillator(seed.grid(), std::move(kicked)), params.local,
                                       params.rng_seed);
        total_iterations += local.iterations;
        if (local.eta_final > best.eta_final)
            best = std::move(local);
    }
    best.iterations = total_iterations;
    return best;
}

double quadrature_pdf(double x, double theta, double epsilon, double eta)
{
    const double gauss = std::exp(-x * x) / std::sqrt(constants::pi);
    const double cubic = -3.0 * x + 2.0 * x * x * x;
    return gauss * (1.0 + epsilon * eta * (2.0 / std::sqrt(3.0)) * cubic * std::cos(3.0 * theta));
}

PdfSamples quadrature_pdf(std::span<const double> xs, double theta, double epsilon, double eta)
{
    PdfSamples out;
    out.density.reserve(xs.size());
    for (double x : xs) {
        const double p = quadrature_pdf(x, theta, epsilon, eta);
        out.negative_density = out.negative_density || p < 0.0;
        out.density.push_back(p);
    }
    return out;
}

std::array<double, 4> quadrature_moments(double epsilon, double eta, double theta)
{
    return {0.0, 0.5, std::sqrt(3.0) * epsilon * eta * std::cos(3.0 * theta), 0.75};
}

std::array<double, 4> numeric_quadrature_moments(double epsilon, double eta, double theta, double half_width,
                                                 std::size_t n_points)
{
    if (n_points < 3 || !(half_width > 0.0))
        throw Error(ErrorCode::InvalidArgument, "integration needs >= 3 points and a positive half width");
    const double h = 2.0 * half_width / static_cast<double>(n_points - 1);
    auto integrate = [&](auto &&f) {
        double s = 0.0;
        for (std::size_t i = 0; i < n_points; ++i) {
            const double x = -half_width + h * static_cast<double>(i);
            const double w = (i == 0 || i + 1 == n_points) ? 0.5 * h : h;
            s += w * f(x) * quadrature_pdf(x, theta, epsilon, eta);
        }
        return s;
    };
    const double norm = integrate([](double) { return 1.0; });
    const double mean = integrate([](double x) { return x; }) / norm;
    std::array<double, 4> m{mean, 0.0, 0.0, 0.0};
    for (int k = 2; k <= 4; ++k)
        m[static_cast<std::size_t>(k - 1)] = integrate([&](double x) { return std::pow(x - mean, k); }) / norm;
    return m;
}

double splitter_coincidence(const SplitterColumn &u, SplitterConvention convention)
{
    const double total = std::norm(u.u0) + std::norm(u.u1) + std::norm(u.u2);
    if (std::abs(total - 1.0) > 1e-12)
        throw Error(ErrorCode::NotNormalized, "splitter column must satisfy |u0|^2+|u1|^2+|u2|^2 = 1");
    const double prod = std::norm(u.u0 * u.u1 * u.u2);
    return convention == SplitterConvention::Paper ? prod : 6.0 * prod;
}

} // namespace triplets
