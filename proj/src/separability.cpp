#include "triplets/separability.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace triplets
{

double ReducedDensity::trace() const
{
    const auto &g = grid();
    double t = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
        t += g.weight(i) * rho.values()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real();
    return t;
}

double ReducedDensity::purity() const
{
    const auto &g = grid();
    const auto &m = rho.values();
    double p = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < g.size(); ++j)
            row += g.weight(j) * std::norm(m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
        p += g.weight(i) * row;
    }
    return p;
}

std::size_t ModeDecomposition::mode_count(double threshold) const
{
    return static_cast<std::size_t>(
        std::count_if(fractions.begin(), fractions.end(), [threshold](double r) { return r > threshold; }));
}

ReducedDensity reduced_density_matrix(const Jsa &j)
{
    const auto &g = j.grid();
    const auto n = static_cast<Eigen::Index>(g.size());
    using RowMajor = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const Eigen::Map<const RowMajor> flat(j.psi.data().data(), n, n * n);

    Eigen::VectorXd sqrt_w(n);
    for (Eigen::Index i = 0; i < n; ++i)
        sqrt_w(i) = std::sqrt(g.weight(static_cast<std::size_t>(i)));
    Eigen::VectorXd col_scale(n * n);
    for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = 0; b < n; ++b)
            col_scale(a * n + b) = sqrt_w(a) * sqrt_w(b);

    const RowMajor m = flat * col_scale.asDiagonal();
    Eigen::MatrixXcd rho = m * m.adjoint();
    return ReducedDensity{HermitianMatrix(g, std::move(rho))};
}

ModeDecomposition pseudo_schmidt(const ReducedDensity &rd)
{
    const auto &g = rd.grid();
    const auto n = static_cast<Eigen::Index>(g.size());
    Eigen::VectorXd sqrt_w(n);
    for (Eigen::Index i = 0; i < n; ++i)
        sqrt_w(i) = std::sqrt(g.weight(static_cast<std::size_t>(i)));

    const Eigen::MatrixXcd weighted = sqrt_w.asDiagonal() * rd.rho.values() * sqrt_w.asDiagonal();
    const EigenSystem es = hermitian_eig(weighted);

    ModeDecomposition md{g, {}, {}};
    md.fractions.resize(static_cast<std::size_t>(n));
    for (Eigen::Index c = 0; c < n; ++c) {
        double r = es.values(c);
        if (r < -1e-10)
            throw Error(ErrorCode::InvalidDensity,
                        "reduced density has eigenvalue " + std::to_string(r) + " below -1e-10");
        md.fractions[static_cast<std::size_t>(c)] = std::max(r, 0.0);
    }
    const double total = std::accumulate(md.fractions.begin(), md.fractions.end(), 0.0);
    if (std::abs(total - 1.0) >= 1e-6)
        throw Error(ErrorCode::InvalidDensity, "mode fractions sum to " + std::to_string(total));
    for (auto &r : md.fractions)
        r /= total;

    md.modes.resize(static_cast<std::size_t>(n));
    for (Eigen::Index c = 0; c < n; ++c) {
        auto &f = md.modes[static_cast<std::size_t>(c)];
        f.resize(static_cast<std::size_t>(n));
        for (Eigen::Index i = 0; i < n; ++i)
            f[static_cast<std::size_t>(i)] = es.vectors(i, c) / sqrt_w(i);
    }
    return md;
}

double kappa(const ReducedDensity &rd) { return 1.0 / rd.purity(); }

double kappa(const ModeDecomposition &md)
{
    double s = 0.0;
    for (double r : md.fractions)
        s += r * r;
    return 1.0 / s;
}

double concurrence(const ReducedDensity &rd)
{
    return 2.0 * std::sqrt(std::max(0.0, 1.0 - rd.purity()));
}

SymplecticExcess symplectic_excess(cplx epsilon, const ModeDecomposition &md)
{
    const double scale = 3.0 * std::norm(epsilon);
    SymplecticExcess out;
    out.per_mode.reserve(md.fractions.size());
    for (double r : md.fractions)
        out.per_mode.push_back(scale * r);
    out.coherence_diag.assign(md.grid.size(), 0.0);
    for (std::size_t m = 0; m < md.fractions.size(); ++m)
        for (std::size_t i = 0; i < md.grid.size(); ++i)
            out.coherence_diag[i] += scale * md.fractions[m] * std::norm(md.modes[m][i]);
    return out;
}

} // namespace triplets
