#include "triplets/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace triplets
{

const char *error_code_name(ErrorCode code)
{
    switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::NonHermitianInput: return "NonHermitianInput";
    case ErrorCode::NegativeRadicand: return "NegativeRadicand";
    case ErrorCode::InvalidLength: return "InvalidLength";
    case ErrorCode::ZeroDispersion: return "ZeroDispersion";
    case ErrorCode::NoSignChange: return "NoSignChange";
    case ErrorCode::ZeroKernel: return "ZeroKernel";
    case ErrorCode::EmptyFilter: return "EmptyFilter";
    case ErrorCode::InvalidDensity: return "InvalidDensity";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

double omega_from_wavelength(double lambda_m)
{
    if (!(lambda_m > 0.0))
        throw Error(ErrorCode::InvalidArgument, "wavelength must be positive");
    return 2.0 * constants::pi * constants::c / lambda_m;
}

double wavelength_from_omega(double omega)
{
    if (!(omega > 0.0))
        throw Error(ErrorCode::InvalidArgument, "frequency must be positive");
    return 2.0 * constants::pi * constants::c / omega;
}

FrequencyGrid::FrequencyGrid(double omega_min, double omega_max, std::size_t n_points)
    : omega_min_(omega_min), omega_max_(omega_max), n_(n_points), step_(0.0)
{
    if (!(omega_max > omega_min))
        throw Error(ErrorCode::InvalidArgument, "grid requires omega_max > omega_min");
    if (n_points < 2)
        throw Error(ErrorCode::InvalidArgument, "grid requires at least 2 points");
    step_ = (omega_max - omega_min) / static_cast<double>(n_points - 1);
}

FrequencyGrid FrequencyGrid::centered(double omega_center, double half_width, std::size_t n_points)
{
    return FrequencyGrid(omega_center - half_width, omega_center + half_width, n_points);
}

std::vector<double> FrequencyGrid::nodes() const
{
    std::vector<double> out(n_);
    for (std::size_t i = 0; i < n_; ++i)
        out[i] = omega(i);
    return out;
}

std::vector<double> FrequencyGrid::weights() const
{
    std::vector<double> out(n_);
    for (std::size_t i = 0; i < n_; ++i)
        out[i] = weight(i);
    return out;
}

Tensor3C::Tensor3C(FrequencyGrid grid)
    : grid_(grid), n_(grid.size()), values_(n_ * n_ * n_, cplx(0.0, 0.0))
{
}

Tensor3C::Tensor3C(FrequencyGrid grid, std::vector<cplx> values)
    : grid_(grid), n_(grid.size()), values_(std::move(values))
{
    if (values_.size() != n_ * n_ * n_)
        throw Error(ErrorCode::InvalidArgument, "tensor values must have n^3 entries");
}

Tensor3C &Tensor3C::operator*=(cplx s)
{
    for (auto &v : values_)
        v *= s;
    return *this;
}

HermitianMatrix::HermitianMatrix(FrequencyGrid grid, Eigen::MatrixXcd values)
    : grid_(grid), values_(std::move(values))
{
    const auto n = static_cast<Eigen::Index>(grid_.size());
    if (values_.rows() != n || values_.cols() != n)
        throw Error(ErrorCode::InvalidArgument, "matrix shape does not match grid");
    const double scale = values_.norm();
    const double asym = (values_ - values_.adjoint()).cwiseAbs().maxCoeff();
    if (asym > 1e-9 * scale)
        throw Error(ErrorCode::NonHermitianInput, "matrix is not Hermitian");
    // store the exactly Hermitian part
    Eigen::MatrixXcd sym = 0.5 * (values_ + values_.adjoint());
    values_ = std::move(sym);
}

double l2_norm3(const Tensor3C &t)
{
    const auto &g = t.grid();
    const std::size_t n = g.size();
    const auto w = g.weights();
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double plane = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            double row = 0.0;
            for (std::size_t k = 0; k < n; ++k)
                row += w[k] * std::norm(t(i, j, k));
            plane += w[j] * row;
        }
        total += w[i] * plane;
    }
    return std::sqrt(total);
}

EigenSystem hermitian_eig(const Eigen::MatrixXcd &m)
{
    if (m.rows() != m.cols())
        throw Error(ErrorCode::InvalidArgument, "hermitian_eig requires a square matrix");
    const double scale = m.norm();
    if (m.size() > 0 && (m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-9 * scale)
        throw Error(ErrorCode::NonHermitianInput, "matrix is not Hermitian");

    const Eigen::MatrixXcd sym = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(sym);
    if (solver.info() != Eigen::Success)
        throw Error(ErrorCode::InvalidArgument, "eigensolver failed to converge");

    const auto n = sym.rows();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    const auto &ev = solver.eigenvalues();
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return ev(a) > ev(b); });

    EigenSystem out;
    out.values.resize(n);
    out.vectors.resize(n, n);
    for (Eigen::Index c = 0; c < n; ++c) {
        out.values(c) = ev(order[static_cast<std::size_t>(c)]);
        out.vectors.col(c) = solver.eigenvectors().col(order[static_cast<std::size_t>(c)]);
    }
    return out;
}

double interp_linear(std::span<const double> xs, std::span<const double> ys, double x)
{
    if (xs.size() < 2 || xs.size() != ys.size())
        throw Error(ErrorCode::InvalidArgument, "interpolation table needs >= 2 matching samples");
    if (!(x >= xs.front() && x <= xs.back()))
        throw Error(ErrorCode::OutOfRange,
                    "x=" + std::to_string(x) + " outside table [" + std::to_string(xs.front()) + ", " +
                        std::to_string(xs.back()) + "]");
    auto it = std::lower_bound(xs.begin(), xs.end(), x);
    const auto hi = static_cast<std::size_t>(it - xs.begin());
    if (xs[hi] == x)
        return ys[hi];
    const std::size_t lo = hi - 1;
    const double t = (x - xs[lo]) / (xs[hi] - xs[lo]);
    return ys[lo] + t * (ys[hi] - ys[lo]);
}

} // namespace triplets
