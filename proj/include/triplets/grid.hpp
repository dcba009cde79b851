#ifndef TRIPLETS_GRID_HPP
#define TRIPLETS_GRID_HPP

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "triplets/error.hpp"

namespace triplets
{

using cplx = std::complex<double>;

namespace constants
{
inline constexpr double c = 299792458.0;          // m/s, exact
inline constexpr double hbar = 1.054571817e-34;   // J s
inline constexpr double pi = 3.14159265358979323846;
} // namespace constants

// Vacuum wavelength (m) <-> angular frequency (rad/s).
double omega_from_wavelength(double lambda_m);
double wavelength_from_omega(double omega);

// Uniform angular-frequency grid with trapezoid weights. All three axes of a
// triphoton amplitude share one grid.
class FrequencyGrid
{
public:
    FrequencyGrid(double omega_min, double omega_max, std::size_t n_points);

    static FrequencyGrid centered(double omega_center, double half_width, std::size_t n_points);

    double omega_min() const noexcept { return omega_min_; }
    double omega_max() const noexcept { return omega_max_; }
    std::size_t size() const noexcept { return n_; }
    double step() const noexcept { return step_; }

    double omega(std::size_t i) const noexcept { return omega_min_ + step_ * static_cast<double>(i); }
    double weight(std::size_t i) const noexcept { return (i == 0 || i + 1 == n_) ? 0.5 * step_ : step_; }

    std::vector<double> nodes() const;
    std::vector<double> weights() const;

    bool operator==(const FrequencyGrid &other) const noexcept
    {
        return n_ == other.n_ && omega_min_ == other.omega_min_ && omega_max_ == other.omega_max_;
    }

private:
    double omega_min_;
    double omega_max_;
    std::size_t n_;
    double step_;
};

// Complex rank-3 tensor on grid x grid x grid, row-major (i, j, k).
class Tensor3C
{
public:
    explicit Tensor3C(FrequencyGrid grid);
    Tensor3C(FrequencyGrid grid, std::vector<cplx> values);

    const FrequencyGrid &grid() const noexcept { return grid_; }
    std::size_t extent() const noexcept { return grid_.size(); }

    cplx &operator()(std::size_t i, std::size_t j, std::size_t k) noexcept
    {
        return values_[(i * n_ + j) * n_ + k];
    }
    const cplx &operator()(std::size_t i, std::size_t j, std::size_t k) const noexcept
    {
        return values_[(i * n_ + j) * n_ + k];
    }

    std::span<cplx> data() noexcept { return values_; }
    std::span<const cplx> data() const noexcept { return values_; }

    Tensor3C &operator*=(cplx s);

private:
    FrequencyGrid grid_;
    std::size_t n_;
    std::vector<cplx> values_;
};

// Kernel values on a grid; Hermitian within 1e-12 absolute on construction.
class HermitianMatrix
{
public:
    HermitianMatrix(FrequencyGrid grid, Eigen::MatrixXcd values);

    const FrequencyGrid &grid() const noexcept { return grid_; }
    const Eigen::MatrixXcd &values() const noexcept { return values_; }

private:
    FrequencyGrid grid_;
    Eigen::MatrixXcd values_;
};

struct EigenSystem
{
    Eigen::VectorXd values;   // descending
    Eigen::MatrixXcd vectors; // orthonormal columns, same order
};

// sqrt(sum w_i w_j w_k |t_ijk|^2)
double l2_norm3(const Tensor3C &t);

// Throws NonHermitianInput when max|m - m^H| > 1e-9 * ||m||_F.
EigenSystem hermitian_eig(const Eigen::MatrixXcd &m);

// Piecewise-linear interpolation; xs strictly increasing. OutOfRange outside
// [xs.front(), xs.back()].
double interp_linear(std::span<const double> xs, std::span<const double> ys, double x);

} // namespace triplets

#endif // TRIPLETS_GRID_HPP
