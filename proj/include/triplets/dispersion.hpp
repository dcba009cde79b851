#ifndef TRIPLETS_DISPERSION_HPP
#define TRIPLETS_DISPERSION_HPP

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace triplets
{

// Three-term Sellmeier glass: n^2 = 1 + sum b_i lambda^2 / (lambda^2 - l_i),
// lambda in micrometres, l_i in um^2.
struct SellmeierMaterial
{
    std::string name;
    std::array<double, 3> b{};
    std::array<double, 3> l_um2{};
    std::pair<double, double> valid_um{0.0, 0.0};
    std::string citation;
};

double sellmeier_index(const SellmeierMaterial &mat, double lambda_um);

SellmeierMaterial load_sellmeier(const std::filesystem::path &path);

// Composition-tabulated glass family (e.g. GeO2-doped silica). Coefficients
// are interpolated linearly in molar fraction between bracketing entries.
struct SellmeierFamily
{
    struct Composition
    {
        double mol_fraction = 0.0;
        std::array<double, 3> b{};
        std::array<double, 3> l_um2{};
    };

    std::string name;
    std::vector<Composition> compositions; // sorted by mol_fraction
    std::pair<double, double> valid_um{0.0, 0.0};
    std::string citation;

    SellmeierMaterial at(double mol_fraction) const;
};

SellmeierFamily load_sellmeier_family(const std::filesystem::path &path);

// Directory holding the shipped Sellmeier data files. TRIPLETS_DATA_DIR
// overrides the build-time location.
std::filesystem::path data_directory();

// k(w) = k0 + inv_v (w - w0) + beta2/2 (w - w0)^2, no domain limit.
struct TaylorDispersion
{
    double omega0 = 0.0; // rad/s
    double k0 = 0.0;     // 1/m
    double inv_v = 0.0;  // s/m
    double beta2 = 0.0;  // s^2/m
};

// k(w) = w n_eff(w) / c, n_eff interpolated linearly; never extrapolated.
struct TabulatedDispersion
{
    std::vector<double> omegas;
    std::vector<double> n_eff;
};

TabulatedDispersion load_dispersion_table(const std::filesystem::path &path);
TabulatedDispersion make_dispersion_table(std::vector<double> omegas, std::vector<double> n_eff);

// Bulk-material wavenumber from a Sellmeier model.
struct SellmeierDispersion
{
    SellmeierMaterial material;
};

using DispersionModel = std::variant<TaylorDispersion, TabulatedDispersion, SellmeierDispersion>;

double wavenumber(const DispersionModel &model, double omega);

// Valid angular-frequency interval; nullopt when unbounded (Taylor).
std::optional<std::pair<double, double>> domain(const DispersionModel &model);

// Second-order expansion of a model around omega0. Taylor models are
// re-expanded exactly; tables use central differences with one table
// spacing (one-sided at the ends); Sellmeier models use a 1e11 rad/s step.
TaylorDispersion local_taylor(const DispersionModel &model, double omega0);

// k_P(w1 + w2 + w3) - k_F(w1) - k_F(w2) - k_F(w3)
double delta_k(const DispersionModel &pump, const DispersionModel &triplet, double omega1, double omega2,
               double omega3);

// Same mismatch written as the expanded quadratic form about the triplet
// centre omega_f (pump centre 3 omega_f). Exact for Taylor models.
double delta_k_expanded(const TaylorDispersion &pump, const TaylorDispersion &triplet, double omega_f,
                        double omega1, double omega2, double omega3);

struct QuadricEigensystem
{
    std::array<double, 3> lambda{};              // lambda2 == lambda3
    std::array<Eigen::Vector3d, 3> vectors;      // unit, v1 along (1,1,1)
};

// The symmetric 3x3 matrix whose quadratic form gives (length/2) dk for a
// phase- and group-velocity-matched pair.
Eigen::Matrix3d quadric_matrix(double beta_p, double beta_f, double length);
QuadricEigensystem quadric_eigensystem(double beta_p, double beta_f, double length);

// sigma_PM = sqrt(4 pi / (length |beta_f|))
double pmf_bandwidth(double length, double beta_f);

struct PhaseMatchingPoint
{
    double omega_f = 0.0;
    double lambda_f_um = 0.0;
    double lambda_p_um = 0.0;
    double mismatch = 0.0;            // k_P(3w) - 3 k_F(w), 1/m
    double group_velocity_mismatch = 0.0; // 1/v_P - 1/v_F, s/m
    int iterations = 0;
};

// Bisection for k_P(3w) - 3 k_F(w) = 0 with the triplet wavelength bracketed
// in [lambda_lo_um, lambda_hi_um].
PhaseMatchingPoint find_degenerate_phase_matching(const DispersionModel &pump, const DispersionModel &triplet,
                                                  double lambda_lo_um, double lambda_hi_um);

// Unit helpers.
inline constexpr double fs2_per_mm = 1e-27; // 1 fs^2/mm in s^2/m

} // namespace triplets

#endif // TRIPLETS_DISPERSION_HPP
