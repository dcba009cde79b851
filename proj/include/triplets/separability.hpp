#ifndef TRIPLETS_SEPARABILITY_HPP
#define TRIPLETS_SEPARABILITY_HPP

#include <vector>

#include "triplets/grid.hpp"
#include "triplets/jsa.hpp"

namespace triplets
{

// Single-photon reduced density kernel rho(w, w') on the JSA grid.
struct ReducedDensity
{
    HermitianMatrix rho;

    const FrequencyGrid &grid() const { return rho.grid(); }
    double trace() const;  // sum_i w_i rho_ii
    double purity() const; // sum_ij w_i w_j |rho_ij|^2
};

// Pseudo-Schmidt decomposition: rho = sum_n r_n f_n(w) f_n(w')^*.
struct ModeDecomposition
{
    FrequencyGrid grid;
    std::vector<double> fractions;   // descending, sum 1
    std::vector<std::vector<cplx>> modes; // f_n on the grid, unit quadrature norm

    std::size_t mode_count(double threshold = 1e-3) const;
};

// rho = M M^H with M the (n x n^2) sqrt-weighted reshaping of psi.
ReducedDensity reduced_density_matrix(const Jsa &j);

ModeDecomposition pseudo_schmidt(const ReducedDensity &rd);

double kappa(const ReducedDensity &rd);
double kappa(const ModeDecomposition &md);

double concurrence(const ReducedDensity &rd);

struct SymplecticExcess
{
    std::vector<double> per_mode;      // 3 |eps|^2 r_n
    std::vector<double> coherence_diag; // 3 |eps|^2 rho(w, w)
};
SymplecticExcess symplectic_excess(cplx epsilon, const ModeDecomposition &md);

} // namespace triplets

#endif // TRIPLETS_SEPARABILITY_HPP
