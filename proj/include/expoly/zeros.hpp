#ifndef EXPOLY_ZEROS_HPP
#define EXPOLY_ZEROS_HPP

#include <cstdint>

#include "expoly/prony.hpp"
#include "expoly/rng.hpp"

namespace expoly {

// Multiplication-by-coordinate tables on the quotient modulo the Prony ideal,
// in the normal-set monomial basis. Commuting family up to roundoff.
struct MultTables {
    int dim = 0;
    int size = 0;                    // Nhat
    std::vector<Eigen::MatrixXcd> M; // one per coordinate
    double max_norm = 0.0;           // max Frobenius norm
    double max_commutator = 0.0;     // max ||MjMk - MkMj||_F
};

struct ZeroCluster {
    std::vector<cplx> xi;    // joint eigenvalue, every component nonzero
    int mult = 0;            // invariant-subspace dimension
    int deg_bound = 0;       // bound for deg f_w used by coefficient recovery
    std::vector<cplx> omega; // filled by frequencies_from_zeros
    double residual = 0.0;   // kernel evaluation residual at xi
};

inline constexpr double kClusterTolDefault = 1e-6;

// column for monomial x^beta of M_j = normal_form(x_j * x^beta)
MultTables build_tables(const IdealData& ideal, const SampleSource& src);

// Joint eigenvalues with multiplicities: Schur-triangularize a random real
// convex combination M(c), cluster its eigenvalues, reorder to contiguous
// blocks by unitary similarity, then read each xi_j off as block-trace/size of
// the transformed M_j (exact for xi_j I + nilpotent blocks). Up to 5 attempts
// redraw c and escalate the clustering tolerance; structural gates (kernel
// residual at xi, first-order theta consistency for mult >= 2, block-spectrum
// spread, cluster proximity) decide acceptance. Deterministic for fixed seed.
std::vector<ZeroCluster> joint_eigen(const MultTables& tables, const IdealData& ideal,
                                     double tau_cluster = kClusterTolDefault,
                                     std::uint64_t seed = kDefaultSeed);

// omega_j = ln|xi_j| + i arg(xi_j) with arg in [-pi, pi); rejects |xi_j| < 1e-12
void frequencies_from_zeros(std::vector<ZeroCluster>& clusters);

// max |q(xi)| over the stored kernel polynomials (stored unit-norm, so the
// value is already coefficient-normalized); 0 for an empty kernel
double verify_zero_residual(const IdealData& ideal, const ZeroCluster& cluster);

// Unitary similarity moving the diagonal entry of the triangular T at
// position `from` to position `to` (adjacent swaps), updating U in place.
void move_schur_diag(Eigen::MatrixXcd& T, Eigen::MatrixXcd& U, int from, int to);

} // namespace expoly

#endif
