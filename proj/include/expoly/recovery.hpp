#ifndef EXPOLY_RECOVERY_HPP
#define EXPOLY_RECOVERY_HPP

#include "expoly/zeros.hpp"

namespace expoly {

// Hermite-Vandermonde coefficient system G f = f(B): one column block per
// cluster with exponents A_w = Gamma_{deg bound}, entry (beta; w,alpha) =
// beta^alpha xi_w^beta (0^0 = 1), rows beta in B.
struct CoeffSystem {
    int dim = 0;
    std::vector<ZeroCluster> clusters;
    std::vector<IndexSet> col_sets; // A_w per cluster
    IndexSet B;
    Eigen::MatrixXcd G;
    Eigen::VectorXcd rhs;
};

// B defaults to Gamma_n with n = sum_w (deg_bound_w + 1) - 1, the smallest
// total-degree block on which the stacked Hermite functionals at distinct
// zeros are provably independent; total-degree rows also keep every entry
// within a bounded power of |xi|.
CoeffSystem build_system(const std::vector<ZeroCluster>& clusters, const SampleSource& src);

// explicit row set, used by tests and by callers that own the coverage logic
CoeffSystem build_system_on(const std::vector<ZeroCluster>& clusters,
                            const SampleSource& src, const IndexSet& B);

// Least-squares solve; rank deficiency raises SolveError. Coefficients below
// 1e-9 * ||solution|| are pruned; components whose polynomial prunes to zero
// are dropped.
ExpPolyModel solve_coefficients(const CoeffSystem& sys, double tau_rank = kRankTolDefault,
                                double* lsq_residual = nullptr);

// Gauss-Newton polish of the frequencies and coefficients jointly against the
// samples at pts (every point must be covered by src). Term supports stay
// fixed; a step is halved until the least-squares mismatch over pts drops and
// is dropped entirely when it will not, so the model never gets worse.
// Returns the number of accepted steps.
int refine_model(ExpPolyModel& model, const SampleSource& src,
                 const std::vector<MultiIndex>& pts, int max_steps = 3);

struct Tolerances {
    double tau_rank = kRankTolDefault;
    double tau_cluster = kClusterTolDefault;
    std::uint64_t seed = kDefaultSeed;
};

struct ClusterReport {
    std::vector<cplx> xi;
    std::vector<cplx> omega;
    int mult = 0;
    int deg_bound = 0;
    double residual = 0.0;
};

struct Report {
    std::vector<std::pair<int, int>> hilbert_trace;
    int multiplicity = 0;
    double max_kernel_residual = 0.0;   // annihilation over the sampled window
    double min_normal_gap = 0.0;        // smallest accepted-column sigma gap
    double max_commutator = 0.0;
    std::vector<ClusterReport> clusters;
    double lsq_residual = 0.0;          // relative, coefficient solve
    int refine_steps = 0;               // accepted Gauss-Newton polish steps
    double resynthesis_residual = 0.0;  // max |fhat - f| / max |f| on the grid
};

// reconstruct_ideal -> build_tables -> joint_eigen -> frequencies_from_zeros
// -> build_system -> solve_coefficients, with stage-tagged errors. The report
// always carries the Hilbert trace and residuals of the stages that ran.
ExpPolyModel end_to_end(const SampleSource& src, int N, const Tolerances& tol = {},
                        Report* report = nullptr, IdealData* ideal_out = nullptr);

} // namespace expoly

#endif
