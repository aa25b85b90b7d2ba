#ifndef EXPOLY_PRONY_HPP
#define EXPOLY_PRONY_HPP

#include "expoly/model.hpp"

namespace expoly {

// Per-column decision record from the graded reconstruction.
struct ColumnDiag {
    MultiIndex beta;
    int degree = 0;
    double residual = 0.0; // new-direction magnitude after projection
    bool accepted = false; // true -> normal set, false -> kernel
};

// Result of the graded Hankel-kernel reconstruction. The rows are fixed to the
// hyperbolic cross of the multiplicity bound; the normal set collects the
// columns that increased numerical rank, the kernel the dependencies. Q and R
// hold the incremental QR of the normal-set columns so that normal forms can
// be projected later without refactoring.
struct IdealData {
    int dim = 0;
    int mult_bound = 0;
    double tau_rank = kRankTolDefault;

    IndexSet rows;            // hyperbolic cross, |rows| x ... sample window
    IndexSet normal;          // lower set; |normal| = final rank = Nhat
    std::vector<Poly> kernel; // unit-norm coefficients, orthonormal per degree
    std::vector<std::pair<int, int>> hilbert_trace; // (n, rank after degree n)
    int n_stop = 0;           // first stagnant degree
    int n_sat = -1;           // last degree with a rank increase (-1 if none)

    Eigen::MatrixXcd Q; // |rows| x Nhat, orthonormal columns
    Eigen::MatrixXcd R; // Nhat x Nhat, upper triangular
    // Per-row equilibration weights applied to every sampled column before the
    // QR. Scaling rows keeps the column dependencies (and hence the ideal)
    // intact while flattening the exponential magnitude spread across the
    // window, which would otherwise dominate the conditioning of R.
    Eigen::VectorXd row_weights;
    double scale = 0.0; // largest weighted column norm seen
    double max_kernel_residual = 0.0; // worst annihilation residual at validation

    std::vector<ColumnDiag> diagnostics;

    int multiplicity() const { return normal.size(); }
};

// Graded reconstruction: rows A = hyperbolic cross of N, columns grow one
// graded-lex monomial at a time (row-equilibrated, see row_weights), rank
// decisions by orthogonal projection with relative threshold tau_rank,
// termination after one rank-stagnant total degree. Kernel vectors are re-validated by their annihilation residual on
// the widest covered window; failure raises MultBoundError. An identically
// zero signal yields the empty ideal.
IdealData reconstruct_ideal(const SampleSource& src, int N,
                            double tau_rank = kRankTolDefault);

// recorded rank F_{A, Gamma_n}; throws outside the trace
int hilbert_function(const IdealData& ideal, int n);

// Unique element of span(normal set) congruent to p modulo the computed
// kernel, found by projecting p's Hankel-column image onto the normal-set
// column space. deg p may exceed the processed columns by at most one degree
// (subject to source coverage).
Poly normal_form(const IdealData& ideal, const SampleSource& src, const Poly& p);

} // namespace expoly

#endif
