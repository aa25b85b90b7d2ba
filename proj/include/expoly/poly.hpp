#ifndef EXPOLY_POLY_HPP
#define EXPOLY_POLY_HPP

#include <complex>
#include <map>
#include <vector>

#include "expoly/multiindex.hpp"

namespace expoly {

using cplx = std::complex<double>;

enum class PolyBasis { monomial, falling };

// Sparse multivariate polynomial with complex coefficients. The falling
// factorial basis exists only as an input/inspection format; every operator
// below produces monomial-basis output. Exactly-zero coefficients are never
// stored, so the zero polynomial has no terms and degree() == -1.
class Poly {
public:
    Poly() = default;
    explicit Poly(int dim, PolyBasis basis = PolyBasis::monomial)
        : dim_(dim), basis_(basis) {}

    static Poly constant(int dim, cplx c);
    static Poly monomial(const MultiIndex& alpha, cplx c = 1.0);

    int dim() const { return dim_; }
    PolyBasis basis() const { return basis_; }
    bool is_zero() const { return terms_.empty(); }
    int degree() const; // -1 for the zero polynomial
    int term_count() const { return static_cast<int>(terms_.size()); }

    cplx coeff(const MultiIndex& alpha) const;
    void set_coeff(const MultiIndex& alpha, cplx c); // c == 0 erases
    void add_term(const MultiIndex& alpha, cplx c);

    const std::map<MultiIndex, cplx, GrlexLess>& terms() const { return terms_; }

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(cplx c) const;
    Poly operator*(const Poly& o) const; // monomial basis only

    // evaluation; falling basis evaluates prod_j x_j(x_j-1)...(x_j-a_j+1)
    cplx evaluate(const std::vector<cplx>& x) const;
    cplx evaluate_grid(const std::vector<int>& alpha) const;

    // drops terms with |coeff| <= tol (exact zeros always dropped)
    Poly pruned(double tol) const;

    double coeff_norm() const;     // 2-norm of the coefficient vector
    double coeff_max() const;      // max |coeff|

    // falling -> monomial via first-kind Stirling expansion; identity on
    // monomial input
    Poly to_monomial() const;

private:
    int dim_ = 0;
    PolyBasis basis_ = PolyBasis::monomial;
    std::map<MultiIndex, cplx, GrlexLess> terms_;
};

// ---- shift / difference / derivative operators ------------------------------

// tau^alpha p = p(. + alpha)
Poly shift(const Poly& p, const MultiIndex& alpha);

// Delta^kappa = (tau - I)^kappa, one coordinate at a time
Poly difference(const Poly& p, const MultiIndex& kappa);

// D^alpha, normalized as the plain derivative (no factorial)
Poly derivative(const Poly& p, const MultiIndex& alpha);

// q(Dhat) p where Dhat_j = x_j d/dx_j. Computed term-by-term through the
// second-kind Stirling expansion Dhat^alpha = sum_{beta<=alpha} S2(alpha,beta)
// x^beta D^beta, so the eigenrelation Dhat^alpha x^beta = beta^alpha x^beta is
// a testable consequence, not a definition.
Poly theta_apply(const Poly& q, const Poly& p);

// Taylor -> Newton coefficient transform: (Lp)_alpha = sum_beta S2(beta,alpha) p_beta.
// Equivalently Lp collects the forward-difference coefficients (Delta^a p)(0)/a!.
Poly newton_transform(const Poly& p);

// inverse transform via first-kind numbers: (L^-1 p)_alpha = sum_beta S1(beta,alpha) p_beta
Poly newton_inverse(const Poly& p);

// p(diag(xi) x); every xi_j must be nonzero
Poly scale_argument(const Poly& p, const std::vector<cplx>& xi);

// |q(Dhat)p(xi) - (Lq)(xi D)p(xi)| / (1 + |lhs| + |rhs|): the theta operator
// evaluated two ways, through the raw Stirling expansion and through the
// Newton-transformed scaled-derivative form.
double theta_identity_residual(const Poly& q, const Poly& p, const std::vector<cplx>& xi);

// ---- principal invariant spans ----------------------------------------------

struct PolySpace {
    int dim = 0;
    std::vector<Poly> basis; // numerically independent
    int size() const { return static_cast<int>(basis.size()); }
};

inline constexpr double kRankTolDefault = 1e-10; // sigma ratio for independence

// span{p(. + alpha)} over the box alpha <= (deg p,...,deg p); the box suffices
// because shift coefficients are polynomial in alpha of per-variable degree
// <= deg p.
PolySpace shift_span(const Poly& p, double tau_rank = kRankTolDefault);

// span{D^alpha p}
PolySpace derivative_span(const Poly& p, double tau_rank = kRankTolDefault);

// Basis of shift_span(p) with the constant 1 first, graded difference fills in
// between, and p itself as the last element (for deg p = 0 the basis is {1}).
std::vector<Poly> preferred_shift_basis(const Poly& p, double tau_rank = kRankTolDefault);

} // namespace expoly

#endif
