#ifndef EXPOLY_MODEL_HPP
#define EXPOLY_MODEL_HPP

#include <Eigen/Core>
#include <memory>
#include <optional>
#include <vector>

#include "expoly/errors.hpp"
#include "expoly/poly.hpp"

namespace expoly {

// ---- exponential polynomial model --------------------------------------------

struct Component {
    std::vector<cplx> omega; // Im(omega_j) in [-pi, pi)
    Poly coeff;              // nonzero, monomial basis
    std::vector<cplx> xi;    // e^omega, cached once at construction
};

// f(x) = sum_w f_w(x) e^{w^T x}, sampled on the integer grid. Frequencies are
// stored with imaginary parts reduced to [-pi, pi) and must be pairwise
// distinct after reduction.
class ExpPolyModel {
public:
    ExpPolyModel() = default;
    explicit ExpPolyModel(int dim) : dim_(dim) {}
    ExpPolyModel(int dim, std::vector<std::pair<std::vector<cplx>, Poly>> comps);

    int dim() const { return dim_; }
    int component_count() const { return static_cast<int>(comps_.size()); }
    const std::vector<Component>& components() const { return comps_; }

    cplx eval_grid(const std::vector<int>& alpha) const;

    // largest deg f_w, -1 for the empty model
    int max_coeff_degree() const;

private:
    int dim_ = 0;
    std::vector<Component> comps_;
};

// reduce Im into [-pi, pi)
cplx normalize_frequency(cplx w);

// z^n for integer n (n < 0 uses the reciprocal); 0^0 = 1
cplx ipow(cplx z, long long n);

// beta^alpha over Z^s x N_0^s with the 0^0 = 1 convention
cplx grid_power(const std::vector<int>& beta, const MultiIndex& alpha);

// ---- sample sources -----------------------------------------------------------

class SampleSource {
public:
    virtual ~SampleSource() = default;
    virtual int dim() const = 0;
    virtual bool covers(const std::vector<int>& alpha) const = 0;
    // throws CoverageError when not covered
    virtual cplx sample(const std::vector<int>& alpha) const = 0;
};

class ModelSource final : public SampleSource {
public:
    explicit ModelSource(ExpPolyModel model) : model_(std::move(model)) {}
    int dim() const override { return model_.dim(); }
    bool covers(const std::vector<int>&) const override { return true; }
    cplx sample(const std::vector<int>& alpha) const override {
        return model_.eval_grid(alpha);
    }
    const ExpPolyModel& model() const { return model_; }

private:
    ExpPolyModel model_;
};

// Dense table over the box [lo, hi] (componentwise, inclusive).
class TableSource final : public SampleSource {
public:
    TableSource(std::vector<int> lo, std::vector<int> hi, std::vector<cplx> values);

    int dim() const override { return static_cast<int>(lo_.size()); }
    bool covers(const std::vector<int>& alpha) const override;
    cplx sample(const std::vector<int>& alpha) const override;

    const std::vector<int>& lo() const { return lo_; }
    const std::vector<int>& hi() const { return hi_; }
    std::string box_string() const;

private:
    size_t offset(const std::vector<int>& alpha) const;
    std::vector<int> lo_, hi_;
    std::vector<long long> stride_;
    std::vector<cplx> values_;
};

// ---- sample matrices -----------------------------------------------------------

struct SampleMatrix {
    enum class Kind { hankel, toeplitz };
    Kind kind;
    IndexSet rows, cols;
    Eigen::MatrixXcd M;
};

// F_{A,B} = [f(alpha+beta)], rows A, columns B
SampleMatrix build_hankel(const SampleSource& src, const IndexSet& A, const IndexSet& B);

// T_{A,B} = [f(alpha-beta)]; needs samples at negative grid points
SampleMatrix build_toeplitz(const SampleSource& src, const IndexSet& A, const IndexSet& B);

// Hermite-Vandermonde matrix: one row per functional p -> (q(Dhat)p)(xi_w)
// with q running through bases[w], one column per alpha in A; the eigenrelation
// collapses the entry to q(alpha) * xi_w^alpha.
Eigen::MatrixXcd build_vandermonde(const ExpPolyModel& model,
                                   const std::vector<std::vector<Poly>>& bases,
                                   const IndexSet& A);

// max_{alpha in testset} |sum_beta q_beta f(alpha+beta)|, normalized by the
// largest |f| value touched; 0 for all-zero data
double annihilation_residual(const SampleSource& src, const Poly& q, const IndexSet& testset);

// Rebuilds F_{A,B} from the factored form V(Theta,A)^T blockdiag(A_w) V(Theta,B)
// and returns the relative Frobenius error. The middle blocks solve the
// linearization f_w(x+y) = sum_{q,q'} a_{q,q'} q(x) q'(y) on an integer grid by
// least squares. Test-side operation: requires the model.
double hankel_factorization_residual(const ExpPolyModel& model, const IndexSet& A,
                                     const IndexSet& B);

// per-component linearization block A_w on the basis Q (exposed for tests)
Eigen::MatrixXcd linearization_block(const Poly& f, const std::vector<Poly>& Q);

} // namespace expoly

#endif
