#include "expoly/model.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <sstream>

#include "expoly/errors.hpp"

namespace expoly {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kDistinctTol = 1e-12;
} // namespace

cplx normalize_frequency(cplx w) {
    double im = std::fmod(w.imag() + kPi, 2.0 * kPi);
    if (im < 0) im += 2.0 * kPi;
    im -= kPi;             // now in [-pi, pi)
    if (im >= kPi) im = -kPi;
    return {w.real(), im};
}

cplx ipow(cplx z, long long n) {
    if (n < 0) return cplx(1.0) / ipow(z, -n);
    cplx r = 1.0, b = z;
    while (n > 0) {
        if (n & 1) r *= b;
        b *= b;
        n >>= 1;
    }
    return r;
}

cplx grid_power(const std::vector<int>& beta, const MultiIndex& alpha) {
    cplx r = 1.0;
    for (int j = 0; j < alpha.dim(); ++j) {
        // 0^0 = 1 so the alpha = 0 column stays the plain Vandermonde column
        for (int t = 0; t < alpha[j]; ++t) r *= static_cast<double>(beta[static_cast<size_t>(j)]);
    }
    return r;
}

ExpPolyModel::ExpPolyModel(int dim, std::vector<std::pair<std::vector<cplx>, Poly>> comps)
    : dim_(dim) {
    if (dim < 1) throw ParseError("model: dimension must be >= 1");
    for (auto& [omega, poly] : comps) {
        if (static_cast<int>(omega.size()) != dim)
            throw ParseError("model: frequency dimension mismatch");
        if (poly.dim() != dim) throw ParseError("model: coefficient dimension mismatch");
        if (poly.basis() != PolyBasis::monomial)
            throw ParseError("model: coefficients must be in the monomial basis");
        if (poly.is_zero()) throw ParseError("model: zero coefficient polynomial");
        Component c;
        c.omega.reserve(static_cast<size_t>(dim));
        c.xi.reserve(static_cast<size_t>(dim));
        for (const auto& w : omega) {
            cplx wn = normalize_frequency(w);
            c.omega.push_back(wn);
            c.xi.push_back(std::exp(wn));
        }
        c.coeff = std::move(poly);
        comps_.push_back(std::move(c));
    }
    for (size_t i = 0; i < comps_.size(); ++i)
        for (size_t k = i + 1; k < comps_.size(); ++k) {
            double d = 0.0;
            for (int j = 0; j < dim_; ++j)
                d = std::max(d, std::abs(comps_[i].xi[static_cast<size_t>(j)] -
                                         comps_[k].xi[static_cast<size_t>(j)]));
            if (d <= kDistinctTol)
                throw ParseError("model: overlapping duplicate frequencies");
        }
}

cplx ExpPolyModel::eval_grid(const std::vector<int>& alpha) const {
    if (static_cast<int>(alpha.size()) != dim_)
        throw std::invalid_argument("model: grid point dimension mismatch");
    cplx total = 0.0;
    for (const auto& c : comps_) {
        cplx e = 1.0;
        for (int j = 0; j < dim_; ++j)
            e *= ipow(c.xi[static_cast<size_t>(j)], alpha[static_cast<size_t>(j)]);
        total += c.coeff.evaluate_grid(alpha) * e;
    }
    return total;
}

int ExpPolyModel::max_coeff_degree() const {
    int d = -1;
    for (const auto& c : comps_) d = std::max(d, c.coeff.degree());
    return d;
}

// ---- table source ---------------------------------------------------------------

TableSource::TableSource(std::vector<int> lo, std::vector<int> hi, std::vector<cplx> values)
    : lo_(std::move(lo)), hi_(std::move(hi)), values_(std::move(values)) {
    if (lo_.empty() || lo_.size() != hi_.size())
        throw ParseError("sample table: inconsistent box bounds");
    long long count = 1;
    stride_.assign(lo_.size(), 1);
    for (size_t j = lo_.size(); j-- > 0;) {
        if (hi_[j] < lo_[j]) throw ParseError("sample table: empty box range");
        stride_[j] = count;
        count *= (hi_[j] - lo_[j] + 1);
    }
    if (static_cast<long long>(values_.size()) != count)
        throw ParseError("sample table: value count does not match the box");
}

bool TableSource::covers(const std::vector<int>& alpha) const {
    if (alpha.size() != lo_.size()) return false;
    for (size_t j = 0; j < lo_.size(); ++j)
        if (alpha[j] < lo_[j] || alpha[j] > hi_[j]) return false;
    return true;
}

size_t TableSource::offset(const std::vector<int>& alpha) const {
    long long off = 0;
    for (size_t j = 0; j < lo_.size(); ++j) off += stride_[j] * (alpha[j] - lo_[j]);
    return static_cast<size_t>(off);
}

cplx TableSource::sample(const std::vector<int>& alpha) const {
    if (!covers(alpha)) {
        std::string pt;
        for (size_t j = 0; j < alpha.size(); ++j) {
            if (j) pt += ',';
            pt += std::to_string(alpha[j]);
        }
        throw CoverageError("sample table does not cover point (" + pt +
                            "); stored box is " + box_string());
    }
    return values_[offset(alpha)];
}

std::string TableSource::box_string() const {
    std::string s;
    for (size_t j = 0; j < lo_.size(); ++j) {
        if (j) s += ',';
        s += std::to_string(lo_[j]) + ".." + std::to_string(hi_[j]);
    }
    return s;
}

// ---- matrices -------------------------------------------------------------------

namespace {

std::vector<int> grid_sum(const MultiIndex& a, const MultiIndex& b, int sign) {
    std::vector<int> p(static_cast<size_t>(a.dim()));
    for (int j = 0; j < a.dim(); ++j) p[static_cast<size_t>(j)] = a[j] + sign * b[j];
    return p;
}

} // namespace

SampleMatrix build_hankel(const SampleSource& src, const IndexSet& A, const IndexSet& B) {
    if (A.dim() != src.dim() || B.dim() != src.dim())
        throw std::invalid_argument("build_hankel: dimension mismatch");
    SampleMatrix out{SampleMatrix::Kind::hankel, A, B,
                     Eigen::MatrixXcd(A.size(), B.size())};
    for (int i = 0; i < A.size(); ++i)
        for (int k = 0; k < B.size(); ++k)
            out.M(i, k) = src.sample(grid_sum(A[i], B[k], +1));
    return out;
}

SampleMatrix build_toeplitz(const SampleSource& src, const IndexSet& A, const IndexSet& B) {
    if (A.dim() != src.dim() || B.dim() != src.dim())
        throw std::invalid_argument("build_toeplitz: dimension mismatch");
    SampleMatrix out{SampleMatrix::Kind::toeplitz, A, B,
                     Eigen::MatrixXcd(A.size(), B.size())};
    for (int i = 0; i < A.size(); ++i)
        for (int k = 0; k < B.size(); ++k)
            out.M(i, k) = src.sample(grid_sum(A[i], B[k], -1));
    return out;
}

Eigen::MatrixXcd build_vandermonde(const ExpPolyModel& model,
                                   const std::vector<std::vector<Poly>>& bases,
                                   const IndexSet& A) {
    if (static_cast<size_t>(model.component_count()) != bases.size())
        throw std::invalid_argument("build_vandermonde: one basis per component required");
    int rows = 0;
    for (const auto& Q : bases) rows += static_cast<int>(Q.size());
    Eigen::MatrixXcd V(rows, A.size());
    int r = 0;
    for (size_t w = 0; w < bases.size(); ++w) {
        const auto& xi = model.components()[w].xi;
        for (const auto& q : bases[w]) {
            for (int k = 0; k < A.size(); ++k) {
                const MultiIndex& a = A[k];
                cplx xpow = 1.0;
                for (int j = 0; j < A.dim(); ++j) xpow *= ipow(xi[static_cast<size_t>(j)], a[j]);
                V(r, k) = q.evaluate_grid(a) * xpow; // q(alpha) xi^alpha
            }
            ++r;
        }
    }
    return V;
}

double annihilation_residual(const SampleSource& src, const Poly& q, const IndexSet& testset) {
    if (q.basis() != PolyBasis::monomial)
        throw std::domain_error("annihilation_residual: monomial basis required");
    if (testset.dim() != src.dim() || q.dim() != src.dim())
        throw std::invalid_argument("annihilation_residual: dimension mismatch");
    double worst = 0.0, fmax = 0.0;
    for (int i = 0; i < testset.size(); ++i) {
        cplx acc = 0.0;
        for (const auto& [b, c] : q.terms()) {
            cplx v = src.sample(grid_sum(testset[i], b, +1));
            fmax = std::max(fmax, std::abs(v));
            acc += c * v;
        }
        worst = std::max(worst, std::abs(acc));
    }
    if (fmax == 0.0) return 0.0; // all-zero data annihilates trivially
    return worst / fmax;
}

Eigen::MatrixXcd linearization_block(const Poly& f, const std::vector<Poly>& Q) {
    if (Q.empty()) throw std::invalid_argument("linearization_block: empty basis");
    const int s = f.dim();
    const int d = std::max(f.degree(), 0);
    const int k = static_cast<int>(Q.size());

    // evaluation grid {0..d}^s is determining for per-variable degree <= d
    std::vector<std::vector<int>> X;
    std::vector<int> cur(static_cast<size_t>(s), 0);
    auto rec = [&](auto&& self, int coord) -> void {
        if (coord == s) {
            X.push_back(cur);
            return;
        }
        for (int t = 0; t <= d; ++t) {
            cur[static_cast<size_t>(coord)] = t;
            self(self, coord + 1);
        }
    };
    rec(rec, 0);
    const int nx = static_cast<int>(X.size());

    Eigen::MatrixXcd Qx(nx, k);
    for (int i = 0; i < nx; ++i)
        for (int c = 0; c < k; ++c) Qx(i, c) = Q[static_cast<size_t>(c)].evaluate_grid(X[static_cast<size_t>(i)]);

    Eigen::MatrixXcd Mg(nx, nx);
    for (int i = 0; i < nx; ++i)
        for (int c = 0; c < nx; ++c) {
            std::vector<int> xy(static_cast<size_t>(s));
            for (int j = 0; j < s; ++j)
                xy[static_cast<size_t>(j)] =
                    X[static_cast<size_t>(i)][static_cast<size_t>(j)] +
                    X[static_cast<size_t>(c)][static_cast<size_t>(j)];
            Mg(i, c) = f.evaluate_grid(xy);
        }

    // f(x+y) = Qx A Qx^T  (plain transpose, no conjugation)
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(Qx);
    qr.setThreshold(1e-12);
    if (qr.rank() < k)
        throw SolveError("linearization_block: basis not independent on the grid");
    Eigen::MatrixXcd Z = qr.solve(Mg);                  // k x nx
    Eigen::MatrixXcd At = qr.solve(Z.transpose());      // k x k, equals A^T
    return At.transpose();
}

double hankel_factorization_residual(const ExpPolyModel& model, const IndexSet& A,
                                     const IndexSet& B) {
    ModelSource src(model);
    Eigen::MatrixXcd F = build_hankel(src, A, B).M;

    std::vector<std::vector<Poly>> bases;
    for (const auto& c : model.components()) bases.push_back(preferred_shift_basis(c.coeff));
    Eigen::MatrixXcd VA = build_vandermonde(model, bases, A);
    Eigen::MatrixXcd VB = build_vandermonde(model, bases, B);

    int n = VA.rows();
    Eigen::MatrixXcd mid = Eigen::MatrixXcd::Zero(n, n);
    int at = 0;
    for (size_t w = 0; w < bases.size(); ++w) {
        int k = static_cast<int>(bases[w].size());
        mid.block(at, at, k, k) =
            linearization_block(model.components()[w].coeff, bases[w]);
        at += k;
    }

    Eigen::MatrixXcd P = VA.transpose() * mid * VB;
    double denom = F.norm();
    if (denom == 0.0) return P.norm();
    return (F - P).norm() / denom;
}

} // namespace expoly
