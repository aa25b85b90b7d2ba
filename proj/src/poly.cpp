#include "expoly/poly.hpp"

#include <Eigen/Dense>
#include <stdexcept>

#include "expoly/stirling.hpp"

namespace expoly {

namespace {

double to_double(const BigInt& v) { return v.convert_to<double>(); }

// all alpha <= cap componentwise, grlex order
std::vector<MultiIndex> box_indices(int dim, int cap) {
    std::vector<MultiIndex> out;
    MultiIndex cur(dim);
    auto rec = [&](auto&& self, int coord) -> void {
        if (coord == dim) {
            out.push_back(cur);
            return;
        }
        for (int k = 0; k <= cap; ++k) {
            cur[coord] = k;
            self(self, coord + 1);
        }
        cur[coord] = 0;
    };
    rec(rec, 0);
    std::sort(out.begin(), out.end(), GrlexLess{});
    return out;
}

void require_monomial(const Poly& p, const char* op) {
    if (p.basis() != PolyBasis::monomial)
        throw std::domain_error(std::string(op) + ": monomial basis required");
}

void require_same_dim(const Poly& a, const Poly& b, const char* op) {
    if (a.dim() != b.dim())
        throw std::invalid_argument(std::string(op) + ": dimension mismatch");
}

cplx cpow_nonneg(cplx z, int n) {
    cplx r = 1.0;
    for (int i = 0; i < n; ++i) r *= z;
    return r;
}

int falling_int(int x, int n) {
    int r = 1;
    for (int i = 0; i < n; ++i) r *= (x - i);
    return r;
}

} // namespace

Poly Poly::constant(int dim, cplx c) {
    Poly p(dim);
    p.set_coeff(MultiIndex(dim), c);
    return p;
}

Poly Poly::monomial(const MultiIndex& alpha, cplx c) {
    Poly p(alpha.dim());
    p.set_coeff(alpha, c);
    return p;
}

int Poly::degree() const {
    int d = -1;
    for (const auto& [a, c] : terms_) d = std::max(d, a.degree());
    return d;
}

cplx Poly::coeff(const MultiIndex& alpha) const {
    auto it = terms_.find(alpha);
    return it == terms_.end() ? cplx(0.0) : it->second;
}

void Poly::set_coeff(const MultiIndex& alpha, cplx c) {
    if (alpha.dim() != dim_) throw std::invalid_argument("Poly: exponent dimension mismatch");
    if (c == cplx(0.0))
        terms_.erase(alpha);
    else
        terms_[alpha] = c;
}

void Poly::add_term(const MultiIndex& alpha, cplx c) {
    if (alpha.dim() != dim_) throw std::invalid_argument("Poly: exponent dimension mismatch");
    auto it = terms_.find(alpha);
    cplx v = (it == terms_.end() ? cplx(0.0) : it->second) + c;
    if (v == cplx(0.0)) {
        if (it != terms_.end()) terms_.erase(it);
    } else {
        terms_[alpha] = v;
    }
}

Poly Poly::operator+(const Poly& o) const {
    require_same_dim(*this, o, "Poly::operator+");
    if (basis_ != o.basis_) throw std::domain_error("Poly::operator+: mixed bases");
    Poly r = *this;
    for (const auto& [a, c] : o.terms_) r.add_term(a, c);
    return r;
}

Poly Poly::operator-(const Poly& o) const { return *this + o * cplx(-1.0); }

Poly Poly::operator*(cplx c) const {
    Poly r(dim_, basis_);
    if (c == cplx(0.0)) return r;
    for (const auto& [a, v] : terms_) r.set_coeff(a, v * c);
    return r;
}

Poly Poly::operator*(const Poly& o) const {
    require_same_dim(*this, o, "Poly::operator*");
    require_monomial(*this, "Poly::operator*");
    require_monomial(o, "Poly::operator*");
    Poly r(dim_);
    for (const auto& [a, ca] : terms_)
        for (const auto& [b, cb] : o.terms_) r.add_term(a + b, ca * cb);
    return r;
}

cplx Poly::evaluate(const std::vector<cplx>& x) const {
    if (static_cast<int>(x.size()) != dim_)
        throw std::invalid_argument("Poly::evaluate: point dimension mismatch");
    cplx total = 0.0;
    for (const auto& [a, c] : terms_) {
        cplx t = c;
        for (int j = 0; j < dim_; ++j) {
            if (basis_ == PolyBasis::monomial) {
                t *= cpow_nonneg(x[static_cast<size_t>(j)], a[j]);
            } else {
                for (int i = 0; i < a[j]; ++i) t *= x[static_cast<size_t>(j)] - cplx(i);
            }
        }
        total += t;
    }
    return total;
}

cplx Poly::evaluate_grid(const std::vector<int>& alpha) const {
    std::vector<cplx> x(alpha.begin(), alpha.end());
    return evaluate(x);
}

Poly Poly::pruned(double tol) const {
    Poly r(dim_, basis_);
    for (const auto& [a, c] : terms_)
        if (std::abs(c) > tol) r.set_coeff(a, c);
    return r;
}

double Poly::coeff_norm() const {
    double s = 0.0;
    for (const auto& [a, c] : terms_) s += std::norm(c);
    return std::sqrt(s);
}

double Poly::coeff_max() const {
    double m = 0.0;
    for (const auto& [a, c] : terms_) m = std::max(m, std::abs(c));
    return m;
}

Poly Poly::to_monomial() const {
    if (basis_ == PolyBasis::monomial) return *this;
    Poly r(dim_);
    for (const auto& [b, c] : terms_) {
        // (x)_b = sum_{g <= b} S1(b,g) x^g
        for (const auto& g : box_indices(dim_, b.degree())) {
            if (!g.leq(b)) continue;
            BigInt s = stirling1(b, g);
            if (s != 0) r.add_term(g, c * to_double(s));
        }
    }
    return r;
}

// ---- operators ---------------------------------------------------------------

Poly shift(const Poly& p, const MultiIndex& alpha) {
    require_monomial(p, "shift");
    if (alpha.dim() != p.dim()) throw std::invalid_argument("shift: dimension mismatch");
    Poly r(p.dim());
    for (const auto& [b, c] : p.terms()) {
        // (x+alpha)^b expanded coordinatewise
        std::vector<MultiIndex> gammas = {MultiIndex(p.dim())};
        std::vector<cplx> weights = {c};
        for (int j = 0; j < p.dim(); ++j) {
            std::vector<MultiIndex> ng;
            std::vector<cplx> nw;
            for (size_t i = 0; i < gammas.size(); ++i) {
                for (int g = 0; g <= b[j]; ++g) {
                    MultiIndex m = gammas[i];
                    m[j] = g;
                    // binomial(b_j, g) * alpha_j^(b_j - g)
                    double w = static_cast<double>(binomial(b[j], g));
                    for (int t = 0; t < b[j] - g; ++t) w *= alpha[j];
                    ng.push_back(m);
                    nw.push_back(weights[i] * w);
                }
            }
            gammas = std::move(ng);
            weights = std::move(nw);
        }
        for (size_t i = 0; i < gammas.size(); ++i)
            if (weights[i] != cplx(0.0)) r.add_term(gammas[i], weights[i]);
    }
    return r;
}

Poly difference(const Poly& p, const MultiIndex& kappa) {
    require_monomial(p, "difference");
    if (kappa.dim() != p.dim()) throw std::invalid_argument("difference: dimension mismatch");
    Poly r = p;
    for (int j = 0; j < p.dim(); ++j) {
        MultiIndex ej(p.dim());
        ej[j] = 1;
        for (int i = 0; i < kappa[j]; ++i) r = shift(r, ej) - r;
    }
    return r;
}

Poly derivative(const Poly& p, const MultiIndex& alpha) {
    require_monomial(p, "derivative");
    if (alpha.dim() != p.dim()) throw std::invalid_argument("derivative: dimension mismatch");
    Poly r(p.dim());
    for (const auto& [b, c] : p.terms()) {
        if (!alpha.leq(b)) continue;
        double fac = 1.0;
        for (int j = 0; j < p.dim(); ++j) fac *= falling_int(b[j], alpha[j]);
        r.add_term(b - alpha, c * fac);
    }
    return r;
}

Poly theta_apply(const Poly& q, const Poly& p) {
    require_monomial(q, "theta_apply");
    require_monomial(p, "theta_apply");
    require_same_dim(q, p, "theta_apply");
    Poly r(p.dim());
    std::map<MultiIndex, Poly, GrlexLess> dcache;
    for (const auto& [a, qa] : q.terms()) {
        // Dhat^a = sum_{b <= a} S2(a,b) x^b D^b
        for (const auto& b : box_indices(p.dim(), a.degree())) {
            if (!b.leq(a)) continue;
            BigInt s2 = stirling2(a, b);
            if (s2 == 0) continue;
            auto it = dcache.find(b);
            if (it == dcache.end()) it = dcache.emplace(b, derivative(p, b)).first;
            const Poly& dp = it->second;
            cplx w = qa * to_double(s2);
            for (const auto& [g, cg] : dp.terms()) r.add_term(g + b, w * cg);
        }
    }
    return r;
}

Poly newton_transform(const Poly& p) {
    require_monomial(p, "newton_transform");
    Poly r(p.dim());
    for (const auto& [b, c] : p.terms()) {
        for (const auto& a : box_indices(p.dim(), b.degree())) {
            if (!a.leq(b)) continue;
            BigInt s = stirling2(b, a);
            if (s != 0) r.add_term(a, c * to_double(s));
        }
    }
    return r;
}

Poly newton_inverse(const Poly& p) {
    require_monomial(p, "newton_inverse");
    Poly r(p.dim());
    for (const auto& [b, c] : p.terms()) {
        for (const auto& a : box_indices(p.dim(), b.degree())) {
            if (!a.leq(b)) continue;
            BigInt s = stirling1(b, a);
            if (s != 0) r.add_term(a, c * to_double(s));
        }
    }
    return r;
}

Poly scale_argument(const Poly& p, const std::vector<cplx>& xi) {
    require_monomial(p, "scale_argument");
    if (static_cast<int>(xi.size()) != p.dim())
        throw std::invalid_argument("scale_argument: dimension mismatch");
    for (const auto& z : xi)
        if (z == cplx(0.0)) throw std::domain_error("scale_argument: zero scale component");
    Poly r(p.dim());
    for (const auto& [b, c] : p.terms()) {
        cplx w = c;
        for (int j = 0; j < p.dim(); ++j) w *= cpow_nonneg(xi[static_cast<size_t>(j)], b[j]);
        r.set_coeff(b, w);
    }
    return r;
}

double theta_identity_residual(const Poly& q, const Poly& p, const std::vector<cplx>& xi) {
    cplx lhs = theta_apply(q, p).evaluate(xi);
    cplx rhs = 0.0;
    Poly lq = newton_transform(q);
    for (const auto& [a, c] : lq.terms()) {
        cplx t = c;
        for (int j = 0; j < p.dim(); ++j) t *= cpow_nonneg(xi[static_cast<size_t>(j)], a[j]);
        rhs += t * derivative(p, a).evaluate(xi);
    }
    return std::abs(lhs - rhs) / (1.0 + std::abs(lhs) + std::abs(rhs));
}

// ---- spans --------------------------------------------------------------------

namespace {

// greedy orthogonal selection; candidates are normalized, acceptance when the
// projection residual exceeds tau
std::vector<int> independent_subset(const std::vector<Poly>& cand, const IndexSet& support,
                                    double tau) {
    const int rows = support.size();
    Eigen::MatrixXcd Q(rows, 0);
    std::vector<int> picked;
    for (size_t i = 0; i < cand.size(); ++i) {
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(rows);
        for (const auto& [a, c] : cand[i].terms()) {
            int pos = support.position(a);
            if (pos < 0) throw std::logic_error("independent_subset: support too small");
            v(pos) = c;
        }
        double n0 = v.norm();
        if (n0 == 0.0) continue;
        v /= n0;
        if (Q.cols() > 0) {
            v -= Q * (Q.adjoint() * v);
            v -= Q * (Q.adjoint() * v); // reorthogonalize once
        }
        double res = v.norm();
        if (res > tau) {
            Q.conservativeResize(Eigen::NoChange, Q.cols() + 1);
            Q.col(Q.cols() - 1) = v / res;
            picked.push_back(static_cast<int>(i));
        }
    }
    return picked;
}

} // namespace

PolySpace shift_span(const Poly& p, double tau_rank) {
    require_monomial(p, "shift_span");
    if (p.is_zero()) throw std::domain_error("shift_span: zero polynomial");
    int d = p.degree();
    IndexSet support = total_degree_set(p.dim(), d);
    std::vector<Poly> gens;
    for (const auto& a : box_indices(p.dim(), d)) gens.push_back(shift(p, a));
    PolySpace sp;
    sp.dim = p.dim();
    for (int i : independent_subset(gens, support, tau_rank))
        sp.basis.push_back(gens[static_cast<size_t>(i)]);
    return sp;
}

PolySpace derivative_span(const Poly& p, double tau_rank) {
    require_monomial(p, "derivative_span");
    if (p.is_zero()) throw std::domain_error("derivative_span: zero polynomial");
    int d = p.degree();
    IndexSet support = total_degree_set(p.dim(), d);
    std::vector<Poly> gens;
    for (const auto& a : box_indices(p.dim(), d)) {
        Poly g = derivative(p, a);
        if (!g.is_zero()) gens.push_back(g);
    }
    PolySpace sp;
    sp.dim = p.dim();
    for (int i : independent_subset(gens, support, tau_rank))
        sp.basis.push_back(gens[static_cast<size_t>(i)]);
    return sp;
}

std::vector<Poly> preferred_shift_basis(const Poly& p, double tau_rank) {
    require_monomial(p, "preferred_shift_basis");
    if (p.is_zero()) throw std::domain_error("preferred_shift_basis: zero polynomial");
    int d = p.degree();
    if (d == 0) return {Poly::constant(p.dim(), 1.0)};

    // constant first, then difference fills of increasing degree, p itself last
    std::vector<Poly> cand{Poly::constant(p.dim(), 1.0)};
    std::vector<MultiIndex> kappas = box_indices(p.dim(), d);
    std::stable_sort(kappas.begin(), kappas.end(),
                     [](const MultiIndex& a, const MultiIndex& b) {
                         return a.degree() > b.degree();
                     });
    for (const auto& k : kappas) {
        if (k.degree() == 0) continue;
        Poly g = difference(p, k);
        if (!g.is_zero()) cand.push_back(g);
    }
    cand.push_back(p);

    IndexSet support = total_degree_set(p.dim(), d);
    std::vector<Poly> basis;
    for (int i : independent_subset(cand, support, tau_rank))
        basis.push_back(cand[static_cast<size_t>(i)]);
    // p has strictly larger degree than every difference fill, so it is the
    // last accepted element by construction
    return basis;
}

} // namespace expoly
