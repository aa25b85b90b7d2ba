#include <doctest.h>

#include <cmath>

#include "expoly/poly.hpp"
#include "expoly/rng.hpp"

using namespace expoly;

namespace {

Poly from_terms(int dim, std::vector<std::pair<MultiIndex, cplx>> ts,
                PolyBasis basis = PolyBasis::monomial) {
    Poly p(dim, basis);
    for (auto& [a, c] : ts) p.add_term(a, c);
    return p;
}

bool close(const Poly& a, const Poly& b, double tol = 1e-12) {
    return (a - b).coeff_max() <= tol;
}

Poly random_poly(Rng& rng, int dim, int deg, double mag = 10.0) {
    const IndexSet box = total_degree_set(dim, deg);
    Poly p(dim);
    for (int i = 0; i < box.size(); ++i)
        if (rng.uniform01() < 0.55)
            p.add_term(box[i], rng.uniform(-mag, mag) +
                                   cplx(0, 1) * rng.uniform(-mag, mag));
    if (p.is_zero()) p.add_term(box[rng.uniform_int(0, box.size() - 1)], 1.0);
    return p;
}

} // namespace

TEST_CASE("evaluation in both bases") {
    CHECK(from_terms(1, {{MultiIndex{2}, 1.0}}).evaluate({3.0}) == cplx(9.0));
    // falling (x)_2 at 3 -> 3*2
    CHECK(from_terms(1, {{MultiIndex{2}, 1.0}}, PolyBasis::falling)
              .evaluate({3.0}) == cplx(6.0));
    const Poly p = from_terms(2, {{MultiIndex{1, 1}, 1.0}, {MultiIndex{0, 0}, 1.0}});
    CHECK(p.evaluate({2.0, cplx(0, 1)}) == cplx(1, 2));
    CHECK_THROWS(p.evaluate({1.0}));
}

TEST_CASE("degree bookkeeping and pruning") {
    Poly z(1);
    CHECK(z.is_zero());
    CHECK(z.degree() == -1);
    Poly p = from_terms(2, {{MultiIndex{2, 1}, 3.0}, {MultiIndex{0, 0}, 1e-14}});
    CHECK(p.degree() == 3);
    CHECK(p.pruned(1e-12).term_count() == 1);
    p.set_coeff(MultiIndex{2, 1}, 0.0);
    CHECK(p.degree() == 0);
}

TEST_CASE("shift matches binomial expansion") {
    const Poly x2 = from_terms(1, {{MultiIndex{2}, 1.0}});
    CHECK(close(shift(x2, MultiIndex{1}),
                from_terms(1, {{MultiIndex{2}, 1.0},
                               {MultiIndex{1}, 2.0},
                               {MultiIndex{0}, 1.0}})));
    // random spot: p(x+a) evaluated = p evaluated at x+a
    Rng rng(7);
    for (int t = 0; t < 20; ++t) {
        const Poly p = random_poly(rng, 2, 3);
        const MultiIndex a{rng.uniform_int(0, 3), rng.uniform_int(0, 3)};
        const cplx x1 = rng.uniform(-2, 2), x2v = rng.uniform(-2, 2);
        const cplx lhs = shift(p, a).evaluate({x1, x2v});
        const cplx rhs = p.evaluate({x1 + static_cast<double>(a[0]),
                                     x2v + static_cast<double>(a[1])});
        CHECK(std::abs(lhs - rhs) <= 1e-9 * (1 + std::abs(rhs)));
    }
}

TEST_CASE("difference operator") {
    const Poly x2 = from_terms(1, {{MultiIndex{2}, 1.0}});
    CHECK(close(difference(x2, MultiIndex{1}),
                from_terms(1, {{MultiIndex{1}, 2.0}, {MultiIndex{0}, 1.0}})));
    const Poly xy = from_terms(2, {{MultiIndex{1, 1}, 1.0}});
    CHECK(close(difference(xy, MultiIndex{1, 1}), Poly::constant(2, 1.0)));
}

TEST_CASE("difference obeys the product identity") {
    Rng rng(11);
    for (int t = 0; t < 10; ++t) {
        const Poly f = random_poly(rng, 1, 3, 2.0);
        const Poly g = random_poly(rng, 1, 3, 2.0);
        const MultiIndex one{1};
        const Poly lhs = difference(f * g, one);
        const Poly rhs = shift(f, one) * shift(g, one) - f * g;
        CHECK(close(lhs, rhs, 1e-9));
    }
}

TEST_CASE("derivative") {
    CHECK(close(derivative(from_terms(1, {{MultiIndex{3}, 1.0}}), MultiIndex{2}),
                from_terms(1, {{MultiIndex{1}, 6.0}})));
    CHECK(close(derivative(from_terms(2, {{MultiIndex{2, 1}, 1.0}}), MultiIndex{1, 1}),
                from_terms(2, {{MultiIndex{1, 0}, 2.0}})));
    CHECK(derivative(Poly::constant(1, 1.0), MultiIndex{1}).is_zero());
}

TEST_CASE("theta operator scales monomials by beta^alpha") {
    const Poly x3 = from_terms(1, {{MultiIndex{3}, 1.0}});
    CHECK(close(theta_apply(from_terms(1, {{MultiIndex{1}, 1.0}}), x3),
                from_terms(1, {{MultiIndex{3}, 3.0}})));
    CHECK(close(theta_apply(from_terms(1, {{MultiIndex{2}, 1.0}}), x3),
                from_terms(1, {{MultiIndex{3}, 9.0}})));
    const Poly p = from_terms(2, {{MultiIndex{2, 1}, 2.0}, {MultiIndex{0, 0}, 5.0}});
    CHECK(close(theta_apply(Poly::constant(2, 1.0), p), p));

    // eigenrelation on the full box alpha, beta <= (4,4)
    for (int a1 = 0; a1 <= 4; ++a1)
        for (int a2 = 0; a2 <= 4; ++a2)
            for (int b1 = 0; b1 <= 4; ++b1)
                for (int b2 = 0; b2 <= 4; ++b2) {
                    const MultiIndex alpha{a1, a2}, beta{b1, b2};
                    const Poly got =
                        theta_apply(Poly::monomial(alpha), Poly::monomial(beta));
                    const double lam =
                        std::pow(double(b1), a1) * std::pow(double(b2), a2);
                    CHECK(close(got, Poly::monomial(beta, lam), 1e-6));
                }
}

TEST_CASE("newton transform matches the worked example and inverts") {
    const Poly x2 = from_terms(1, {{MultiIndex{2}, 1.0}});
    CHECK(close(newton_transform(x2),
                from_terms(1, {{MultiIndex{1}, 1.0}, {MultiIndex{2}, 1.0}})));
    CHECK(close(newton_transform(Poly::constant(1, 1.0)), Poly::constant(1, 1.0)));
    CHECK(close(newton_inverse(from_terms(1, {{MultiIndex{1}, 1.0},
                                              {MultiIndex{2}, 1.0}})),
                x2));
}

TEST_CASE("newton transform coefficients are forward differences at zero") {
    // (Lp)_alpha = Delta^alpha p (0) / alpha!
    Rng rng(23);
    for (int t = 0; t < 8; ++t) {
        const Poly p = random_poly(rng, 2, 3, 4.0);
        const Poly lp = newton_transform(p);
        for (int a1 = 0; a1 <= 3; ++a1)
            for (int a2 = 0; a2 <= 3 - a1; ++a2) {
                const MultiIndex a{a1, a2};
                double fact = 1.0;
                for (int k = 2; k <= a1; ++k) fact *= k;
                for (int k = 2; k <= a2; ++k) fact *= k;
                const cplx want = difference(p, a).evaluate({0.0, 0.0}) / fact;
                CHECK(std::abs(lp.coeff(a) - want) <= 1e-9 * (1 + std::abs(want)));
            }
    }
}

TEST_CASE("newton round trip on random polynomials") {
    Rng rng(5);
    for (int t = 0; t < 60; ++t) {
        const int s = 1 + t % 3;
        const Poly p = random_poly(rng, s, 6);
        const Poly back = newton_inverse(newton_transform(p));
        CHECK((back - p).coeff_max() <= 1e-9);
    }
}

TEST_CASE("theta identity: raw expansion equals newton-transformed scaled derivative") {
    // frozen anchors
    const Poly x = from_terms(1, {{MultiIndex{1}, 1.0}});
    const Poly x2 = from_terms(1, {{MultiIndex{2}, 1.0}});
    const Poly x3 = from_terms(1, {{MultiIndex{3}, 1.0}});
    CHECK(theta_identity_residual(x, x2, {2.0}) <= 1e-12);
    CHECK(theta_identity_residual(Poly::constant(1, 1.0), x3, {1.7}) <= 1e-12);
    CHECK(theta_identity_residual(x2, x3, {1.0}) <= 1e-12);

    Rng rng(9);
    for (int t = 0; t < 60; ++t) {
        const int s = 1 + t % 3;
        const Poly q = random_poly(rng, s, 4, 3.0);
        const Poly p = random_poly(rng, s, 4, 3.0);
        std::vector<cplx> xi(static_cast<std::size_t>(s));
        for (auto& z : xi) z = rng.uniform(0.5, 2.0) * rng.unit_phase();
        CHECK(theta_identity_residual(q, p, xi) <= 1e-9);
    }
}

TEST_CASE("argument scaling") {
    const Poly x2 = from_terms(1, {{MultiIndex{2}, 1.0}});
    CHECK(close(scale_argument(x2, {2.0}), from_terms(1, {{MultiIndex{2}, 4.0}})));
    const Poly p = from_terms(2, {{MultiIndex{1, 0}, 1.0}, {MultiIndex{0, 1}, 1.0}});
    CHECK(close(scale_argument(p, {1.0, cplx(0, 1)}),
                from_terms(2, {{MultiIndex{1, 0}, 1.0},
                               {MultiIndex{0, 1}, cplx(0, 1)}})));
    CHECK(close(scale_argument(Poly::constant(2, 1.0), {3.0, 4.0}),
                Poly::constant(2, 1.0)));
    CHECK_THROWS(scale_argument(x2, {0.0}));
}

TEST_CASE("falling-basis input converts through first-kind numbers") {
    // (x)_2 = x^2 - x
    const Poly f = from_terms(1, {{MultiIndex{2}, 1.0}}, PolyBasis::falling);
    CHECK(close(f.to_monomial(),
                from_terms(1, {{MultiIndex{2}, 1.0}, {MultiIndex{1}, -1.0}})));
}

TEST_CASE("span dimensions match the worked examples") {
    const Poly x = from_terms(1, {{MultiIndex{1}, 1.0}});
    CHECK(shift_span(x).size() == 2);

    const Poly x1x2 = from_terms(2, {{MultiIndex{1, 1}, 1.0}});
    CHECK(derivative_span(x1x2).size() == 4);
    CHECK(shift_span(x1x2).size() == 4);

    const Poly x3 = from_terms(1, {{MultiIndex{3}, 1.0}});
    CHECK(shift_span(x3).size() == 4);

    CHECK_THROWS(shift_span(Poly(1)));
}

TEST_CASE("L intertwines shift spans and derivative spans") {
    Rng rng(31);
    for (int t = 0; t < 12; ++t) {
        const int s = 1 + t % 2;
        const Poly p = random_poly(rng, s, 3, 4.0);
        CHECK(shift_span(p).size() ==
              derivative_span(newton_transform(p)).size());
    }
}

TEST_CASE("preferred shift basis starts at 1 and ends at p") {
    Rng rng(41);
    for (int t = 0; t < 10; ++t) {
        const int s = 1 + t % 2;
        const Poly p = random_poly(rng, s, 2, 4.0);
        const auto basis = preferred_shift_basis(p);
        REQUIRE_FALSE(basis.empty());
        CHECK(close(basis.front(), Poly::constant(s, 1.0)));
        CHECK(close(basis.back(), p));
        CHECK(static_cast<int>(basis.size()) == shift_span(p).size());
    }
    // deg 0: basis is exactly {1}
    const auto b0 = preferred_shift_basis(Poly::constant(2, 3.0));
    REQUIRE(b0.size() == 1);
    CHECK(close(b0[0], Poly::constant(2, 1.0)));
}
