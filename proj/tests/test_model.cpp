#include <doctest.h>

#include <Eigen/SVD>
#include <cmath>
#include <complex>

#include "expoly/errors.hpp"
#include "expoly/model.hpp"

using namespace expoly;

namespace {

const double kLn2 = std::log(2.0);
const double kLn3 = std::log(3.0);

Poly mono(const MultiIndex& a, cplx c = 1.0) { return Poly::monomial(a, c); }

ExpPolyModel geometric(double ratio, cplx amp = 1.0) {
    return ExpPolyModel(1, {{{std::log(ratio)}, Poly::constant(1, amp)}});
}

// f(k) = (c0 + c1 k) ratio^k
ExpPolyModel linear_times_geometric(double ratio, cplx c0, cplx c1) {
    Poly p(1);
    p.add_term(MultiIndex{0}, c0);
    p.add_term(MultiIndex{1}, c1);
    return ExpPolyModel(1, {{{std::log(ratio)}, p}});
}

} // namespace

TEST_CASE("grid evaluation of simple models") {
    CHECK(std::abs(geometric(2.0).eval_grid({3}) - cplx(8.0)) <= 1e-12);
    CHECK(std::abs(geometric(2.0, 3.0).eval_grid({3}) - cplx(24.0)) <= 1e-12);
    CHECK(ExpPolyModel(2).eval_grid({5, -1}) == cplx(0.0));
    CHECK(ExpPolyModel(2).max_coeff_degree() == -1);

    const ExpPolyModel m = linear_times_geometric(2.0, 1.0, 1.0);
    CHECK(m.max_coeff_degree() == 1);
    CHECK(std::abs(m.eval_grid({4}) - cplx(80.0)) <= 1e-12);
    CHECK(std::abs(m.eval_grid({-1}) - cplx(0.0)) <= 1e-12); // (1-1)/2
    CHECK_THROWS_AS((void)m.eval_grid({0, 0}), std::invalid_argument);
}

TEST_CASE("frequencies are reduced to the half-open principal strip") {
    const double pi = std::acos(-1.0);
    CHECK(std::abs(normalize_frequency(cplx(0, pi)) - cplx(0, -pi)) <= 1e-12);
    CHECK(std::abs(normalize_frequency(cplx(0, -pi)) - cplx(0, -pi)) <= 1e-12);
    CHECK(std::abs(normalize_frequency(cplx(0.5, 3 * pi)) - cplx(0.5, -pi)) <= 1e-12);
    CHECK(std::abs(normalize_frequency(cplx(1.0, 2 * pi))) <= cplx(1.0).real() + 1e-12);
    CHECK(std::abs(normalize_frequency(cplx(0, 2 * pi)) - cplx(0, 0)) <= 1e-12);

    // stored components expose xi = exp(omega)
    const ExpPolyModel m(1, {{{cplx(0, pi)}, Poly::constant(1, 1.0)}});
    CHECK(std::abs(m.components()[0].omega[0] - cplx(0, -pi)) <= 1e-12);
    CHECK(std::abs(m.components()[0].xi[0] - cplx(-1.0)) <= 1e-12);
}

TEST_CASE("model validation rejects malformed input") {
    CHECK_THROWS_AS(ExpPolyModel(1, {{{0.0}, Poly(1)}}), ParseError);
    const double pi = std::acos(-1.0);
    // ln 2 and ln 2 + 2 pi i alias the same grid signal
    CHECK_THROWS_AS(
        ExpPolyModel(1, {{{kLn2}, Poly::constant(1, 1.0)},
                         {{cplx(kLn2, 2 * pi)}, Poly::constant(1, 1.0)}}),
        ParseError);
    CHECK_THROWS_AS(ExpPolyModel(2, {{{0.0}, Poly::constant(2, 1.0)}}), ParseError);
    CHECK_THROWS_AS(
        ExpPolyModel(1, {{{0.0}, Poly(1, PolyBasis::falling)}}), ParseError);
}

TEST_CASE("integer powers handle zero and negatives") {
    CHECK(ipow(cplx(0.0), 0) == cplx(1.0));
    CHECK(ipow(cplx(2.0), -2) == cplx(0.25));
    CHECK(grid_power({0, 3}, MultiIndex{0, 2}) == cplx(9.0));
    CHECK(grid_power({0, 3}, MultiIndex{1, 0}) == cplx(0.0));
    CHECK(grid_power({-2, 1}, MultiIndex{2, 0}) == cplx(4.0));
}

TEST_CASE("hankel matrices against hand-computed tables") {
    const IndexSet g1 = total_degree_set(1, 1);
    const ModelSource src(geometric(2.0));
    const SampleMatrix H = build_hankel(src, g1, g1);
    REQUIRE(H.M.rows() == 2);
    REQUIRE(H.M.cols() == 2);
    CHECK(std::abs(H.M(0, 0) - cplx(1.0)) <= 1e-12);
    CHECK(std::abs(H.M(0, 1) - cplx(2.0)) <= 1e-12);
    CHECK(std::abs(H.M(1, 0) - cplx(2.0)) <= 1e-12);
    CHECK(std::abs(H.M(1, 1) - cplx(4.0)) <= 1e-12);

    // f(k) = k 2^k over Gamma_2 x Gamma_2
    const ModelSource src2(linear_times_geometric(2.0, 0.0, 1.0));
    const IndexSet g2 = total_degree_set(1, 2);
    const SampleMatrix H2 = build_hankel(src2, g2, g2);
    const double want[3][3] = {{0, 2, 8}, {2, 8, 24}, {8, 24, 64}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            CHECK(std::abs(H2.M(i, j) - want[i][j]) <= 1e-12);

    CHECK(build_hankel(ModelSource(ExpPolyModel(1)), g2, g2).M.norm() == 0.0);
}

TEST_CASE("toeplitz matrices read the mirrored grid") {
    const IndexSet g1 = total_degree_set(1, 1);
    const SampleMatrix T = build_toeplitz(ModelSource(geometric(2.0)), g1, g1);
    CHECK(std::abs(T.M(0, 0) - cplx(1.0)) <= 1e-12);
    CHECK(std::abs(T.M(0, 1) - cplx(0.5)) <= 1e-12);
    CHECK(std::abs(T.M(1, 0) - cplx(2.0)) <= 1e-12);
    CHECK(std::abs(T.M(1, 1) - cplx(1.0)) <= 1e-12);

    const SampleMatrix T1 = build_toeplitz(ModelSource(geometric(1.0)),
                                           total_degree_set(1, 2), g1);
    CHECK((T1.M.array() - cplx(1.0)).matrix().norm() <= 1e-12);

    const IndexSet origin(1, {MultiIndex{0}});
    CHECK(build_toeplitz(ModelSource(geometric(5.0)), origin, origin).M(0, 0) ==
          cplx(1.0));

    // table covering [-1,1] suffices for A=B=Gamma_1
    const TableSource tab({-1}, {1}, {cplx(0.5), cplx(1.0), cplx(2.0)});
    const SampleMatrix Tt = build_toeplitz(tab, g1, g1);
    CHECK(std::abs(Tt.M(0, 1) - cplx(0.5)) <= 1e-12);
    CHECK(std::abs(Tt.M(1, 0) - cplx(2.0)) <= 1e-12);
}

TEST_CASE("dense tables index and guard their box") {
    const TableSource t({0, 0}, {1, 1},
                        {cplx(1.0), cplx(2.0), cplx(3.0), cplx(4.0)});
    CHECK(t.dim() == 2);
    CHECK(t.sample({0, 0}) == cplx(1.0));
    CHECK(t.sample({0, 1}) == cplx(2.0)); // last coordinate runs fastest
    CHECK(t.sample({1, 0}) == cplx(3.0));
    CHECK(t.sample({1, 1}) == cplx(4.0));
    CHECK(t.covers({1, 1}));
    CHECK_FALSE(t.covers({2, 0}));
    CHECK_FALSE(t.covers({0, -1}));
    CHECK_THROWS_AS((void)t.sample({2, 0}), CoverageError);
    try {
        (void)t.sample({2, 0});
    } catch (const Error& e) {
        CHECK(e.exit_code() == 3);
    }
    CHECK_THROWS_AS(TableSource({0}, {2}, {cplx(1.0)}), ParseError);
    CHECK_THROWS_AS(TableSource({3}, {1}, {cplx(1.0)}), ParseError);
}

TEST_CASE("kernel annihilation residual, including a frozen nonzero value") {
    const ModelSource two(geometric(2.0));
    Poly q(1);
    q.add_term(MultiIndex{1}, 1.0);
    q.add_term(MultiIndex{0}, -2.0);
    const IndexSet win = total_degree_set(1, 5);
    CHECK(annihilation_residual(two, q, win) <= 1e-15);

    // (x-2)^2 kills k 2^k
    const Poly q2 = q * q;
    CHECK(annihilation_residual(ModelSource(linear_times_geometric(2.0, 0.0, 1.0)),
                                q2, win) <= 1e-14);

    // wrong root: max_k |2^{k+1} - 3 2^k| / max touched value = 32/64
    Poly q3(1);
    q3.add_term(MultiIndex{1}, 1.0);
    q3.add_term(MultiIndex{0}, -3.0);
    CHECK(annihilation_residual(two, q3, win) == doctest::Approx(0.5).epsilon(1e-12));

    // all-zero data normalizes to zero rather than dividing by zero
    CHECK(annihilation_residual(ModelSource(ExpPolyModel(1)), q3, win) == 0.0);
}

TEST_CASE("vandermonde rows collapse to q(alpha) xi^alpha") {
    const IndexSet g2 = total_degree_set(1, 2);
    const ExpPolyModel m2 = geometric(2.0);
    const Eigen::MatrixXcd V =
        build_vandermonde(m2, {{Poly::constant(1, 1.0)}}, g2);
    REQUIRE(V.rows() == 1);
    CHECK(std::abs(V(0, 0) - cplx(1.0)) <= 1e-12);
    CHECK(std::abs(V(0, 1) - cplx(2.0)) <= 1e-12);
    CHECK(std::abs(V(0, 2) - cplx(4.0)) <= 1e-12);

    const ExpPolyModel mk = linear_times_geometric(2.0, 0.0, 1.0);
    const Eigen::MatrixXcd V2 = build_vandermonde(
        mk, {{Poly::constant(1, 1.0), mono(MultiIndex{1})}}, g2);
    REQUIRE(V2.rows() == 2);
    CHECK(std::abs(V2(1, 0) - cplx(0.0)) <= 1e-12);
    CHECK(std::abs(V2(1, 1) - cplx(2.0)) <= 1e-12);
    CHECK(std::abs(V2(1, 2) - cplx(8.0)) <= 1e-12);

    const IndexSet origin(1, {MultiIndex{0}});
    const Eigen::MatrixXcd V0 =
        build_vandermonde(m2, {{Poly::constant(1, 1.0)}}, origin);
    CHECK(std::abs(V0(0, 0) - cplx(1.0)) <= 1e-12);

    CHECK_THROWS(build_vandermonde(m2, {}, g2));
}

TEST_CASE("hankel rank equals the sum of shift-span dimensions") {
    // f(k) = (1+k) 2^k + 3^k: spans of sizes 2 and 1
    Poly p(1);
    p.add_term(MultiIndex{0}, 1.0);
    p.add_term(MultiIndex{1}, 1.0);
    const ExpPolyModel m(1, {{{kLn2}, p}, {{kLn3}, Poly::constant(1, 1.0)}});
    const IndexSet g4 = total_degree_set(1, 4);
    const SampleMatrix H = build_hankel(ModelSource(m), g4, g4);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(H.M);
    int rank = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > 1e-10 * svd.singularValues()(0)) ++rank;
    const int want = shift_span(p).size() + 1;
    CHECK(rank == want);
    CHECK(rank == 3);
}

TEST_CASE("linearization blocks reproduce the translation expansion") {
    // f = x on basis {1, x}: f(x+y) = 1*y + x*1
    const std::vector<Poly> Q = {Poly::constant(1, 1.0), mono(MultiIndex{1})};
    const Eigen::MatrixXcd A = linearization_block(mono(MultiIndex{1}), Q);
    REQUIRE(A.rows() == 2);
    CHECK(std::abs(A(0, 0) - cplx(0.0)) <= 1e-10);
    CHECK(std::abs(A(0, 1) - cplx(1.0)) <= 1e-10);
    CHECK(std::abs(A(1, 0) - cplx(1.0)) <= 1e-10);
    CHECK(std::abs(A(1, 1) - cplx(0.0)) <= 1e-10);
}

TEST_CASE("factored hankel reconstruction stays at rounding level") {
    const IndexSet g2 = total_degree_set(1, 2);
    CHECK(hankel_factorization_residual(geometric(2.0), g2, g2) <= 1e-12);
    CHECK(hankel_factorization_residual(linear_times_geometric(2.0, 0.0, 1.0),
                                        g2, g2) <= 1e-12);

    const double pi = std::acos(-1.0);
    const ExpPolyModel osc(
        1, {{{0.0}, Poly::constant(1, 1.0)},
            {{cplx(0, pi)}, Poly::constant(1, 1.0)}}); // 1 + (-1)^k
    CHECK(hankel_factorization_residual(osc, g2, g2) <= 1e-12);

    // s = 2 with a genuine polynomial factor
    Poly pxy(2);
    pxy.add_term(MultiIndex{0, 0}, 1.0);
    pxy.add_term(MultiIndex{1, 1}, 0.5);
    const ExpPolyModel m2(2, {{{kLn2, 0.0}, pxy}});
    const IndexSet h = total_degree_set(2, 2);
    CHECK(hankel_factorization_residual(m2, h, h) <= 1e-10);
}
