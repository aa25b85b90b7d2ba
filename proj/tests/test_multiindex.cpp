#include <doctest.h>

#include <algorithm>
#include <set>

#include "expoly/multiindex.hpp"

using namespace expoly;

namespace {

std::vector<std::vector<int>> raw(const IndexSet& s) {
    std::vector<std::vector<int>> v;
    for (const MultiIndex& a : s.elements()) v.push_back(a.data());
    return v;
}

// all 2d lower sets of a given cardinality are Young diagrams; enumerate the
// partitions and materialize the point sets
void partitions_of(int m, int max_part, std::vector<int>& cur,
                   std::vector<std::vector<int>>& out) {
    if (m == 0) {
        out.push_back(cur);
        return;
    }
    for (int p = std::min(m, max_part); p >= 1; --p) {
        cur.push_back(p);
        partitions_of(m - p, p, cur, out);
        cur.pop_back();
    }
}

} // namespace

TEST_CASE("total degree sets match the frozen enumerations") {
    CHECK(raw(total_degree_set(2, 1)) ==
          std::vector<std::vector<int>>{{0, 0}, {1, 0}, {0, 1}});
    CHECK(raw(total_degree_set(1, 3)) ==
          std::vector<std::vector<int>>{{0}, {1}, {2}, {3}});
    CHECK(total_degree_set(3, 2).size() == 10); // C(5,3)
    CHECK_THROWS(total_degree_set(0, 1));
}

TEST_CASE("total degree set cardinality is C(n+s,s)") {
    for (int s = 1; s <= 4; ++s)
        for (int n = 0; n <= 8; ++n)
            CHECK(total_degree_set(s, n).size() ==
                  static_cast<int>(binomial(n + s, s)));
}

TEST_CASE("hyperbolic cross sets match the frozen enumerations") {
    // (1,1) has product 4 > 3 and is excluded
    CHECK(raw(hyperbolic_set(2, 3)) ==
          std::vector<std::vector<int>>{{0, 0}, {1, 0}, {0, 1}, {2, 0}, {0, 2}});
    CHECK(raw(hyperbolic_set(1, 4)) ==
          std::vector<std::vector<int>>{{0}, {1}, {2}, {3}});
    CHECK(raw(hyperbolic_set(2, 1)) == std::vector<std::vector<int>>{{0, 0}});
    CHECK_THROWS(hyperbolic_set(2, 0));
}

TEST_CASE("hyperbolic cross is a lower set and obeys the product bound") {
    for (int s = 1; s <= 3; ++s)
        for (int N = 1; N <= 30; ++N) {
            const IndexSet u = hyperbolic_set(s, N);
            CHECK(u.is_lower_set());
            for (const MultiIndex& a : u.elements()) {
                long long prod = 1;
                for (int j = 0; j < s; ++j) prod *= 1 + a[j];
                CHECK(prod <= N);
            }
        }
}

TEST_CASE("hyperbolic cross contains every lower set of its cardinality") {
    // s = 2: lower sets of size m are Young diagrams (partitions of m)
    for (int m = 1; m <= 6; ++m) {
        std::vector<std::vector<int>> parts;
        std::vector<int> cur;
        partitions_of(m, m, cur, parts);
        const IndexSet u = hyperbolic_set(2, m);
        for (const auto& lambda : parts)
            for (int i = 0; i < static_cast<int>(lambda.size()); ++i)
                for (int j = 0; j < lambda[static_cast<std::size_t>(i)]; ++j)
                    CHECK(u.contains(MultiIndex{i, j}));
    }
}

TEST_CASE("graded enumerator yields the canonical order") {
    GradedEnumerator g(2);
    CHECK(g.next().data() == std::vector<int>{0, 0});
    CHECK(g.next().data() == std::vector<int>{1, 0});
    CHECK(g.next().data() == std::vector<int>{0, 1});
    CHECK(g.next().data() == std::vector<int>{2, 0});
    CHECK(g.next().data() == std::vector<int>{1, 1});
    CHECK(g.next().data() == std::vector<int>{0, 2});

    GradedEnumerator g1(1);
    for (int k = 0; k <= 5; ++k) CHECK(g1.next().data() == std::vector<int>{k});
}

TEST_CASE("graded enumerator prefix equals the total degree set") {
    for (int s = 1; s <= 3; ++s)
        for (int n = 0; n <= 4; ++n) {
            const IndexSet gamma = total_degree_set(s, n);
            GradedEnumerator g(s);
            for (int i = 0; i < gamma.size(); ++i)
                CHECK(g.next() == gamma[i]);
        }
}

TEST_CASE("grlex order: degree first, lexicographically larger first inside") {
    CHECK(grlex_before(MultiIndex{0, 1}, MultiIndex{2, 0}));
    CHECK(grlex_before(MultiIndex{1, 0}, MultiIndex{0, 1}));
    CHECK(grlex_before(MultiIndex{2, 0}, MultiIndex{1, 1}));
    CHECK(grlex_before(MultiIndex{1, 1}, MultiIndex{0, 2}));
    CHECK_FALSE(grlex_before(MultiIndex{1, 1}, MultiIndex{1, 1}));
}

TEST_CASE("multiindex arithmetic and validation") {
    const MultiIndex a{2, 1};
    const MultiIndex b{1, 1};
    CHECK((a + b).data() == std::vector<int>{3, 2});
    CHECK((a - b).data() == std::vector<int>{1, 0});
    CHECK(b.leq(a));
    CHECK_FALSE(a.leq(b));
    CHECK(a.degree() == 3);
    CHECK(a.to_string() == "2,1");
    CHECK_THROWS(MultiIndex{-1, 0});
    CHECK_THROWS(a - MultiIndex{3, 0});
}

TEST_CASE("index set positions, membership, lower-set detection") {
    IndexSet s(2, {MultiIndex{0, 0}, MultiIndex{1, 0}, MultiIndex{0, 1}});
    CHECK(s.position(MultiIndex{0, 1}) == 2);
    CHECK(s.position(MultiIndex{1, 1}) == -1);
    CHECK(s.contains(MultiIndex{1, 0}));
    CHECK(s.is_lower_set());
    CHECK(s.max_degree() == 1);

    IndexSet t(2, {MultiIndex{0, 0}, MultiIndex{1, 1}});
    CHECK_FALSE(t.is_lower_set());

    CHECK_THROWS(IndexSet(2, {MultiIndex{0, 0}, MultiIndex{0, 0}}));
}

TEST_CASE("binomial is exact and guards overflow") {
    CHECK(binomial(5, 2) == 10);
    CHECK(binomial(10, 0) == 1);
    CHECK(binomial(3, 5) == 0);
    CHECK(binomial(52, 5) == 2598960ull);
    CHECK_THROWS(binomial(200, 100));
}
