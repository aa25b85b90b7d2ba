#ifndef EXPOLY_STIRLING_HPP
#define EXPOLY_STIRLING_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include "expoly/multiindex.hpp"

namespace expoly {

using BigInt = boost::multiprecision::cpp_int;

enum class StirlingKind { first, second };

// Multivariate Stirling numbers factor over coordinates:
//   stirling2(nu, kappa) = prod_j S2(nu_j, kappa_j)   (set partitions)
//   stirling1(nu, kappa) = prod_j S1(nu_j, kappa_j)   (signed, falling factorials)
// Both vanish unless kappa <= nu componentwise. Values are exact; the
// univariate triangles are filled by recurrence and cached behind a lock.
BigInt stirling2(const MultiIndex& nu, const MultiIndex& kappa);
BigInt stirling1(const MultiIndex& nu, const MultiIndex& kappa);

// Univariate entries (n, k >= 0).
BigInt stirling2_uni(int n, int k);
BigInt stirling1_uni(int n, int k);

// Slow independent oracle: the defining alternating sum
//   (1/kappa!) sum_{gamma <= kappa} (-1)^{|kappa|-|gamma|} C(kappa,gamma) gamma^nu
// evaluated directly in exact integers (the division is exact).
BigInt stirling2_by_sum(const MultiIndex& nu, const MultiIndex& kappa);

// Exact coefficients of the univariate falling factorial
// (x)_n = x(x-1)...(x-n+1) = sum_k S1(n,k) x^k; defines stirling1_uni.
std::vector<BigInt> falling_factorial_coeffs(int n);

// One step of the second-kind recurrence in direction j:
//   returns kappa_j * stirling2(nu, kappa) + stirling2(nu, kappa - e_j),
// which must equal stirling2(nu + e_j, kappa).
BigInt stirling2_recurrence_step(const MultiIndex& nu, const MultiIndex& kappa, int j);

// Convenience table for a fixed kind and dimension (CLI dumps, tests).
class StirlingTable {
public:
    StirlingTable(StirlingKind kind, int dim) : kind_(kind), dim_(dim) {}

    StirlingKind kind() const { return kind_; }
    int dim() const { return dim_; }
    BigInt value(const MultiIndex& nu, const MultiIndex& kappa) const;

private:
    StirlingKind kind_;
    int dim_;
};

} // namespace expoly

#endif
