#include "expoly/stirling.hpp"

#include <mutex>
#include <stdexcept>

namespace expoly {

namespace {

std::mutex g_cache_mutex;

// triangles[n][k]; filled row by row under the lock
std::vector<std::vector<BigInt>> g_s2;
std::vector<std::vector<BigInt>> g_s1;

void extend_second(int n) {
    if (g_s2.empty()) g_s2.push_back({BigInt(1)}); // S2(0,0) = 1
    while (static_cast<int>(g_s2.size()) <= n) {
        int m = static_cast<int>(g_s2.size());
        const auto& prev = g_s2.back();
        std::vector<BigInt> row(static_cast<size_t>(m) + 1);
        row[0] = 0;
        for (int k = 1; k <= m; ++k) {
            BigInt v = k < m ? BigInt(k) * prev[static_cast<size_t>(k)] : BigInt(0);
            v += prev[static_cast<size_t>(k) - 1];
            row[static_cast<size_t>(k)] = v; // S2(m,k) = k S2(m-1,k) + S2(m-1,k-1)
        }
        g_s2.push_back(std::move(row));
    }
}

void extend_first(int n) {
    if (g_s1.empty()) g_s1.push_back({BigInt(1)}); // (x)_0 = 1
    while (static_cast<int>(g_s1.size()) <= n) {
        int m = static_cast<int>(g_s1.size());
        const auto& prev = g_s1.back();
        std::vector<BigInt> row(static_cast<size_t>(m) + 1);
        // (x)_m = (x)_{m-1} (x - (m-1)):  S1(m,k) = S1(m-1,k-1) - (m-1) S1(m-1,k)
        for (int k = 0; k <= m; ++k) {
            BigInt v = k > 0 ? prev[static_cast<size_t>(k) - 1] : BigInt(0);
            if (k < m) v -= BigInt(m - 1) * prev[static_cast<size_t>(k)];
            row[static_cast<size_t>(k)] = v;
        }
        g_s1.push_back(std::move(row));
    }
}

void check_pair(const MultiIndex& nu, const MultiIndex& kappa) {
    if (nu.dim() != kappa.dim())
        throw std::invalid_argument("stirling: dimension mismatch");
}

BigInt big_binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    BigInt r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

BigInt big_pow(int base, int exp) {
    BigInt r = 1, b = base;
    for (int i = 0; i < exp; ++i) r *= b;
    return r; // 0^0 = 1
}

BigInt factorial(int n) {
    BigInt r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

} // namespace

BigInt stirling2_uni(int n, int k) {
    if (n < 0 || k < 0) throw std::invalid_argument("stirling2_uni: negative argument");
    if (k > n) return 0;
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    extend_second(n);
    return g_s2[static_cast<size_t>(n)][static_cast<size_t>(k)];
}

BigInt stirling1_uni(int n, int k) {
    if (n < 0 || k < 0) throw std::invalid_argument("stirling1_uni: negative argument");
    if (k > n) return 0;
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    extend_first(n);
    return g_s1[static_cast<size_t>(n)][static_cast<size_t>(k)];
}

BigInt stirling2(const MultiIndex& nu, const MultiIndex& kappa) {
    check_pair(nu, kappa);
    BigInt r = 1;
    for (int j = 0; j < nu.dim() && r != 0; ++j) r *= stirling2_uni(nu[j], kappa[j]);
    return r;
}

BigInt stirling1(const MultiIndex& nu, const MultiIndex& kappa) {
    check_pair(nu, kappa);
    BigInt r = 1;
    for (int j = 0; j < nu.dim() && r != 0; ++j) r *= stirling1_uni(nu[j], kappa[j]);
    return r;
}

BigInt stirling2_by_sum(const MultiIndex& nu, const MultiIndex& kappa) {
    check_pair(nu, kappa);
    int s = nu.dim();
    // sum over gamma <= kappa of (-1)^{|kappa|-|gamma|} C(kappa,gamma) gamma^nu
    BigInt total = 0;
    MultiIndex gamma(s);
    auto rec = [&](auto&& self, int coord, BigInt partial, int parity) -> void {
        if (coord == s) {
            total += (parity % 2 == 0) ? partial : -partial;
            return;
        }
        for (int g = 0; g <= kappa[coord]; ++g) {
            gamma[coord] = g;
            BigInt f = big_binomial(kappa[coord], g) * big_pow(g, nu[coord]);
            if (f != 0) self(self, coord + 1, partial * f, parity + (kappa[coord] - g));
        }
        gamma[coord] = 0;
    };
    rec(rec, 0, BigInt(1), 0);
    BigInt kfact = 1;
    for (int j = 0; j < s; ++j) kfact *= factorial(kappa[j]);
    if (total % kfact != 0)
        throw std::logic_error("stirling2_by_sum: inexact division"); // cannot happen
    return total / kfact;
}

std::vector<BigInt> falling_factorial_coeffs(int n) {
    if (n < 0) throw std::invalid_argument("falling_factorial_coeffs: negative order");
    // convolve (x)(x-1)...(x-n+1) exactly
    std::vector<BigInt> c{BigInt(1)};
    for (int m = 0; m < n; ++m) {
        std::vector<BigInt> nxt(c.size() + 1);
        for (size_t k = 0; k < c.size(); ++k) {
            nxt[k + 1] += c[k];
            nxt[k] -= BigInt(m) * c[k];
        }
        c = std::move(nxt);
    }
    return c;
}

BigInt stirling2_recurrence_step(const MultiIndex& nu, const MultiIndex& kappa, int j) {
    check_pair(nu, kappa);
    if (j < 0 || j >= nu.dim())
        throw std::invalid_argument("stirling2_recurrence_step: coordinate out of range");
    BigInt v = BigInt(kappa[j]) * stirling2(nu, kappa);
    if (kappa[j] > 0) {
        MultiIndex km = kappa;
        km[j] -= 1;
        v += stirling2(nu, km);
    }
    return v;
}

BigInt StirlingTable::value(const MultiIndex& nu, const MultiIndex& kappa) const {
    if (nu.dim() != dim_ || kappa.dim() != dim_)
        throw std::invalid_argument("StirlingTable: dimension mismatch");
    return kind_ == StirlingKind::second ? stirling2(nu, kappa) : stirling1(nu, kappa);
}

} // namespace expoly
