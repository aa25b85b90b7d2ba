#include "expoly/zeros.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace expoly {

namespace {

// Frobenius-normed commutator defect of a matrix family.
double commutator_defect(const std::vector<Eigen::MatrixXcd>& M) {
    double worst = 0.0;
    for (std::size_t j = 0; j < M.size(); ++j)
        for (std::size_t k = j + 1; k < M.size(); ++k)
            worst = std::max(worst, (M[j] * M[k] - M[k] * M[j]).norm());
    return worst;
}

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int i) {
        while (parent[i] != i) {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        return i;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

// eigenvalue spread of a triangular-similar block around its mean
double block_spread(const Eigen::MatrixXcd& block, cplx mean) {
    if (block.rows() <= 1) return 0.0;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(block, false);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
        worst = std::max(worst, std::abs(es.eigenvalues()(i) - mean));
    return worst;
}

// Largest |alpha| with N^alpha != 0 over the commuting nilpotent parts of one
// cluster block. The coefficient polynomial's total degree equals this socle
// degree, which in several variables usually sits well below mult - 1; the
// tight bound keeps the recovery support free of first-order trade-offs
// between a frequency shift and the polynomial terms it would generate.
int local_degree(const std::vector<Eigen::MatrixXcd>& N) {
    const int s = static_cast<int>(N.size());
    const int m = s == 0 ? 1 : static_cast<int>(N[0].rows());
    if (m <= 1) return 0;
    std::vector<Eigen::MatrixXcd> scaled;
    scaled.reserve(N.size());
    for (const Eigen::MatrixXcd& nj : N) {
        const double nrm = nj.norm();
        scaled.push_back(nrm > 1.0 ? Eigen::MatrixXcd(nj / nrm) : nj);
    }
    int deg = 0;
    for (int d = 1; d < m; ++d) {
        bool alive = false;
        for (const MultiIndex& a : degree_slice(s, d)) {
            Eigen::MatrixXcd P = Eigen::MatrixXcd::Identity(m, m);
            for (int j = 0; j < s; ++j)
                for (int t = 0; t < a[j]; ++t)
                    P *= scaled[static_cast<std::size_t>(j)];
            if (P.norm() > 1e-6) {
                alive = true;
                break;
            }
        }
        if (!alive) break;
        deg = d;
    }
    return deg;
}

} // namespace

MultTables build_tables(const IdealData& ideal, const SampleSource& src) {
    MultTables tab;
    tab.dim = ideal.dim;
    tab.size = ideal.multiplicity();
    tab.M.assign(static_cast<std::size_t>(ideal.dim),
                 Eigen::MatrixXcd::Zero(tab.size, tab.size));
    if (tab.size == 0) return tab;

    for (int j = 0; j < ideal.dim; ++j) {
        Eigen::MatrixXcd& Mj = tab.M[static_cast<std::size_t>(j)];
        for (int k = 0; k < tab.size; ++k) {
            MultiIndex gamma = ideal.normal[k];
            gamma[j] += 1;
            const int hit = ideal.normal.position(gamma);
            if (hit >= 0) {
                Mj(hit, k) = 1.0;
                continue;
            }
            const Poly nf = normal_form(ideal, src, Poly::monomial(gamma));
            for (const auto& [alpha, c] : nf.terms()) {
                const int row = ideal.normal.position(alpha);
                if (row < 0)
                    throw std::logic_error("normal form left the normal set");
                Mj(row, k) = c;
            }
        }
        tab.max_norm = std::max(tab.max_norm, Mj.norm());
    }
    tab.max_commutator = commutator_defect(tab.M);
    return tab;
}

void move_schur_diag(Eigen::MatrixXcd& T, Eigen::MatrixXcd& U, int from, int to) {
    if (from == to) return;
    if (to > from) throw std::invalid_argument("move_schur_diag only moves up");
    for (int k = from - 1; k >= to; --k) {
        // swap diagonal entries k and k+1 of the 2x2 [[a, b], [0, d]]
        const cplx a = T(k, k);
        const cplx b = T(k, k + 1);
        const cplx d = T(k + 1, k + 1);
        const double r = std::hypot(std::abs(b), std::abs(d - a));
        if (r <= 1e-300 ||
            r <= 1e-15 * (std::abs(a) + std::abs(d) + std::abs(b))) {
            continue; // equal eigenvalues, nothing to move
        }
        Eigen::Matrix2cd G;
        // first column: unit eigenvector of the block for eigenvalue d
        G(0, 0) = b / r;
        G(1, 0) = (d - a) / r;
        G(0, 1) = -std::conj(G(1, 0));
        G(1, 1) = std::conj(G(0, 0));
        T.middleRows(k, 2) = G.adjoint() * T.middleRows(k, 2);
        T.middleCols(k, 2) = T.middleCols(k, 2) * G;
        U.middleCols(k, 2) = U.middleCols(k, 2) * G;
        T(k + 1, k) = 0.0;
    }
}

double verify_zero_residual(const IdealData& ideal, const ZeroCluster& cluster) {
    double worst = 0.0;
    for (const Poly& q : ideal.kernel)
        worst = std::max(worst, std::abs(q.evaluate(cluster.xi)));
    return worst;
}

void frequencies_from_zeros(std::vector<ZeroCluster>& clusters) {
    for (ZeroCluster& cl : clusters) {
        cl.omega.clear();
        cl.omega.reserve(cl.xi.size());
        for (const cplx& z : cl.xi) {
            const double m = std::abs(z);
            if (m < 1e-12)
                throw ClusterError("computed zero has a vanishing component; "
                                   "frequencies are undefined");
            cl.omega.push_back(
                normalize_frequency(cplx(std::log(m), std::arg(z))));
        }
    }
}

std::vector<ZeroCluster> joint_eigen(const MultTables& tables, const IdealData& ideal,
                                     double tau_cluster, std::uint64_t seed) {
    const int n = tables.size;
    if (n == 0) return {};
    const int s = tables.dim;

    // gradients of the kernel polynomials, for the first-order gate
    std::vector<std::vector<Poly>> grads;
    grads.reserve(ideal.kernel.size());
    for (const Poly& q : ideal.kernel) {
        std::vector<Poly> g;
        for (int j = 0; j < s; ++j) {
            MultiIndex ej(s);
            ej[j] = 1;
            g.push_back(derivative(q, ej));
        }
        grads.push_back(std::move(g));
    }

    Rng rng(seed);
    std::string last_fail = "no attempt ran";
    for (int attempt = 0; attempt < 5; ++attempt) {
        const std::vector<double> c = rng.simplex(s);
        Eigen::MatrixXcd Mc = Eigen::MatrixXcd::Zero(n, n);
        for (int j = 0; j < s; ++j)
            Mc += c[static_cast<std::size_t>(j)] * tables.M[static_cast<std::size_t>(j)];

        Eigen::ComplexSchur<Eigen::MatrixXcd> schur(Mc, true);
        if (schur.info() != Eigen::Success) {
            last_fail = "Schur iteration did not converge";
            continue;
        }
        Eigen::MatrixXcd T = schur.matrixT();
        Eigen::MatrixXcd U = schur.matrixU();

        const double scale = std::max(Mc.norm(), 1e-300);
        const double tau_eff =
            std::min(tau_cluster * std::pow(100.0, attempt), 3e-2);

        UnionFind uf(n);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (std::abs(T(i, i) - T(j, j)) <= tau_eff * scale) uf.unite(i, j);

        // cluster labels in order of first appearance on the diagonal
        std::vector<int> lab(static_cast<std::size_t>(n), -1);
        std::vector<int> root_of_cluster;
        for (int i = 0; i < n; ++i) {
            const int r = uf.find(i);
            int id = -1;
            for (std::size_t k = 0; k < root_of_cluster.size(); ++k)
                if (root_of_cluster[k] == r) id = static_cast<int>(k);
            if (id < 0) {
                id = static_cast<int>(root_of_cluster.size());
                root_of_cluster.push_back(r);
            }
            lab[static_cast<std::size_t>(i)] = id;
        }
        const int nclusters = static_cast<int>(root_of_cluster.size());

        // gather each cluster into a contiguous diagonal block
        int t = 0;
        for (int k = 0; k < nclusters; ++k) {
            for (int p = t; p < n; ++p) {
                if (lab[static_cast<std::size_t>(p)] != k) continue;
                move_schur_diag(T, U, p, t);
                lab.erase(lab.begin() + p);
                lab.insert(lab.begin() + t, k);
                ++t;
            }
        }

        std::vector<Eigen::MatrixXcd> Tj(static_cast<std::size_t>(s));
        for (int j = 0; j < s; ++j)
            Tj[static_cast<std::size_t>(j)] =
                U.adjoint() * tables.M[static_cast<std::size_t>(j)] * U;

        std::vector<ZeroCluster> clusters;
        bool ok = true;
        int base = 0;
        for (int k = 0; k < nclusters && ok; ++k) {
            int m = 0;
            while (base + m < n && lab[static_cast<std::size_t>(base + m)] == k) ++m;
            ZeroCluster cl;
            cl.mult = m;
            cl.xi.resize(static_cast<std::size_t>(s));
            std::vector<Eigen::MatrixXcd> nil;
            nil.reserve(static_cast<std::size_t>(s));
            for (int j = 0; j < s; ++j) {
                const auto block =
                    Tj[static_cast<std::size_t>(j)].block(base, base, m, m);
                const cplx xi = block.trace() / static_cast<double>(m);
                cl.xi[static_cast<std::size_t>(j)] = xi;
                nil.push_back(block -
                              xi * Eigen::MatrixXcd::Identity(m, m));
                // merged distinct zeros leave a wide block spectrum in some
                // coordinate; a genuine nilpotent block stays tight
                if (block_spread(block, xi) > 0.03 * (1.0 + std::abs(xi))) {
                    last_fail = "block spectrum too wide (merged zeros?)";
                    ok = false;
                }
            }
            cl.deg_bound = std::min({m - 1, std::max(ideal.n_sat, 0),
                                     local_degree(nil)});
            cl.residual = verify_zero_residual(ideal, cl);
            if (ok && cl.residual > 1e-6) {
                last_fail = "kernel residual at computed zero too large";
                ok = false;
            }
            if (ok && m >= 2 && !ideal.kernel.empty()) {
                // a positive-dimensional local structure forces a common null
                // direction of the scaled gradients
                Eigen::MatrixXcd J(static_cast<Eigen::Index>(grads.size()), s);
                for (std::size_t q = 0; q < grads.size(); ++q)
                    for (int j = 0; j < s; ++j)
                        J(static_cast<Eigen::Index>(q), j) =
                            cl.xi[static_cast<std::size_t>(j)] *
                            grads[q][static_cast<std::size_t>(j)].evaluate(cl.xi);
                Eigen::JacobiSVD<Eigen::MatrixXcd> svd(J);
                const double smax = svd.singularValues()(0);
                const double smin =
                    svd.singularValues()(svd.singularValues().size() - 1);
                if (smin > 1e-4 * std::max(1.0, smax)) {
                    last_fail = "no first-order direction for a repeated zero";
                    ok = false;
                }
            }
            clusters.push_back(std::move(cl));
            base += m;
        }

        // two clusters that nearly coincide mean a split repeated zero
        for (std::size_t a = 0; a + 1 < clusters.size() && ok; ++a) {
            for (std::size_t b = a + 1; b < clusters.size() && ok; ++b) {
                double dist = 0.0, size = 0.0;
                for (int j = 0; j < s; ++j) {
                    dist = std::max(dist, std::abs(clusters[a].xi[static_cast<std::size_t>(j)] -
                                                   clusters[b].xi[static_cast<std::size_t>(j)]));
                    size = std::max({size,
                                     std::abs(clusters[a].xi[static_cast<std::size_t>(j)]),
                                     std::abs(clusters[b].xi[static_cast<std::size_t>(j)])});
                }
                if (dist <= 0.05 * (1.0 + size)) {
                    last_fail = "two clusters nearly coincide (split zero?)";
                    ok = false;
                }
            }
        }

        if (!ok) continue;

        // coordinatewise (re, im) lexicographic order with a noise band, so
        // that coordinates equal up to roundoff defer to the next tiebreaker
        const auto fuzzy_less = [](double a, double b, int& cmp) {
            const double tol = 1e-9 * (1.0 + std::max(std::abs(a), std::abs(b)));
            if (std::abs(a - b) <= tol) return;
            cmp = a < b ? -1 : 1;
        };
        std::sort(clusters.begin(), clusters.end(),
                  [&](const ZeroCluster& x, const ZeroCluster& y) {
                      for (std::size_t j = 0; j < x.xi.size(); ++j) {
                          int cmp = 0;
                          fuzzy_less(x.xi[j].real(), y.xi[j].real(), cmp);
                          if (cmp != 0) return cmp < 0;
                          fuzzy_less(x.xi[j].imag(), y.xi[j].imag(), cmp);
                          if (cmp != 0) return cmp < 0;
                      }
                      return false;
                  });
        return clusters;
    }
    throw ClusterError("joint eigenvalue clustering failed after 5 attempts: " +
                       last_fail);
}

} // namespace expoly
