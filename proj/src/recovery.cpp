#include "expoly/recovery.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

namespace expoly {

CoeffSystem build_system_on(const std::vector<ZeroCluster>& clusters,
                            const SampleSource& src, const IndexSet& B) {
    if (clusters.empty())
        throw std::invalid_argument("coefficient system needs clusters");
    CoeffSystem sys;
    sys.dim = src.dim();
    sys.clusters = clusters;
    sys.B = B;

    int ncols = 0;
    for (const ZeroCluster& cl : clusters) {
        sys.col_sets.push_back(total_degree_set(sys.dim, cl.deg_bound));
        ncols += sys.col_sets.back().size();
    }

    const int nrows = B.size();
    sys.G.resize(nrows, ncols);
    sys.rhs.resize(nrows);
    for (int i = 0; i < nrows; ++i) {
        const MultiIndex& beta = B[i];
        sys.rhs(i) = src.sample(beta);
        int col = 0;
        for (std::size_t w = 0; w < clusters.size(); ++w) {
            cplx xib = 1.0;
            for (int j = 0; j < sys.dim; ++j)
                xib *= ipow(clusters[w].xi[static_cast<std::size_t>(j)], beta[j]);
            const IndexSet& Aw = sys.col_sets[w];
            for (int a = 0; a < Aw.size(); ++a, ++col)
                sys.G(i, col) = grid_power(beta, Aw[a]) * xib;
        }
    }
    return sys;
}

CoeffSystem build_system(const std::vector<ZeroCluster>& clusters,
                         const SampleSource& src) {
    // Gamma_n with n = sum (deg bound + 1) - 1: the stacked Hermite
    // functionals at distinct zeros are independent on that degree block
    // (separating-factor argument), and the entries stay within a bounded
    // power of |xi|, unlike rows far out on a coordinate axis.
    int n = -1;
    for (const ZeroCluster& cl : clusters) n += cl.deg_bound + 1;
    return build_system_on(clusters, src,
                           total_degree_set(src.dim(), std::max(n, 0)));
}

ExpPolyModel solve_coefficients(const CoeffSystem& sys, double tau_rank,
                                double* lsq_residual) {
    // column equilibration so the rank test compares directions, not scales
    Eigen::VectorXd colscale(sys.G.cols());
    for (int c = 0; c < sys.G.cols(); ++c) {
        const double nrm = sys.G.col(c).norm();
        if (nrm == 0.0)
            throw SolveError("coefficient system has an identically zero "
                             "column; the row set is too small");
        colscale(c) = 1.0 / nrm;
    }
    const Eigen::MatrixXcd Gs = sys.G * colscale.asDiagonal();
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(Gs);
    cod.setThreshold(tau_rank);
    if (cod.rank() < sys.G.cols())
        throw SolveError("coefficient system is rank deficient; the degree "
                         "bounds are inconsistent with the data");
    const Eigen::VectorXcd x = colscale.asDiagonal() * cod.solve(sys.rhs);
    const double rhs_norm = std::max(sys.rhs.norm(), 1e-300);
    const double rel = (sys.G * x - sys.rhs).norm() / rhs_norm;
    if (lsq_residual) *lsq_residual = rel;

    const double prune = 1e-9 * x.norm();
    std::vector<std::pair<std::vector<cplx>, Poly>> comps;
    int col = 0;
    for (std::size_t w = 0; w < sys.clusters.size(); ++w) {
        const IndexSet& Aw = sys.col_sets[w];
        Poly fw(sys.dim);
        for (int a = 0; a < Aw.size(); ++a, ++col) fw.add_term(Aw[a], x(col));
        fw = fw.pruned(prune);
        if (!fw.is_zero()) comps.emplace_back(sys.clusters[w].omega, fw);
    }
    return ExpPolyModel(sys.dim, std::move(comps));
}

int refine_model(ExpPolyModel& model, const SampleSource& src,
                 const std::vector<MultiIndex>& pts, int max_steps) {
    if (model.component_count() == 0 || pts.empty()) return 0;
    const int s = model.dim();
    const auto& comps = model.components();

    // fixed term supports; parameters per component: s frequencies + coeffs
    std::vector<std::vector<MultiIndex>> support(comps.size());
    int npar = 0;
    for (std::size_t w = 0; w < comps.size(); ++w) {
        for (const auto& [a, ca] : comps[w].coeff.terms())
            support[w].push_back(a);
        npar += s + static_cast<int>(support[w].size());
    }
    const int m = static_cast<int>(pts.size());
    if (m < npar) return 0;

    Eigen::VectorXcd data(m);
    for (int i = 0; i < m; ++i) data(i) = src.sample(pts[i]);

    const auto mismatch = [&](const ExpPolyModel& fit) {
        double acc = 0.0;
        for (int i = 0; i < m; ++i) {
            const double d = std::abs(fit.eval_grid(pts[i]) - data(i));
            acc += d * d;
        }
        return std::sqrt(acc);
    };

    int accepted = 0;
    double best = mismatch(model);
    for (int it = 0; it < max_steps; ++it) {
        Eigen::MatrixXcd J(m, npar);
        Eigen::VectorXcd r(m);
        for (int i = 0; i < m; ++i) {
            const MultiIndex& a = pts[i];
            cplx val = 0.0;
            int col = 0;
            for (std::size_t w = 0; w < comps.size(); ++w) {
                const Component& cw = model.components()[w];
                cplx e = 1.0;
                for (int j = 0; j < s; ++j)
                    e *= ipow(cw.xi[static_cast<std::size_t>(j)], a[j]);
                const cplx fw = cw.coeff.evaluate_grid(a);
                val += fw * e;
                // d/domega_j of fw(a) e^{omega a} is a_j fw(a) e^{omega a}
                for (int j = 0; j < s; ++j)
                    J(i, col++) = static_cast<double>(a[j]) * fw * e;
                for (const MultiIndex& al : support[w])
                    J(i, col++) = grid_power(a, al) * e;
            }
            r(i) = val - data(i);
        }

        Eigen::VectorXd cs(npar);
        for (int c = 0; c < npar; ++c) {
            const double nrm = J.col(c).norm();
            cs(c) = nrm > 0.0 ? 1.0 / nrm : 1.0;
        }
        // truncated SVD: directions the window barely sees would turn the
        // residual noise into large parameter drift, so they stay frozen
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(
            J * cs.asDiagonal(), Eigen::ComputeThinU | Eigen::ComputeThinV);
        svd.setThreshold(1e-6);
        const Eigen::VectorXcd step = cs.asDiagonal() * svd.solve(r);

        bool moved = false;
        for (double h = 1.0; h >= 0.125 && !moved; h *= 0.5) {
            std::vector<std::pair<std::vector<cplx>, Poly>> cand_comps;
            int col = 0;
            for (std::size_t w = 0; w < comps.size(); ++w) {
                std::vector<cplx> om = model.components()[w].omega;
                for (int j = 0; j < s; ++j) om[static_cast<std::size_t>(j)] -= h * step(col++);
                Poly f(s);
                const Poly& cur = model.components()[w].coeff;
                for (const MultiIndex& al : support[w])
                    f.add_term(al, cur.coeff(al) - h * step(col++));
                cand_comps.emplace_back(std::move(om), std::move(f));
            }
            try {
                ExpPolyModel cand(s, std::move(cand_comps));
                const double res = mismatch(cand);
                if (res < best) {
                    model = std::move(cand);
                    best = res;
                    moved = true;
                    ++accepted;
                }
            } catch (const ParseError&) {
                // degenerate candidate (zero poly or merged frequencies)
            }
        }
        if (!moved) break;
        if (best <= 1e-15 * data.norm()) break;
    }
    return accepted;
}

namespace {

// largest-magnitude sample and worst model mismatch over a point set
double resynthesis_over(const SampleSource& src, const ExpPolyModel& fit,
                        const std::vector<MultiIndex>& pts) {
    double fmax = 0.0, err = 0.0;
    for (const MultiIndex& a : pts) {
        const cplx fv = src.sample(a);
        fmax = std::max(fmax, std::abs(fv));
        err = std::max(err, std::abs(fit.eval_grid(a) - fv));
    }
    if (fmax == 0.0) return err == 0.0 ? 0.0 : err;
    return err / fmax;
}

} // namespace

ExpPolyModel end_to_end(const SampleSource& src, int N, const Tolerances& tol,
                        Report* report, IdealData* ideal_out) {
    IdealData ideal = reconstruct_ideal(src, N, tol.tau_rank);
    if (ideal_out) *ideal_out = ideal;
    if (report) {
        *report = Report{};
        report->hilbert_trace = ideal.hilbert_trace;
        report->multiplicity = ideal.multiplicity();
        report->max_kernel_residual = ideal.max_kernel_residual;
        double gap = 0.0;
        bool first = true;
        for (const ColumnDiag& d : ideal.diagnostics)
            if (d.accepted) {
                const double rel = d.residual / std::max(ideal.scale, 1e-300);
                gap = first ? rel : std::min(gap, rel);
                first = false;
            }
        report->min_normal_gap = first ? 0.0 : gap;
    }

    if (ideal.multiplicity() == 0) return ExpPolyModel(src.dim());

    const MultTables tables = build_tables(ideal, src);
    if (report) report->max_commutator = tables.max_commutator;

    std::vector<ZeroCluster> clusters =
        joint_eigen(tables, ideal, tol.tau_cluster, tol.seed);
    frequencies_from_zeros(clusters);

    auto attempt = [&](const std::vector<ZeroCluster>& cls, double* rel) {
        const CoeffSystem sys = build_system(cls, src);
        return std::pair<ExpPolyModel, CoeffSystem>(
            solve_coefficients(sys, tol.tau_rank, rel), sys);
    };

    // Degree-bound ladder. The socle-degree bounds from the cluster blocks
    // are tightest and keep the recovery support free of trade-offs between
    // a frequency shift and the polynomial terms it would generate; if the
    // solve disagrees with the data, fall back to the saturation cap and
    // finally to the worst case deg <= mult - 1.
    std::vector<std::vector<int>> ladder;
    {
        std::vector<int> tight, capped, full;
        for (const ZeroCluster& cl : clusters) {
            tight.push_back(cl.deg_bound);
            capped.push_back(std::min(cl.mult - 1, std::max(ideal.n_sat, 0)));
            full.push_back(cl.mult - 1);
        }
        ladder.push_back(tight);
        if (capped != tight) ladder.push_back(capped);
        if (full != ladder.back()) ladder.push_back(full);
    }

    double rel = 0.0;
    ExpPolyModel fit;
    CoeffSystem sys;
    for (std::size_t step = 0; step < ladder.size(); ++step) {
        for (std::size_t i = 0; i < clusters.size(); ++i)
            clusters[i].deg_bound = ladder[step][i];
        const bool last = step + 1 == ladder.size();
        try {
            std::tie(fit, sys) = attempt(clusters, &rel);
            if (rel <= 1e-9 || last) break;
        } catch (const SolveError&) {
            if (last) throw;
        }
    }

    // Every point below was already sampled by the reconstruction or the
    // coefficient solve, so coverage is guaranteed.
    std::vector<MultiIndex> pts;
    const auto pad = total_degree_set(src.dim(), ideal.n_stop);
    for (int i = 0; i < ideal.rows.size(); ++i)
        for (int j = 0; j < pad.size(); ++j)
            pts.push_back(ideal.rows[i] + pad[j]);
    for (int i = 0; i < sys.B.size(); ++i) pts.push_back(sys.B[i]);
    std::sort(pts.begin(), pts.end(), GrlexLess{});
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    const int polish = refine_model(fit, src, pts);

    if (report) {
        report->lsq_residual = rel;
        report->refine_steps = polish;
        for (const ZeroCluster& cl : clusters)
            report->clusters.push_back(
                {cl.xi, cl.omega, cl.mult, cl.deg_bound, cl.residual});
        report->resynthesis_residual = resynthesis_over(src, fit, pts);
    }
    return fit;
}

} // namespace expoly
