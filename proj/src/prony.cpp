#include "expoly/prony.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <stdexcept>

namespace expoly {

namespace {

// Append one column to an incremental QR. t and rho must already satisfy
// c = Q*t + rho*qnew with qnew the normalized projection residual.
void qr_append(Eigen::MatrixXcd& Q, Eigen::MatrixXcd& R,
               const Eigen::VectorXcd& qnew, const Eigen::VectorXcd& t,
               double rho) {
    const Eigen::Index k = Q.cols();
    Q.conservativeResize(Eigen::NoChange, k + 1);
    Q.col(k) = qnew;
    Eigen::MatrixXcd R2 = Eigen::MatrixXcd::Zero(k + 1, k + 1);
    R2.topLeftCorner(k, k) = R;
    R2.block(0, k, k, 1) = t;
    R2(k, k) = rho;
    R = std::move(R2);
}

// Orthonormalize the kernel polynomials found within one degree batch. They
// share the coordinate space of all monomials processed so far.
void orthonormalize_batch(std::vector<Poly>& batch) {
    if (batch.empty()) return;
    std::vector<Poly> out;
    for (std::size_t i = 0; i < batch.size(); ++i) {
        Poly q = batch[i];
        for (int pass = 0; pass < 2; ++pass) {
            for (const Poly& u : out) {
                cplx ip = 0.0;
                for (const auto& [a, ca] : u.terms())
                    ip += std::conj(ca) * q.coeff(a);
                if (ip != 0.0) q = q + u * (-ip);
            }
        }
        double nrm = q.coeff_norm();
        if (nrm == 0.0) continue; // dependent within batch; drop
        out.push_back(q * cplx(1.0 / nrm, 0.0));
    }
    batch = std::move(out);
}

} // namespace

IdealData reconstruct_ideal(const SampleSource& src, int N, double tau_rank) {
    if (N < 1) throw MultBoundError("multiplicity bound must be at least 1");
    if (!(tau_rank > 0.0))
        throw std::invalid_argument("rank tolerance must be positive");

    const int s = src.dim();
    IdealData out;
    out.dim = s;
    out.mult_bound = N;
    out.tau_rank = tau_rank;
    out.rows = hyperbolic_set(s, N);

    const int na = out.rows.size();
    out.Q = Eigen::MatrixXcd::Zero(na, 0);
    out.R = Eigen::MatrixXcd::Zero(0, 0);

    // Row equilibration: probe each row at its own index and one step along
    // each axis (growth direction of the signal) and weight by the largest
    // magnitude seen. A row whose probes all vanish keeps weight one.
    out.row_weights = Eigen::VectorXd::Ones(na);
    for (int i = 0; i < na; ++i) {
        double m = src.covers(out.rows[i])
                       ? std::abs(src.sample(out.rows[i]))
                       : 0.0;
        for (int j = 0; j < s; ++j) {
            MultiIndex probe = out.rows[i];
            probe[j] += 1;
            if (src.covers(probe))
                m = std::max(m, std::abs(src.sample(probe)));
        }
        if (m > 0.0) out.row_weights(i) = 1.0 / m;
    }

    std::vector<MultiIndex> normal;
    int rank_prev = 0;
    for (int n = 0;; ++n) {
        const auto slice = degree_slice(s, n);
        std::vector<Poly> batch;
        for (const MultiIndex& beta : slice) {
            Eigen::VectorXcd c(na);
            for (int i = 0; i < na; ++i)
                c(i) = out.row_weights(i) * src.sample(out.rows[i] + beta);
            out.scale = std::max(out.scale, c.norm());

            Eigen::VectorXcd t(out.Q.cols());
            Eigen::VectorXcd r = c;
            if (out.Q.cols() > 0) {
                t = out.Q.adjoint() * c;
                r = c - out.Q * t;
                // one reorthogonalization pass keeps Q numerically orthonormal
                Eigen::VectorXcd t2 = out.Q.adjoint() * r;
                r -= out.Q * t2;
                t += t2;
            }
            const double rho = r.norm();
            const double gate = tau_rank * (out.scale > 0.0 ? out.scale : 1.0);

            if (rho > gate) {
                qr_append(out.Q, out.R, r / rho, t, rho);
                normal.push_back(beta);
                out.diagnostics.push_back({beta, n, rho, true});
            } else {
                Eigen::VectorXcd y(out.R.cols());
                if (out.R.cols() > 0)
                    y = out.R.template triangularView<Eigen::Upper>().solve(t);
                Poly q(s);
                q.set_coeff(beta, 1.0);
                for (Eigen::Index i = 0; i < y.size(); ++i)
                    if (y(i) != cplx(0.0)) q.add_term(normal[i], -y(i));
                batch.push_back(std::move(q));
                out.diagnostics.push_back({beta, n, rho, false});
            }
        }

        const int rank = static_cast<int>(normal.size());
        out.hilbert_trace.emplace_back(n, rank);
        if (rank > rank_prev) out.n_sat = n;

        orthonormalize_batch(batch);
        for (Poly& q : batch) out.kernel.push_back(std::move(q));

        if (n > 0 && rank == rank_prev) {
            out.n_stop = n;
            break;
        }
        rank_prev = rank;
        if (n > na + 1)
            throw std::logic_error("graded reconstruction failed to stagnate");
    }

    out.normal = IndexSet(s, normal);

    if (out.scale == 0.0) {
        // identically zero window: empty ideal, no kernel claims
        out.kernel.clear();
        out.diagnostics.clear();
        return out;
    }

    // Validate each kernel polynomial on a window two degrees wider than the
    // run needed, trimmed to what the source covers. A residual above the
    // gate means the multiplicity bound truncated the structure and the
    // dependency is spurious; the tautological window (the very points the
    // kernel was fitted on) cannot detect that, the widened one can.
    const double gate = std::max(1e-8, 100.0 * tau_rank);
    for (const Poly& q : out.kernel) {
        const auto pad = total_degree_set(s, out.n_stop + 2 - q.degree());
        std::vector<MultiIndex> pts;
        pts.reserve(static_cast<std::size_t>(na) * pad.size());
        for (int i = 0; i < na; ++i)
            for (int j = 0; j < pad.size(); ++j) {
                const MultiIndex a = out.rows[i] + pad[j];
                bool usable = true;
                for (const auto& [beta, cq] : q.terms())
                    if (!src.covers(a + beta)) {
                        usable = false;
                        break;
                    }
                if (usable) pts.push_back(a);
            }
        std::sort(pts.begin(), pts.end(), GrlexLess{});
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
        const double res = annihilation_residual(src, q, IndexSet(s, pts));
        out.max_kernel_residual = std::max(out.max_kernel_residual, res);
        if (res > gate)
            throw MultBoundError(
                "kernel polynomial fails annihilation on the widened window "
                "(residual " + std::to_string(res) +
                "); multiplicity bound too small");
    }
    return out;
}

int hilbert_function(const IdealData& ideal, int n) {
    for (const auto& [deg, rank] : ideal.hilbert_trace)
        if (deg == n) return rank;
    throw std::out_of_range("degree outside the recorded trace");
}

Poly normal_form(const IdealData& ideal, const SampleSource& src,
                 const Poly& p) {
    if (p.dim() != ideal.dim)
        throw std::invalid_argument("dimension mismatch in normal form");
    if (p.basis() != PolyBasis::monomial)
        throw std::invalid_argument("normal form expects the monomial basis");
    if (p.degree() > ideal.n_stop + 1)
        throw CoverageError("insufficient sample coverage for normal form "
                            "past the processed degrees");
    Poly nf(ideal.dim);
    if (ideal.Q.cols() == 0) return nf;

    const int na = ideal.rows.size();
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(na);
    for (const auto& [beta, cb] : p.terms())
        for (int i = 0; i < na; ++i)
            c(i) += cb * ideal.row_weights(i) * src.sample(ideal.rows[i] + beta);

    Eigen::VectorXcd t = ideal.Q.adjoint() * c;
    Eigen::VectorXcd y = ideal.R.template triangularView<Eigen::Upper>().solve(t);
    for (Eigen::Index i = 0; i < y.size(); ++i)
        if (y(i) != cplx(0.0)) nf.add_term(ideal.normal[static_cast<int>(i)], y(i));
    return nf;
}

} // namespace expoly
