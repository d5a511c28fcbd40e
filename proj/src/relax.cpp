#include "grothcover/relax.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace grothcover {

namespace {

Vec svec_of_sparse(const SparseSym& a) { return svec(a.dense()); }

Vec svec_basis_diag(int m, int i) {
    Mat e = Mat::Zero(m, m);
    e(i, i) = 1.0;
    return svec(e);
}

std::string diag_message(const char* what, const SplitResult& res) {
    std::ostringstream os;
    os << what << " (pinf=" << res.pinf << ", dinf=" << res.dinf
       << ", gap=" << res.gap << ", iters=" << res.iters << ")";
    return os.str();
}

void require_converged(const SplitResult& res, const char* what) {
    if (!res.converged &&
        (res.pinf > 1e-6 || res.dinf > 1e-6 || res.gap > 1e-6)) {
        throw std::runtime_error(diag_message(what, res));
    }
}

SplitConfig split_config(const SolverConfig& cfg) {
    SplitConfig sc;
    sc.tol = std::min(1e-10, cfg.tol);
    sc.max_iter = cfg.max_iter;
    return sc;
}

using TriKey = std::tuple<int, int, int, int>;
TriKey tri_key(const TriangleTerm& t) { return {t.i, t.j, t.si, t.sj}; }

/// Off-diagonal triangle candidates violated by Y and not yet active.
/// Diagonal (i = j) family members are implied by PSD plus the equalized
/// diagonal, so the solver never needs them as explicit rows.
std::vector<TriangleTerm> new_violations(const Mat& y,
                                         const std::set<TriKey>& active,
                                         double tol, int cap) {
    std::vector<TriangleTerm> out;
    for (const auto& t : violated_triangles(y, tol, 4 * static_cast<int>(y.rows() * y.rows()))) {
        if (t.i == t.j || active.count(tri_key(t)) > 0) {
            continue;
        }
        out.push_back(t);
        if (static_cast<int>(out.size()) >= cap) {
            break;
        }
    }
    return out;
}

/// ν(W): max ⟨W,Y⟩ s.t. diag(Y) = 1, Y PSD, ⟨Δ_k,Y⟩ ≥ 0 for the active set.
ConicProblem assemble_nu(int m, const Mat& w,
                         const std::vector<TriangleTerm>& act) {
    const int sm = svec_dim(m);
    const int k = static_cast<int>(act.size());
    ConicProblem p;
    p.psd_dims = {m};
    p.nonneg_dim = k;
    const int big_n = sm + k;
    p.a = Mat::Zero(m + k, big_n);
    p.b = Vec::Zero(m + k);
    p.c = Vec::Zero(big_n);
    p.c.head(sm) = svec(Mat(-w));
    for (int i = 0; i < m; ++i) {
        p.a.block(i, 0, 1, sm) = svec_basis_diag(m, i).transpose();
        p.b(i) = 1.0;
    }
    for (int t = 0; t < k; ++t) {
        p.a.block(m + t, 0, 1, sm) =
            svec_of_sparse(triangle_sparse(act[static_cast<std::size_t>(t)], m))
                .transpose();
        p.a(m + t, sm + t) = -1.0;
    }
    return p;
}

/// ν°_ε(z), polyhedral cover cone. Variables (P PSD, [μ, t, s] ≥ 0) with
/// Y = P + εμI:
///   diag(P) − (1−ε)μ·1 = 0,   ⟨A_f,P⟩ + εμ·tr(A_f) − t_f = z_f,
///   ⟨Δ_k,P⟩ + εμ·tr(Δ_k) − s_k = 0,   min μ.
ConicProblem assemble_polar_poly(const ConeSpec& spec, const Vec& z, double eps,
                                 const std::vector<TriangleTerm>& act) {
    const int m = spec.dim();
    const int sm = svec_dim(m);
    const int d = spec.d();
    const int k = static_cast<int>(act.size());
    ConicProblem p;
    p.psd_dims = {m};
    p.nonneg_dim = 1 + d + k;
    const int big_n = sm + p.nonneg_dim;
    const int rows = m + d + k;
    p.a = Mat::Zero(rows, big_n);
    p.b = Vec::Zero(rows);
    p.c = Vec::Zero(big_n);
    p.c(sm) = 1.0;  // objective: μ
    for (int i = 0; i < m; ++i) {
        p.a.block(i, 0, 1, sm) = svec_basis_diag(m, i).transpose();
        p.a(i, sm) = -(1.0 - eps);
    }
    const auto& as = spec.a_matrices();
    for (int f = 0; f < d; ++f) {
        p.a.block(m + f, 0, 1, sm) =
            svec_of_sparse(as[static_cast<std::size_t>(f)]).transpose();
        p.a(m + f, sm) = eps * as[static_cast<std::size_t>(f)].trace();
        p.a(m + f, sm + 1 + f) = -1.0;
        p.b(m + f) = z(f);
    }
    for (int t = 0; t < k; ++t) {
        const SparseSym dk =
            triangle_sparse(act[static_cast<std::size_t>(t)], m);
        p.a.block(m + d + t, 0, 1, sm) = svec_of_sparse(dk).transpose();
        p.a(m + d + t, sm) = eps * dk.trace();
        p.a(m + d + t, sm + 1 + d + t) = -1.0;
    }
    return p;
}

/// ν°_ε(Z), FULL_PSD cover cone. Variables (P PSD, Q PSD, [μ, s] ≥ 0) with
/// Y = P + εμI = Q + Z:
///   diag(P) − (1−ε)μ·1 = 0,   svec(P) − svec(Q) + εμ·svec(I) = svec(Z),
///   ⟨Δ_k,P⟩ + εμ·tr(Δ_k) − s_k = 0,   min μ.
ConicProblem assemble_polar_psd(const ConeSpec& spec, const Mat& z, double eps,
                                const std::vector<TriangleTerm>& act) {
    const int m = spec.dim();
    const int sm = svec_dim(m);
    const int k = static_cast<int>(act.size());
    ConicProblem p;
    p.psd_dims = {m, m};
    p.nonneg_dim = 1 + k;
    const int big_n = 2 * sm + p.nonneg_dim;
    const int rows = m + sm + k;
    p.a = Mat::Zero(rows, big_n);
    p.b = Vec::Zero(rows);
    p.c = Vec::Zero(big_n);
    p.c(2 * sm) = 1.0;  // μ
    for (int i = 0; i < m; ++i) {
        p.a.block(i, 0, 1, sm) = svec_basis_diag(m, i).transpose();
        p.a(i, 2 * sm) = -(1.0 - eps);
    }
    const Vec svec_i = svec(Mat(Mat::Identity(m, m)));
    for (int a = 0; a < sm; ++a) {
        p.a(m + a, a) = 1.0;
        p.a(m + a, sm + a) = -1.0;
        p.a(m + a, 2 * sm) = eps * svec_i(a);
    }
    p.b.segment(m, sm) = svec(z);
    for (int t = 0; t < k; ++t) {
        const SparseSym dk =
            triangle_sparse(act[static_cast<std::size_t>(t)], m);
        p.a.block(m + sm + t, 0, 1, sm) = svec_of_sparse(dk).transpose();
        p.a(m + sm + t, 2 * sm) = eps * dk.trace();
        p.a(m + sm + t, 2 * sm + 1 + t) = -1.0;
    }
    return p;
}

Mat sym(const Mat& m) { return 0.5 * (m + m.transpose()); }

double min_eig(const Mat& m) {
    Eigen::SelfAdjointEigenSolver<Mat> es(sym(m), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

/// In-place δI repair of the covering witness (diag equalization + shift).
/// Returns the final μ. Targets are optional: a polyhedral demand z and/or a
/// PSD matrix target.
double repair_dual_inplace(const ConeSpec& spec, Mat& y, double mu, double eps,
                           const Vec* z, const Mat* z_mat) {
    y = sym(y);
    for (int i = 0; i < y.rows(); ++i) {
        mu = std::max(mu, y(i, i));
    }
    for (int pass = 0; pass < 4; ++pass) {
        y.diagonal().setConstant(mu);
        double delta = 0.0;
        const Mat dist_part = y - eps * mu * Mat::Identity(y.rows(), y.cols());
        delta = std::max(delta, -min_eig(dist_part) / (1.0 - eps));
        if (spec.dist_kind() == DistKind::PSD_TRIANGLE && y.rows() >= 2) {
            // tr(Δ) ≥ 1 for every family member that can be violated here
            // (the trace-0 members vanish once the diagonal is equal).
            delta = std::max(delta, -worst_triangle(dist_part) / (1.0 - eps));
        }
        if (z != nullptr) {
            const auto& as = spec.a_matrices();
            for (int f = 0; f < spec.d(); ++f) {
                const double short_by =
                    (*z)(f) - as[static_cast<std::size_t>(f)].inner(y);
                delta = std::max(
                    delta, short_by / as[static_cast<std::size_t>(f)].trace());
            }
        }
        if (z_mat != nullptr) {
            delta = std::max(delta, -min_eig(y - *z_mat));
        }
        if (delta <= 0.0) {
            break;
        }
        delta *= 1.0 + 1e-12;
        y += delta * Mat::Identity(y.rows(), y.cols());
        mu += delta;
    }
    return mu;
}

/// Slack matrix D = Diag(x) − W − Σ λ_k Δ_k for the constructive Dist* test.
Mat primal_slack(const Vec& x, const Mat& w,
                 const std::vector<TriangleTerm>& terms,
                 const std::vector<double>& lambda) {
    Mat d = Mat(x.asDiagonal()) - w;
    for (std::size_t k = 0; k < terms.size(); ++k) {
        triangle_sparse(terms[k], static_cast<int>(w.rows()))
            .add_to(d, -lambda[k]);
    }
    return d;
}

// Headroom added to the primal shift so that the independent verifier's
// first-order Dist*-membership search, which may stop ~1e-5 short of the
// true residual, still lands above its tolerance.
constexpr double kPrimalMargin = 1e-4;

}  // namespace

void SolverConfig::validate() const {
    if (!(eps > 0.0 && eps < 1.0)) {
        throw std::invalid_argument("SolverConfig: eps must be in (0,1)");
    }
    if (!(sigma_budget > 0.0 && sigma_budget < 1.0)) {
        throw std::invalid_argument("SolverConfig: sigma_budget must be in (0,1)");
    }
    if (!(tol > 0.0)) {
        throw std::invalid_argument("SolverConfig: tol must be positive");
    }
}

NuSolution solve_nu(const ConeSpec& spec, const SymMatrix& w,
                    const SolverConfig& cfg) {
    cfg.validate();
    const int m = spec.dim();
    if (w.dim() != m) {
        throw std::invalid_argument("solve_nu: dimension mismatch");
    }
    const double scale = std::max(w.mat().norm(), 1e-12);
    const Mat wn = w.mat() / scale;
    const int sm = svec_dim(m);

    std::vector<TriangleTerm> active;
    std::set<TriKey> keys;
    SplitResult res;
    bool warm = false;
    int total_iters = 0;
    Mat y;
    for (int round = 0; round < 24; ++round) {
        const ConicProblem prob = assemble_nu(m, wn, active);
        res = solve_conic(prob, split_config(cfg), warm ? &res : nullptr);
        total_iters += res.iters;
        require_converged(res, "solve_nu: splitting solver did not converge");
        y = unsvec(res.x.head(sm), m);
        if (spec.dist_kind() != DistKind::PSD_TRIANGLE) {
            break;
        }
        const auto viol = new_violations(y, keys, 1e-9, 128);
        if (viol.empty()) {
            break;
        }
        const int old_k = static_cast<int>(active.size());
        for (const auto& t : viol) {
            active.push_back(t);
            keys.insert(tri_key(t));
        }
        // Extend the iterates for the appended slack variables and rows.
        const int add = static_cast<int>(active.size()) - old_k;
        Vec x2 = Vec::Zero(res.x.size() + add);
        x2.head(res.x.size()) = res.x;
        res.x = x2;
        Vec s2 = Vec::Zero(res.s.size() + add);
        s2.head(res.s.size()) = res.s;
        res.s = s2;
        Vec y2 = Vec::Zero(res.y.size() + add);
        y2.head(res.y.size()) = res.y;
        res.y = y2;
        warm = true;
    }

    NuSolution out;
    out.y = SymMatrix(sym(y), 1e-6);
    out.value = (w.mat().cwiseProduct(out.y.mat())).sum();
    out.x = -scale * res.y.head(m);
    out.tri_terms = active;
    out.tri_lambda.resize(active.size());
    for (std::size_t k = 0; k < active.size(); ++k) {
        out.tri_lambda[k] =
            std::max(0.0, scale * res.y(m + static_cast<int>(k)));
    }
    out.iterations = total_iters;
    return out;
}

RelaxSolution solve_nu_eps(const ConeSpec& spec, const SymMatrix& w_mat,
                           const SolverConfig& cfg) {
    cfg.validate();
    if (spec.cov_kind() == CovKind::FULL_PSD) {
        if (min_eig(w_mat.mat()) < -1e-8 * std::max(1.0, w_mat.mat().norm())) {
            throw std::invalid_argument("solve_nu_eps: W not in the cover cone");
        }
    }
    if (w_mat.mat().norm() <= 0.0) {
        throw std::invalid_argument("solve_nu_eps: W = 0");
    }
    const int m = spec.dim();
    const double eps = cfg.eps;
    NuSolution ns = solve_nu(spec, w_mat, cfg);

    // Make the maximizer exactly feasible: unit diagonal, then a small blend
    // toward I clearing PSD/triangle residuals.
    Mat ystar = ns.y.mat();
    ystar.diagonal().setConstant(1.0);
    for (int pass = 0; pass < 4; ++pass) {
        double need = -min_eig(ystar);
        if (spec.dist_kind() == DistKind::PSD_TRIANGLE && m >= 2) {
            need = std::max(need, -worst_triangle(ystar));
        }
        if (need <= 0.0) {
            break;
        }
        const double eta = std::min(1.0, need * (1.0 + 1e-9) / (1.0 + need));
        ystar = (1.0 - eta) * ystar + eta * Mat::Identity(m, m);
    }
    const Mat y_tilde = (1.0 - eps) * ystar + eps * Mat::Identity(m, m);

    RelaxSolution sol;
    sol.dual.mu = 1.0;
    sol.dual.y = SymMatrix(y_tilde, 1e-9);
    sol.z_matrix = sol.dual.y;
    sol.w_matrix = w_mat;

    // Primal witness: shift x until Diag(x) − W − Σ λΔ is PSD with margin,
    // then take the exact dual-feasible ρ̄.
    Vec x = ns.x;
    const Mat slack0 = primal_slack(x, w_mat.mat(), ns.tri_terms, ns.tri_lambda);
    const double shift = std::max(0.0, -min_eig(slack0)) + kPrimalMargin;
    x.array() += shift;
    sol.primal.x = x;
    sol.primal.tri_terms = ns.tri_terms;
    sol.primal.tri_lambda = ns.tri_lambda;
    sol.primal.rho =
        (1.0 - eps) * x.sum() + eps * w_mat.mat().trace();

    sol.pairing = (w_mat.mat().cwiseProduct(y_tilde)).sum();
    sol.gap_sigma = 1.0 - sol.pairing / (sol.primal.rho * sol.dual.mu);
    if (sol.gap_sigma > cfg.sigma_budget) {
        throw std::runtime_error(
            "solve_nu_eps: duality gap exceeds sigma budget");
    }
    if (sol.pairing > sol.primal.rho * sol.dual.mu * (1.0 + 1e-7)) {
        throw std::runtime_error("solve_nu_eps: witness upper bound violated");
    }
    if (spec.cov_kind() == CovKind::POLYHEDRAL) {
        sol.z_vector = apply_adjoint(spec, y_tilde);
    }
    sol.iterations = ns.iterations;
    return sol;
}

RelaxSolution solve_nu_eps(const ConeSpec& spec, const Vec& w,
                           const SolverConfig& cfg) {
    if (spec.cov_kind() != CovKind::POLYHEDRAL) {
        throw std::invalid_argument(
            "solve_nu_eps: vector weights need a polyhedral cover cone");
    }
    if (w.size() != spec.d()) {
        throw std::invalid_argument("solve_nu_eps: weight dimension mismatch");
    }
    if (w.minCoeff() < -1e-12) {
        throw std::invalid_argument("solve_nu_eps: negative weights");
    }
    if (w.maxCoeff() <= 0.0) {
        throw std::invalid_argument("solve_nu_eps: w = 0");
    }
    RelaxSolution sol = solve_nu_eps(spec, apply_map(spec, w.cwiseMax(0.0)), cfg);
    sol.w_vector = w.cwiseMax(0.0);
    return sol;
}

RelaxSolution solve_nu_polar_eps(const ConeSpec& spec, const Vec& z,
                                 const SolverConfig& cfg) {
    cfg.validate();
    if (spec.cov_kind() != CovKind::POLYHEDRAL) {
        throw std::invalid_argument(
            "solve_nu_polar_eps: vector demand needs a polyhedral cover cone");
    }
    if (z.size() != spec.d()) {
        throw std::invalid_argument("solve_nu_polar_eps: demand size mismatch");
    }
    if (z.minCoeff() < -1e-12) {
        throw std::invalid_argument("solve_nu_polar_eps: negative demand");
    }
    if (z.maxCoeff() <= 0.0) {
        throw std::invalid_argument("solve_nu_polar_eps: degenerate demand z = 0");
    }

    const int m = spec.dim();
    const int d = spec.d();
    const int sm = svec_dim(m);
    const double eps = cfg.eps;
    const double scale = z.maxCoeff();
    const Vec zn = z.cwiseMax(0.0) / scale;

    std::vector<TriangleTerm> active;
    std::set<TriKey> keys;
    SplitResult res;
    bool warm = false;
    int total_iters = 0;
    Mat p_blk;
    double mu_hat = 0.0;
    for (int round = 0; round < 24; ++round) {
        const ConicProblem prob = assemble_polar_poly(spec, zn, eps, active);
        res = solve_conic(prob, split_config(cfg), warm ? &res : nullptr);
        total_iters += res.iters;
        require_converged(res,
                          "solve_nu_polar_eps: splitting solver did not converge");
        p_blk = unsvec(res.x.head(sm), m);
        mu_hat = res.x(sm);
        if (spec.dist_kind() != DistKind::PSD_TRIANGLE) {
            break;
        }
        const auto viol = new_violations(p_blk, keys, 1e-9, 128);
        if (viol.empty()) {
            break;
        }
        const int old_k = static_cast<int>(active.size());
        for (const auto& t : viol) {
            active.push_back(t);
            keys.insert(tri_key(t));
        }
        const int add = static_cast<int>(active.size()) - old_k;
        Vec x2 = Vec::Zero(res.x.size() + add);
        x2.head(res.x.size()) = res.x;
        res.x = x2;
        Vec s2 = Vec::Zero(res.s.size() + add);
        s2.head(res.s.size()) = res.s;
        res.s = s2;
        Vec y2 = Vec::Zero(res.y.size() + add);
        y2.head(res.y.size()) = res.y;
        res.y = y2;
        warm = true;
    }

    // Covering witness (scaled back to the caller's demand).
    Mat y_raw = scale * (p_blk + eps * mu_hat * Mat::Identity(m, m));
    double mu = repair_dual_inplace(spec, y_raw, scale * mu_hat, eps,
                                    &z, nullptr);

    // Paired maximization weights and primal witness from the duals.
    Vec x = -res.y.head(m);
    Vec w = res.y.segment(m, d).cwiseMax(0.0);
    std::vector<double> lambda(active.size());
    for (std::size_t k = 0; k < active.size(); ++k) {
        lambda[k] = std::max(0.0, res.y(m + d + static_cast<int>(k)));
    }
    Mat w_mat = apply_map(spec, w).mat();
    const Mat slack0 = primal_slack(x, w_mat, active, lambda);
    const double shift = std::max(0.0, -min_eig(slack0)) + kPrimalMargin;
    x.array() += shift;
    const double lhs = (1.0 - eps) * x.sum() + eps * w_mat.trace();
    if (lhs > 1.0) {
        x /= lhs;
        w /= lhs;
        for (auto& lk : lambda) {
            lk /= lhs;
        }
        w_mat /= lhs;
    }

    RelaxSolution sol;
    sol.dual.mu = mu;
    sol.dual.y = SymMatrix(y_raw, 1e-9);
    sol.z_matrix = sol.dual.y;
    sol.z_vector = apply_adjoint(spec, y_raw);
    sol.w_vector = w;
    sol.w_matrix = SymMatrix(w_mat, 1e-9);
    sol.primal.rho = 1.0;
    sol.primal.x = x;
    sol.primal.tri_terms = active;
    sol.primal.tri_lambda = lambda;
    sol.pairing = (w_mat.cwiseProduct(y_raw)).sum();
    sol.gap_sigma = 1.0 - sol.pairing / (sol.primal.rho * sol.dual.mu);
    sol.iterations = total_iters;
    if (sol.gap_sigma > cfg.sigma_budget) {
        throw std::runtime_error(
            "solve_nu_polar_eps: duality gap exceeds sigma budget");
    }
    if (sol.pairing > sol.primal.rho * sol.dual.mu * (1.0 + 1e-7)) {
        throw std::runtime_error(
            "solve_nu_polar_eps: witness upper bound violated");
    }
    return sol;
}

RelaxSolution solve_nu_polar_eps(const ConeSpec& spec, const SymMatrix& z_mat,
                                 const SolverConfig& cfg) {
    cfg.validate();
    if (spec.cov_kind() != CovKind::FULL_PSD) {
        throw std::invalid_argument(
            "solve_nu_polar_eps: matrix target needs the FULL_PSD cover cone");
    }
    const int m = spec.dim();
    if (z_mat.dim() != m) {
        throw std::invalid_argument("solve_nu_polar_eps: dimension mismatch");
    }
    if (z_mat.mat().norm() <= 0.0) {
        throw std::invalid_argument("solve_nu_polar_eps: degenerate target Z = 0");
    }
    if (min_eig(z_mat.mat()) < -1e-8 * std::max(1.0, z_mat.mat().norm())) {
        throw std::invalid_argument("solve_nu_polar_eps: Z not PSD");
    }
    const int sm = svec_dim(m);
    const double eps = cfg.eps;
    const double scale = std::max(z_mat.mat().norm(), 1e-12);
    const Mat zn = psd_project(Mat(z_mat.mat() / scale));

    std::vector<TriangleTerm> active;
    std::set<TriKey> keys;
    SplitResult res;
    bool warm = false;
    int total_iters = 0;
    Mat p_blk;
    double mu_hat = 0.0;
    for (int round = 0; round < 24; ++round) {
        const ConicProblem prob = assemble_polar_psd(spec, zn, eps, active);
        res = solve_conic(prob, split_config(cfg), warm ? &res : nullptr);
        total_iters += res.iters;
        require_converged(res,
                          "solve_nu_polar_eps: splitting solver did not converge");
        p_blk = unsvec(res.x.head(sm), m);
        mu_hat = res.x(2 * sm);
        if (spec.dist_kind() != DistKind::PSD_TRIANGLE) {
            break;
        }
        const auto viol = new_violations(p_blk, keys, 1e-9, 128);
        if (viol.empty()) {
            break;
        }
        const int old_k = static_cast<int>(active.size());
        for (const auto& t : viol) {
            active.push_back(t);
            keys.insert(tri_key(t));
        }
        const int add = static_cast<int>(active.size()) - old_k;
        Vec x2 = Vec::Zero(res.x.size() + add);
        x2.head(res.x.size()) = res.x;
        res.x = x2;
        Vec s2 = Vec::Zero(res.s.size() + add);
        s2.head(res.s.size()) = res.s;
        res.s = s2;
        Vec y2 = Vec::Zero(res.y.size() + add);
        y2.head(res.y.size()) = res.y;
        res.y = y2;
        warm = true;
    }

    const Mat z_orig = scale * zn;
    Mat y_raw = scale * (p_blk + eps * mu_hat * Mat::Identity(m, m));
    double mu = repair_dual_inplace(spec, y_raw, scale * mu_hat, eps,
                                    nullptr, &z_orig);

    Vec x = -res.y.head(m);
    Mat w_mat = psd_project(Mat(sym(unsvec(res.y.segment(m, sm), m))));
    std::vector<double> lambda(active.size());
    for (std::size_t k = 0; k < active.size(); ++k) {
        lambda[k] = std::max(0.0, res.y(m + sm + static_cast<int>(k)));
    }
    const Mat slack0 = primal_slack(x, w_mat, active, lambda);
    const double shift = std::max(0.0, -min_eig(slack0)) + kPrimalMargin;
    x.array() += shift;
    const double lhs = (1.0 - eps) * x.sum() + eps * w_mat.trace();
    if (lhs > 1.0) {
        x /= lhs;
        w_mat /= lhs;
        for (auto& lk : lambda) {
            lk /= lhs;
        }
    }

    RelaxSolution sol;
    sol.dual.mu = mu;
    sol.dual.y = SymMatrix(y_raw, 1e-9);
    sol.z_matrix = sol.dual.y;
    sol.w_matrix = SymMatrix(w_mat, 1e-9);
    sol.primal.rho = 1.0;
    sol.primal.x = x;
    sol.primal.tri_terms = active;
    sol.primal.tri_lambda = lambda;
    sol.pairing = (w_mat.cwiseProduct(y_raw)).sum();
    sol.gap_sigma = 1.0 - sol.pairing / (sol.primal.rho * sol.dual.mu);
    sol.iterations = total_iters;
    if (sol.gap_sigma > cfg.sigma_budget) {
        throw std::runtime_error(
            "solve_nu_polar_eps: duality gap exceeds sigma budget");
    }
    if (sol.pairing > sol.primal.rho * sol.dual.mu * (1.0 + 1e-7)) {
        throw std::runtime_error(
            "solve_nu_polar_eps: witness upper bound violated");
    }
    return sol;
}

RepairedWitnesses repair_witness(const ConeSpec& spec, const RawWitnesses& raw,
                                 const SymMatrix& w_matrix,
                                 const std::optional<Vec>& z_target,
                                 const std::optional<SymMatrix>& z_mat_target,
                                 const SolverConfig& cfg) {
    cfg.validate();
    RepairedWitnesses out;

    Mat y = raw.y;
    const Mat z_mat = z_mat_target ? z_mat_target->mat() : Mat();
    const double mu_fixed = repair_dual_inplace(
        spec, y, raw.mu, cfg.eps, z_target ? &*z_target : nullptr,
        z_mat_target ? &z_mat : nullptr);
    out.dual.mu = mu_fixed;
    out.dual.y = SymMatrix(y, 1e-9);

    Vec x = raw.x;
    std::vector<double> lambda = raw.tri_lambda;
    for (auto& lk : lambda) {
        lk = std::max(0.0, lk);
    }
    const Mat slack0 = primal_slack(x, w_matrix.mat(), raw.tri_terms, lambda);
    const double shift = std::max(0.0, -min_eig(slack0)) + kPrimalMargin;
    x.array() += shift;
    const double rho_fixed =
        std::max(raw.rho,
                 (1.0 - cfg.eps) * x.sum() + cfg.eps * w_matrix.mat().trace());
    out.primal.rho = rho_fixed;
    out.primal.x = x;
    out.primal.tri_terms = raw.tri_terms;
    out.primal.tri_lambda = lambda;

    const double mu_rel = (mu_fixed - raw.mu) / std::max(raw.mu, 1e-12);
    const double rho_rel = (rho_fixed - raw.rho) / std::max(raw.rho, 1e-12);
    out.charged_sigma = std::max(mu_rel, rho_rel);
    if (out.charged_sigma > cfg.sigma_budget) {
        throw std::runtime_error("repair_witness: repair exceeds sigma budget");
    }
    return out;
}

double dist_star_residual(const ConeSpec& spec, const Mat& d, int max_iter) {
    const Mat ds = sym(d);
    const double plain = min_eig(ds);
    if (spec.dist_kind() == DistKind::PSD || spec.dim() < 2 ||
        plain >= -5e-9) {
        return plain;  // λ = 0 already certifies membership (or Dist is PSD)
    }
    const int m = spec.dim();
    const int sm = svec_dim(m);
    const std::vector<TriangleTerm> fam = triangle_family(m);
    const int k = static_cast<int>(fam.size());
    std::vector<SparseSym> mats;
    mats.reserve(fam.size());
    for (const auto& t : fam) {
        mats.push_back(triangle_sparse(t, m));
    }

    // Solve max t s.t. D − Σ λ Δ − t·I ⪰ 0, λ ≥ 0 as the conic program
    //   min −(t⁺ − t⁻)  s.t.  svec(S) + Σ λ_a svec(Δ_a) + (t⁺−t⁻) svec(I)
    //                          = svec(D),  S ⪰ 0, λ, t± ≥ 0.
    const double scale = std::max(ds.norm(), 1e-12);
    ConicProblem prob;
    prob.psd_dims = {m};
    prob.nonneg_dim = k + 2;
    prob.a = Mat::Zero(sm, sm + k + 2);
    prob.a.leftCols(sm) = Mat::Identity(sm, sm);
    for (int a = 0; a < k; ++a) {
        prob.a.col(sm + a) = svec(mats[static_cast<std::size_t>(a)].dense());
    }
    const Vec si = svec(Mat(Mat::Identity(m, m)));
    prob.a.col(sm + k) = si;
    prob.a.col(sm + k + 1) = -si;
    prob.b = svec(Mat(ds / scale));
    prob.c = Vec::Zero(sm + k + 2);
    prob.c(sm + k) = -1.0;
    prob.c(sm + k + 1) = 1.0;

    SplitConfig sc;
    sc.tol = 1e-11;
    sc.max_iter = std::max(max_iter, 20000);
    const SplitResult res = solve_conic(prob, sc, nullptr);

    // Constructive answer: evaluate λ_min(D − Σ λ Δ) at the recovered λ; the
    // solver's objective is never trusted directly.
    Mat mcur = ds;
    for (int a = 0; a < k; ++a) {
        mats[static_cast<std::size_t>(a)].add_to(
            mcur, -scale * std::max(0.0, res.x(sm + a)));
    }
    return std::max(plain, min_eig(mcur));
}

}  // namespace grothcover
