#include "grothcover/sparsify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace grothcover {

namespace {

double min_eig(const Mat& m) {
    Eigen::SelfAdjointEigenSolver<Mat> es(Mat(0.5 * (m + m.transpose())),
                                          Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

struct ContractCheck {
    bool ok = false;
    double residual = 0.0;
};

ContractCheck check_contract(const Cover& out, const Cover& in,
                             const SymMatrix& z, double eps_s, double tol) {
    ContractCheck c;
    const int m = z.dim();
    const double bound =
        kSparsifySupportConst * static_cast<double>(m) / (eps_s * eps_s);
    if (static_cast<double>(out.support()) > bound + 0.5) {
        return c;
    }
    for (const auto& [u, y] : out.entries) {
        if (in.entries.find(u) == in.entries.end()) {
            return c;
        }
    }
    if (out.total_weight() > (1.0 + eps_s) * in.total_weight() * (1.0 + 1e-12)) {
        return c;
    }
    c.residual = min_eig(out.sum_tensor(m) - z.mat());
    c.ok = c.residual >= -tol;
    return c;
}

}  // namespace

Cover sparsify_cover(const Cover& cover, const SymMatrix& z,
                     const SparsifyConfig& cfg) {
    if (!(cfg.eps_s > 0.0 && cfg.eps_s < 1.0)) {
        throw std::invalid_argument("sparsify_cover: eps_s out of (0,1)");
    }
    const int m = z.dim();
    const int n_in = cover.support();
    const double total = cover.total_weight();
    const double support_bound =
        kSparsifySupportConst * static_cast<double>(m) /
        (cfg.eps_s * cfg.eps_s);
    if (n_in == 0 || total <= 0.0) {
        return cover;
    }

    // Two-sided barrier parameter: the selection of q = ⌈d/ε²⌉ vectors keeps
    // the whitened spectrum inside a (1+2ε)/(1−2ε) condition band, so
    // ε = ϑ/(2(2+ϑ)) turns the cost inflation bound into exactly (1+ϑ).
    const double eps = cfg.eps_s / (2.0 * (2.0 + cfg.eps_s));

    // Augmented vectors ṽ_U = (√y_U·s_U ; √(y_U/C)): the extra coordinate
    // carries the cover cost through the spectral guarantee.
    std::vector<CutSet> cuts;
    std::vector<double> yin;
    cuts.reserve(static_cast<std::size_t>(n_in));
    Mat vaug(m + 1, n_in);
    {
        int k = 0;
        for (const auto& [u, y] : cover.entries) {
            cuts.push_back(u);
            yin.push_back(y);
            Vec sv(m);
            for (int i = 0; i < m; ++i) {
                sv(i) = u.sign(i);
            }
            vaug.col(k).head(m) = std::sqrt(y) * sv;
            vaug(m, k) = std::sqrt(y / total);
            ++k;
        }
    }

    // Whiten on the range of the augmented Gram G = Σ ṽṽᵀ.
    const Mat gram = vaug * vaug.transpose();
    Eigen::SelfAdjointEigenSolver<Mat> ges(gram);
    const Vec gev = ges.eigenvalues();
    const double cutoff = 1e-12 * std::max(1.0, gev.maxCoeff());
    std::vector<int> keep;
    for (int i = 0; i < m + 1; ++i) {
        if (gev(i) > cutoff) {
            keep.push_back(i);
        }
    }
    const int d = static_cast<int>(keep.size());
    const long long q = static_cast<long long>(
        std::ceil(static_cast<double>(d) / (eps * eps)));
    if (static_cast<long long>(n_in) <= q ||
        static_cast<double>(n_in) <= support_bound) {
        // Barrier selection cannot shrink the support (or it already fits).
        return cover;
    }
    Mat whiten(m + 1, d);
    for (int k = 0; k < d; ++k) {
        whiten.col(k) = ges.eigenvectors().col(keep[static_cast<std::size_t>(k)]) /
                        std::sqrt(gev(keep[static_cast<std::size_t>(k)]));
    }
    const Mat u_vecs = whiten.transpose() * vaug;  // d × n_in, Σ u uᵀ = I_d

    // Barrier walk: ℓ₀ = −d/ε, u₀ = d/ε, δ_L = 1, δ_U = 1/(1−2ε).
    const double delta_u = 1.0 / (1.0 - 2.0 * eps);
    double lo = -static_cast<double>(d) / eps;
    double hi = static_cast<double>(d) / eps;
    Mat a = Mat::Zero(d, d);
    std::vector<double> w(static_cast<std::size_t>(n_in), 0.0);
    for (long long step = 0; step < q; ++step) {
        const double lo2 = lo + 1.0;
        const double hi2 = hi + delta_u;
        Eigen::SelfAdjointEigenSolver<Mat> es(a);
        const Vec ev = es.eigenvalues();
        const Mat vt = es.eigenvectors().transpose() * u_vecs;  // d × n_in
        double phi_u_old = 0.0;
        double phi_u_new = 0.0;
        double phi_l_old = 0.0;
        double phi_l_new = 0.0;
        for (int i = 0; i < d; ++i) {
            phi_u_old += 1.0 / (hi - ev(i));
            phi_u_new += 1.0 / (hi2 - ev(i));
            phi_l_old += 1.0 / (ev(i) - lo);
            phi_l_new += 1.0 / (ev(i) - lo2);
        }
        const double du = std::max(phi_u_old - phi_u_new, 1e-300);
        const double dl = std::max(phi_l_new - phi_l_old, 1e-300);
        int best = -1;
        double best_gap = -1.0;
        double best_t = 0.0;
        for (int k = 0; k < n_in; ++k) {
            double q1_u = 0.0, q2_u = 0.0, q1_l = 0.0, q2_l = 0.0;
            for (int i = 0; i < d; ++i) {
                const double c2 = vt(i, k) * vt(i, k);
                const double ru = hi2 - ev(i);
                const double rl = ev(i) - lo2;
                q1_u += c2 / ru;
                q2_u += c2 / (ru * ru);
                q1_l += c2 / rl;
                q2_l += c2 / (rl * rl);
            }
            const double upper = q2_u / du + q1_u;   // U_A(v): t ≤ 1/U keeps Φ^u
            const double lower = q2_l / dl - q1_l;   // L_A(v): t ≥ 1/L keeps Φ_ℓ
            if (lower <= 0.0) {
                continue;
            }
            const double gap = lower - upper;
            if (gap > best_gap) {
                best_gap = gap;
                best = k;
                best_t = 2.0 / (upper + lower);
            }
        }
        if (best < 0 || best_gap < 0.0) {
            // The existence lemma guarantees this never triggers; fall back
            // to the input if numerics disagree.
            return cover;
        }
        a += best_t * u_vecs.col(best) * u_vecs.col(best).transpose();
        w[static_cast<std::size_t>(best)] += best_t;
        lo = lo2;
        hi = hi2;
    }

    const double lam_min = min_eig(a);
    if (lam_min <= 0.0) {
        return cover;
    }
    Cover out;
    out.meta = cover.meta;
    for (int k = 0; k < n_in; ++k) {
        if (w[static_cast<std::size_t>(k)] > 0.0) {
            out.entries[cuts[static_cast<std::size_t>(k)]] =
                (w[static_cast<std::size_t>(k)] / lam_min) *
                yin[static_cast<std::size_t>(k)];
        }
    }
    const ContractCheck chk =
        check_contract(out, cover, z, cfg.eps_s, cfg.tol);
    if (!chk.ok) {
        // Verified fallback: the input itself, when it meets the contract.
        if (static_cast<double>(n_in) <= support_bound) {
            return cover;
        }
        throw std::runtime_error("sparsify_cover: contract verification failed");
    }
    return out;
}

}  // namespace grothcover
