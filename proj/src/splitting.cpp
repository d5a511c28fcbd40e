#include "grothcover/splitting.hpp"

#include <cmath>
#include <stdexcept>

namespace grothcover {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

/// Projects the stacked variable onto K (PSD blocks then orthant), in place.
void project_cone(const ConicProblem& p, Vec& v) {
    int off = 0;
    for (int m : p.psd_dims) {
        const int d = svec_dim(m);
        const Mat block = unsvec(v.segment(off, d), m);
        v.segment(off, d) = svec(psd_project(block));
        off += d;
    }
    if (p.nonneg_dim > 0) {
        v.tail(p.nonneg_dim) = v.tail(p.nonneg_dim).cwiseMax(0.0);
    }
}

}  // namespace

int svec_dim(int m) { return m * (m + 1) / 2; }

Vec svec(const Mat& m) {
    const int n = static_cast<int>(m.rows());
    Vec v(svec_dim(n));
    int k = 0;
    for (int c = 0; c < n; ++c) {
        for (int r = 0; r <= c; ++r) {
            v(k++) = (r == c) ? m(r, c) : kSqrt2 * m(r, c);
        }
    }
    return v;
}

Mat unsvec(const Vec& v, int m) {
    Mat out(m, m);
    int k = 0;
    for (int c = 0; c < m; ++c) {
        for (int r = 0; r <= c; ++r) {
            const double x = (r == c) ? v(k) : v(k) / kSqrt2;
            out(r, c) = x;
            out(c, r) = x;
            ++k;
        }
    }
    return out;
}

int ConicProblem::var_dim() const {
    int n = nonneg_dim;
    for (int m : psd_dims) {
        n += svec_dim(m);
    }
    return n;
}

SplitResult solve_conic(const ConicProblem& p, const SplitConfig& cfg,
                        const SplitResult* warm) {
    const int big_n = p.var_dim();
    const int rows = static_cast<int>(p.a.rows());
    if (p.a.cols() != big_n || p.b.size() != rows || p.c.size() != big_n) {
        throw std::invalid_argument("solve_conic: inconsistent dimensions");
    }

    // Normal-matrix factorization; a tiny ridge guards redundant rows.
    Mat gram = p.a * p.a.transpose();
    gram.diagonal().array() += 1e-12 * (1.0 + gram.diagonal().maxCoeff());
    Eigen::LDLT<Mat> ldlt(gram);
    if (ldlt.info() != Eigen::Success) {
        throw std::runtime_error("solve_conic: normal matrix factorization failed");
    }

    SplitResult res;
    res.x = Vec::Zero(big_n);
    res.y = Vec::Zero(rows);
    res.s = Vec::Zero(big_n);
    if (warm != nullptr) {
        if (warm->x.size() == big_n) res.x = warm->x;
        if (warm->y.size() == rows) res.y = warm->y;
        if (warm->s.size() == big_n) res.s = warm->s;
    }

    double t = cfg.t0;
    const double bnorm = 1.0 + p.b.norm();
    const double cnorm = 1.0 + p.c.norm();

    for (int it = 1; it <= cfg.max_iter; ++it) {
        // y-step: (AAᵀ) y = (b − Ax)/t + A(c − s)
        const Vec rhs = (p.b - p.a * res.x) / t + p.a * (p.c - res.s);
        res.y = ldlt.solve(rhs);

        // s-step: project c − Aᵀy − x/t onto K
        const Vec v = p.c - p.a.transpose() * res.y - res.x / t;
        res.s = v;
        project_cone(p, res.s);

        // x-step: x ← x + t(Aᵀy + s − c) = t(s − v) = t·Π_K(−v) ∈ K
        res.x = t * (res.s - v);

        if (it % cfg.check_every == 0 || it == cfg.max_iter) {
            res.pinf = (p.a * res.x - p.b).norm() / bnorm;
            res.dinf = (p.a.transpose() * res.y + res.s - p.c).norm() / cnorm;
            res.pobj = p.c.dot(res.x);
            res.dobj = p.b.dot(res.y);
            res.gap = std::abs(res.pobj - res.dobj) /
                      (1.0 + std::abs(res.pobj) + std::abs(res.dobj));
            res.iters = it;
            if (res.pinf <= cfg.tol && res.dinf <= cfg.tol &&
                res.gap <= cfg.tol) {
                res.converged = true;
                return res;
            }
            // Penalty balancing; the factorization does not depend on t.
            // dinf scales like ‖Δx‖/t, pinf like the b-residual that the
            // y-step damps by 1/t: a dominating dual residual calls for a
            // LARGER step, not a smaller one.
            if (it % (cfg.check_every * 8) == 0) {
                if (res.dinf > 10.0 * res.pinf && t < 1e6) {
                    t *= 2.0;
                } else if (res.pinf > 10.0 * res.dinf && t > 1e-6) {
                    t /= 2.0;
                }
            }
        }
    }
    res.converged = false;
    return res;
}

}  // namespace grothcover
