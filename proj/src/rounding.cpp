#include "grothcover/rounding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace grothcover {

namespace {

double gw_ratio(double t) {
    // (arccos t / π) / ((1 − t)/2); the removable singularity at t = 1 has
    // limit 2/π · 1/√(1−t²)·... evaluated away from t = 1 only.
    return (std::acos(t) / M_PI) / (0.5 * (1.0 - t));
}

}  // namespace

GramFactor gram_factor(const SymMatrix& y, double mu, double tol) {
    if (!(mu > 0.0)) {
        throw std::invalid_argument("gram_factor: mu must be positive");
    }
    const int m = y.dim();
    Mat ybar = y.mat() / mu;
    for (int i = 0; i < m; ++i) {
        if (std::abs(ybar(i, i) - 1.0) > tol) {
            throw std::invalid_argument(
                "gram_factor: Y/mu does not have unit diagonal");
        }
        ybar(i, i) = 1.0;
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(ybar);
    const Vec ev = es.eigenvalues();
    if (ev.minCoeff() < -tol) {
        throw std::invalid_argument("gram_factor: Y/mu is not PSD");
    }
    GramFactor f;
    f.mu = mu;
    f.b = ev.cwiseMax(0.0).cwiseSqrt().asDiagonal() *
          es.eigenvectors().transpose();
    // Columns of B are the unit vectors b_i with b_iᵀb_j = Ȳ_ij; renormalize
    // away the eigenvalue clipping error.
    for (int i = 0; i < m; ++i) {
        const double nrm = f.b.col(i).norm();
        if (std::abs(nrm - 1.0) > 1e-6) {
            throw std::runtime_error("gram_factor: factor column not unit norm");
        }
        f.b.col(i) /= nrm;
    }
    return f;
}

CutSet gw_sample(const GramFactor& f, RngStream& rng) {
    const int m = f.dim();
    Vec g(m);
    for (int i = 0; i < m; ++i) {
        g(i) = rng.next_gaussian();
    }
    std::uint64_t mask = 0;
    const Vec proj = f.b.transpose() * g;
    for (int i = 0; i < m; ++i) {
        if (proj(i) >= 0.0) {
            mask |= 1ULL << i;
        }
    }
    return CutSet(mask, m - 1);
}

AlphaEstimate estimate_rounding_constant(const ConeSpec& spec,
                                         const RoundingSpec& r,
                                         const SymMatrix& y_bar,
                                         long long samples, RngStream& rng) {
    if (r.kind != RoundingKind::GW_HYPERPLANE) {
        throw std::invalid_argument(
            "estimate_rounding_constant: unknown rounding kind");
    }
    if (samples <= 0) {
        throw std::invalid_argument(
            "estimate_rounding_constant: samples must be positive");
    }
    const int m = spec.dim();
    if (y_bar.dim() != m) {
        throw std::invalid_argument(
            "estimate_rounding_constant: dimension mismatch");
    }
    const GramFactor f = gram_factor(y_bar, 1.0, 1e-7);

    AlphaEstimate est;
    est.samples = samples;

    if (spec.cov_kind() == CovKind::POLYHEDRAL) {
        const auto& as = spec.a_matrices();
        const int d = spec.d();
        Vec sum = Vec::Zero(d);
        Vec sumsq = Vec::Zero(d);
        for (long long t = 0; t < samples; ++t) {
            const CutSet u = gw_sample(f, rng);
            for (int fi = 0; fi < d; ++fi) {
                const double v =
                    as[static_cast<std::size_t>(fi)].inner_cut(u);
                sum(fi) += v;
                sumsq(fi) += v * v;
            }
        }
        est.per_constraint_ratios.assign(static_cast<std::size_t>(d), 0.0);
        est.alpha_hat = std::numeric_limits<double>::infinity();
        const double ts = static_cast<double>(samples);
        for (int fi = 0; fi < d; ++fi) {
            const double denom =
                as[static_cast<std::size_t>(fi)].inner(y_bar.mat());
            if (denom <= 1e-9) {
                est.excluded_constraints.push_back(fi);
                est.per_constraint_ratios[static_cast<std::size_t>(fi)] =
                    std::numeric_limits<double>::quiet_NaN();
                continue;
            }
            const double mean = sum(fi) / ts;
            const double var =
                std::max(0.0, sumsq(fi) / ts - mean * mean);
            const double ratio = mean / denom;
            est.per_constraint_ratios[static_cast<std::size_t>(fi)] = ratio;
            if (ratio < est.alpha_hat) {
                est.alpha_hat = ratio;
                est.confidence_halfwidth =
                    1.96 * std::sqrt(var / ts) / denom;
            }
        }
        if (!std::isfinite(est.alpha_hat)) {
            throw std::runtime_error(
                "estimate_rounding_constant: all constraints degenerate");
        }
        return est;
    }

    // FULL_PSD: Ê = mean sampled sign tensor; α̂ = λ_min of Ê against Ȳ on
    // range(Ȳ). Counts are kept per distinct cut so the variance can be
    // evaluated along the minimizing direction in a second pass.
    std::map<CutSet, long long> counts;
    for (long long t = 0; t < samples; ++t) {
        counts[gw_sample(f, rng)] += 1;
    }
    Mat e_hat = Mat::Zero(m, m);
    for (const auto& [u, cnt] : counts) {
        e_hat += (static_cast<double>(cnt) / static_cast<double>(samples)) *
                 sign_tensor(u).mat();
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(y_bar.mat());
    const Vec ev = es.eigenvalues();
    std::vector<int> keep;
    for (int i = 0; i < m; ++i) {
        if (ev(i) > 1e-8) {
            keep.push_back(i);
        }
    }
    if (keep.empty()) {
        throw std::runtime_error("estimate_rounding_constant: Y_bar = 0");
    }
    Mat range(m, static_cast<int>(keep.size()));
    for (std::size_t k = 0; k < keep.size(); ++k) {
        range.col(static_cast<int>(k)) =
            es.eigenvectors().col(keep[k]) / std::sqrt(ev(keep[k]));
    }
    const Mat pencil = range.transpose() * e_hat * range;
    Eigen::SelfAdjointEigenSolver<Mat> pes(
        Mat(0.5 * (pencil + pencil.transpose())));
    int argmin = 0;
    pes.eigenvalues().minCoeff(&argmin);
    est.alpha_hat = pes.eigenvalues()(argmin);
    const Vec dir = range * pes.eigenvectors().col(argmin);
    double sum = 0.0;
    double sumsq = 0.0;
    for (const auto& [u, cnt] : counts) {
        const double su = dir.dot(sign_tensor(u).mat() * dir);
        sum += static_cast<double>(cnt) * su;
        sumsq += static_cast<double>(cnt) * su * su;
    }
    const double ts = static_cast<double>(samples);
    const double mean = sum / ts;
    const double var = std::max(0.0, sumsq / ts - mean * mean);
    est.confidence_halfwidth = 1.96 * std::sqrt(var / ts);
    return est;
}

double gw_constant_minimize(int grid_points) {
    if (grid_points < 3) {
        throw std::invalid_argument("gw_constant_minimize: grid too small");
    }
    // Coarse grid on [−1, 1), then golden-section refinement around the
    // best grid cell.
    double lo = -1.0;
    const double hi = 1.0 - 1e-9;
    double best = std::numeric_limits<double>::infinity();
    int best_i = 0;
    for (int i = 0; i < grid_points; ++i) {
        const double t =
            lo + (hi - lo) * static_cast<double>(i) /
                     static_cast<double>(grid_points - 1);
        const double v = gw_ratio(t);
        if (v < best) {
            best = v;
            best_i = i;
        }
    }
    const double step = (hi - lo) / static_cast<double>(grid_points - 1);
    double a = lo + step * static_cast<double>(std::max(0, best_i - 1));
    double b = lo + step * static_cast<double>(
                              std::min(grid_points - 1, best_i + 1));
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - phi * (b - a);
    double d = a + phi * (b - a);
    for (int it = 0; it < 200 && b - a > 1e-14; ++it) {
        if (gw_ratio(c) < gw_ratio(d)) {
            b = d;
            d = c;
            c = b - phi * (b - a);
        } else {
            a = c;
            c = d;
            d = a + phi * (b - a);
        }
    }
    return std::min(best, gw_ratio(0.5 * (a + b)));
}

}  // namespace grothcover
