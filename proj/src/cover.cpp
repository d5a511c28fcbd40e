#include "grothcover/cover.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>
#include <vector>

namespace grothcover {

namespace {

constexpr long long kBlockSize = 1024;
constexpr std::uint64_t kStageCover = 0x636f766572ULL;  // "cover"

long long ceil_ll(double v) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw std::invalid_argument("sample_budget: nonpositive or infinite T");
    }
    if (v > 9.0e18) {
        throw std::invalid_argument("sample_budget: T overflows 64 bits");
    }
    return static_cast<long long>(std::ceil(v - 1e-12));
}

using CountMap = std::map<CutSet, long long>;

/// Draws `count` GW samples from the fixed-size block `block` of the stream
/// (seed, cover-stage). Per-sample values depend only on (seed, block,
/// in-block index), never on batch boundaries or thread count.
CountMap draw_block(const GramFactor& f, std::uint64_t seed,
                    std::uint64_t block, long long count) {
    RngStream rng = RngStream::derive(seed, kStageCover, block);
    CountMap local;
    for (long long t = 0; t < count; ++t) {
        local[gw_sample(f, rng)] += 1;
    }
    return local;
}

/// Samples indices [start, start + count) of the global stream, partitioned
/// into kBlockSize blocks, optionally across threads; merges into `counts`.
/// `start` must be block-aligned.
void draw_samples(const GramFactor& f, std::uint64_t seed, long long start,
                  long long count, int threads, CountMap& counts) {
    if (start % kBlockSize != 0) {
        throw std::logic_error("draw_samples: start not block-aligned");
    }
    const long long first_block = start / kBlockSize;
    const long long n_blocks = (count + kBlockSize - 1) / kBlockSize;
    const int nt = static_cast<int>(
        std::max<long long>(1, std::min<long long>(threads, n_blocks)));
    std::vector<CountMap> partial(static_cast<std::size_t>(nt));
    auto work = [&](int tid) {
        for (long long b = tid; b < n_blocks; b += nt) {
            const long long in_block =
                std::min(kBlockSize, count - b * kBlockSize);
            CountMap local =
                draw_block(f, seed,
                           static_cast<std::uint64_t>(first_block + b),
                           in_block);
            for (const auto& [u, c] : local) {
                partial[static_cast<std::size_t>(tid)][u] += c;
            }
        }
    };
    if (nt == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(nt));
        for (int tid = 0; tid < nt; ++tid) {
            pool.emplace_back(work, tid);
        }
        for (auto& th : pool) {
            th.join();
        }
    }
    for (const auto& part : partial) {
        for (const auto& [u, c] : part) {
            counts[u] += c;
        }
    }
}

/// Smallest c with c·μ·Ê ≥ demand, where Ê is the empirical cut average.
/// Polyhedral: componentwise on A*. FULL_PSD: along range(Z).
double smallest_feasible_scale(const ConeSpec& spec, const CountMap& counts,
                               long long t, double mu, const Vec& z_vec,
                               const Mat& z_mat) {
    const int m = spec.dim();
    const double ts = static_cast<double>(t);
    if (spec.cov_kind() == CovKind::POLYHEDRAL) {
        const int d = spec.d();
        Vec cov = Vec::Zero(d);
        for (const auto& [u, c] : counts) {
            const double w = static_cast<double>(c) / ts;
            for (int fi = 0; fi < d; ++fi) {
                cov(fi) +=
                    w * spec.a_matrices()[static_cast<std::size_t>(fi)]
                            .inner_cut(u);
            }
        }
        double c_need = 0.0;
        for (int fi = 0; fi < d; ++fi) {
            if (z_vec(fi) <= 0.0) {
                continue;
            }
            if (cov(fi) <= 0.0) {
                return std::numeric_limits<double>::infinity();
            }
            c_need = std::max(c_need, z_vec(fi) / (mu * cov(fi)));
        }
        return c_need;
    }
    Mat e_hat = Mat::Zero(m, m);
    for (const auto& [u, c] : counts) {
        e_hat += (static_cast<double>(c) / ts) * sign_tensor(u).mat();
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(z_mat);
    const Vec ev = es.eigenvalues();
    const double cutoff = 1e-10 * std::max(1.0, ev.maxCoeff());
    std::vector<int> keep;
    for (int i = 0; i < m; ++i) {
        if (ev(i) > cutoff) {
            keep.push_back(i);
        }
    }
    if (keep.empty()) {
        return 0.0;
    }
    Mat range(m, static_cast<int>(keep.size()));
    for (std::size_t k = 0; k < keep.size(); ++k) {
        range.col(static_cast<int>(k)) =
            es.eigenvectors().col(keep[k]) / std::sqrt(ev(keep[k]));
    }
    const Mat pencil = range.transpose() * e_hat * range;
    Eigen::SelfAdjointEigenSolver<Mat> pes(
        Mat(0.5 * (pencil + pencil.transpose())), Eigen::EigenvaluesOnly);
    const double g = pes.eigenvalues().minCoeff();
    if (g <= 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return 1.0 / (mu * g);
}

}  // namespace

double Cover::total_weight() const {
    double s = 0.0;
    for (const auto& [u, y] : entries) {
        s += y;
    }
    return s;
}

Mat Cover::sum_tensor(int m) const {
    Mat s = Mat::Zero(m, m);
    for (const auto& [u, y] : entries) {
        s += y * sign_tensor(u).mat();
    }
    return s;
}

SampleBudget sample_budget(BudgetRegime regime, const BudgetParams& params) {
    if (params.n < 1 || params.gamma <= 0.0 || params.eps <= 0.0) {
        throw std::invalid_argument("sample_budget: invalid parameters");
    }
    const double n = static_cast<double>(params.n);
    SampleBudget out;
    out.regime = regime;
    out.gamma = params.gamma;
    switch (regime) {
        case BudgetRegime::POLYHEDRAL: {
            if (params.d < 1 || params.alpha <= 0.0 || params.kappa <= 0.0) {
                throw std::invalid_argument(
                    "sample_budget: POLYHEDRAL needs d, alpha, kappa");
            }
            const double num =
                2.0 * (std::log(static_cast<double>(params.d)) + std::log(n));
            out.t = ceil_ll(num / (params.gamma * params.gamma * params.alpha *
                                   params.eps * params.kappa));
            break;
        }
        case BudgetRegime::PSD_BERNSTEIN: {
            if (params.alpha <= 0.0) {
                throw std::invalid_argument(
                    "sample_budget: PSD_BERNSTEIN needs alpha");
            }
            const double ag = params.alpha * params.gamma;
            const double ne = n / params.eps;
            const double t1 = 8.0 * ne * ne * std::log(2.0 * n) / (ag * ag);
            const double t2 = 16.0 * ne * std::log(2.0 * n) / (3.0 * ag);
            out.t = std::max(ceil_ll(t1), ceil_ll(t2));
            break;
        }
        case BudgetRegime::PSD_NESTEROV: {
            const double xi = params.eps / n;
            out.t = ceil_ll(2.0 * M_PI * std::log(2.0 * n) /
                            (params.gamma * params.gamma * xi));
            break;
        }
    }
    return out;
}

Cover build_cover(const ConeSpec& spec, const RoundingSpec& r,
                  const DualWitness& witness, const BuildCoverOptions& opts) {
    const int m = spec.dim();
    const double mu = witness.mu;
    if (!(mu > 0.0)) {
        throw std::invalid_argument("build_cover: witness mu must be positive");
    }
    const GramFactor f = gram_factor(witness.y, mu, 1e-7);
    const Mat z_mat = witness.y.mat();
    Vec z_vec;
    if (spec.cov_kind() == CovKind::POLYHEDRAL) {
        z_vec = apply_adjoint(spec, z_mat);
    }

    Cover cover;
    if (opts.mode == CoverMode::THEORETICAL) {
        if (!r.claimed_alpha) {
            throw std::invalid_argument(
                "build_cover: THEORETICAL mode needs a claimed alpha");
        }
        const long long t = opts.budget.t;
        if (t <= 0) {
            throw std::invalid_argument("build_cover: empty sample budget");
        }
        const double gamma = opts.budget.gamma;
        if (!(gamma > 0.0 && gamma < 1.0)) {
            throw std::invalid_argument("build_cover: gamma out of range");
        }
        CountMap counts;
        draw_samples(f, opts.seed, 0, t, opts.threads, counts);
        const double alpha = *r.claimed_alpha;
        const double denom =
            (1.0 - gamma) * alpha * static_cast<double>(t);
        for (const auto& [u, c] : counts) {
            cover.entries[u] = mu * static_cast<double>(c) / denom;
        }
        cover.meta.t_used = t;
        cover.meta.gamma = gamma;
        cover.meta.alpha_used = alpha;
        cover.meta.mode = "theoretical";
        return cover;
    }

    // ADAPTIVE: sample in block-aligned batches; after each batch, rescale
    // the empirical average to the smallest feasible cover and stop once its
    // cost clears the certificate budget mu_cert/beta.
    if (!(opts.beta_target > 0.0 && opts.beta_target < 1.0)) {
        throw std::invalid_argument("build_cover: beta_target out of (0,1)");
    }
    const double mu_cert = opts.mu_cert > 0.0 ? opts.mu_cert : mu;
    const double cost_budget = mu_cert / opts.beta_target;
    const long long raw_batch =
        std::max<long long>(static_cast<long long>(m - 1) *
                                static_cast<long long>(m - 1),
                            1024);
    const long long batch =
        ((raw_batch + kBlockSize - 1) / kBlockSize) * kBlockSize;

    CountMap counts;
    long long t_total = 0;
    double c_scale = std::numeric_limits<double>::infinity();
    while (t_total < opts.t_cap) {
        const long long take = std::min(batch, opts.t_cap - t_total);
        draw_samples(f, opts.seed, t_total, take, opts.threads, counts);
        t_total += take;
        c_scale =
            smallest_feasible_scale(spec, counts, t_total, mu, z_vec, z_mat);
        if (std::isfinite(c_scale) && c_scale * mu <= cost_budget) {
            break;
        }
    }
    if (!std::isfinite(c_scale) ||
        c_scale * mu > cost_budget * (1.0 + 1e-9)) {
        throw std::runtime_error(
            "build_cover: sampling cap exhausted before the cover met the "
            "cost target");
    }
    const double unit =
        c_scale * mu * (1.0 + 1e-12) / static_cast<double>(t_total);
    for (const auto& [u, c] : counts) {
        cover.entries[u] = unit * static_cast<double>(c);
    }
    cover.meta.t_used = t_total;
    cover.meta.gamma = 0.0;
    cover.meta.alpha_used = r.claimed_alpha ? *r.claimed_alpha : 0.0;
    cover.meta.mode = "adaptive";
    return cover;
}

FeasReport check_cover_feasible(const ConeSpec& spec, const Cover& cover,
                                const Vec& z, double tol) {
    if (spec.cov_kind() != CovKind::POLYHEDRAL) {
        throw std::invalid_argument(
            "check_cover_feasible: vector demand needs a polyhedral cone");
    }
    if (z.size() != spec.d()) {
        throw std::invalid_argument("check_cover_feasible: size mismatch");
    }
    Vec covered = Vec::Zero(spec.d());
    for (const auto& [u, y] : cover.entries) {
        for (int fi = 0; fi < spec.d(); ++fi) {
            covered(fi) +=
                y * spec.a_matrices()[static_cast<std::size_t>(fi)].inner_cut(u);
        }
    }
    FeasReport rep;
    rep.worst_residual = (covered - z).minCoeff();
    rep.feasible = rep.worst_residual >= -tol;
    return rep;
}

FeasReport check_cover_feasible(const ConeSpec& spec, const Cover& cover,
                                const SymMatrix& z, double tol) {
    const Mat s = cover.sum_tensor(spec.dim());
    Eigen::SelfAdjointEigenSolver<Mat> es(Mat(s - z.mat()),
                                          Eigen::EigenvaluesOnly);
    FeasReport rep;
    rep.worst_residual = es.eigenvalues().minCoeff();
    rep.feasible = rep.worst_residual >= -tol;
    return rep;
}

}  // namespace grothcover
