#include "grothcover/certify.hpp"

#include "grothcover/sparsify.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace grothcover {

namespace {

constexpr std::uint64_t kStageAlpha = 0x616c706861ULL;  // "alpha"

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
}

void append_members(std::string& out, const CutSet& u) {
    out += '[';
    bool first = true;
    for (int idx : u.members()) {
        if (!first) {
            out += ',';
        }
        first = false;
        out += std::to_string(idx);
    }
    out += ']';
}

double cut_value(const Mat& w, const CutSet& u) {
    const int m = static_cast<int>(w.rows());
    Vec s(m);
    for (int i = 0; i < m; ++i) {
        s(i) = u.sign(i);
    }
    return s.dot(w * s);
}

double min_eig(const Mat& m) {
    Eigen::SelfAdjointEigenSolver<Mat> es(Mat(0.5 * (m + m.transpose())),
                                          Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

}  // namespace

ParameterSchedule parameter_schedule(double beta, double alpha,
                                     ScheduleCase sched_case) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw std::invalid_argument("parameter_schedule: alpha out of (0,1]");
    }
    if (!(beta > 0.0 && beta < alpha)) {
        throw std::invalid_argument(
            "parameter_schedule: beta must lie in (0, alpha)");
    }
    ParameterSchedule s;
    s.tau = 1.0 - beta / alpha;
    if (sched_case == ScheduleCase::POLYHEDRAL) {
        s.eps = s.tau / 3.0;
        s.sigma = s.tau / 3.0;
        s.gamma = s.tau / 3.0;
        s.bss = 0.0;
    } else {
        s.eps = s.tau / 4.0;
        s.sigma = s.tau / 4.0;
        s.gamma = s.tau / 4.0;
        s.bss = s.tau / (4.0 - s.tau);
    }
    return s;
}

CutSet select_best_cut(const SymMatrix& w, const Cover& support) {
    if (support.entries.empty()) {
        throw std::invalid_argument("select_best_cut: empty support");
    }
    // Map iteration is already in the lexicographic tie-break order, so the
    // first strict maximum wins ties.
    const CutSet* best = nullptr;
    double best_q = -std::numeric_limits<double>::infinity();
    for (const auto& [u, y] : support.entries) {
        const double q = cut_value(w.mat(), u);
        if (q > best_q) {
            best_q = q;
            best = &u;
        }
    }
    return *best;
}

CertReport verify_certificate(const ConeSpec& spec, const SymMatrix& w,
                              const SymMatrix& z, const BetaCertificate& cert,
                              double tol) {
    CertReport rep;
    const int m = spec.dim();
    const double pairing = (w.mat().cwiseProduct(z.mat())).sum();
    const double scale = std::max(1.0, std::abs(pairing));

    // (i) ρμ = ⟨W, Z⟩.
    rep.c1_gap = std::abs(cert.rho * cert.mu - pairing);
    rep.c1 = rep.c1_gap <= tol * scale;

    // (ii) the named cut earns q(W, s_U) ≥ β·ρ.
    rep.c2_cut = cut_value(w.mat(), cert.u) - cert.beta * cert.rho;
    rep.c2 = rep.c2_cut >= -tol * scale;

    // (iii) y covers Z in the lifted order at cost at most μ/β.
    if (spec.cov_kind() == CovKind::POLYHEDRAL) {
        const Vec target = apply_adjoint(spec, z);
        Vec covered = Vec::Zero(spec.d());
        for (const auto& [u, yv] : cert.y.entries) {
            for (int f = 0; f < spec.d(); ++f) {
                covered(f) +=
                    yv *
                    spec.a_matrices()[static_cast<std::size_t>(f)].inner_cut(u);
            }
        }
        rep.c3_cover_residual = (covered - target).minCoeff();
    } else {
        rep.c3_cover_residual = min_eig(cert.y.sum_tensor(m) - z.mat());
    }
    rep.c3_cost = cert.mu / cert.beta - cert.y.total_weight();
    rep.c3 = rep.c3_cover_residual >= -tol * std::max(1.0, z.mat().norm()) &&
             rep.c3_cost >= -tol * std::max(1.0, std::abs(cert.mu));

    // (iv) (ρ, x) is a maximization witness: ⟨1,x⟩ ≤ ρ and
    // Diag(x) − W ∈ Dist*.
    rep.c4_trace = cert.rho - cert.x.sum();
    const Mat slack = Mat(cert.x.asDiagonal()) - w.mat();
    rep.c4_dist_star = dist_star_residual(spec, slack);
    rep.c4 = rep.c4_trace >= -tol * std::max(1.0, std::abs(cert.rho)) &&
             rep.c4_dist_star >= -tol * std::max(1.0, w.mat().norm());

    rep.pass = rep.c1 && rep.c2 && rep.c3 && rep.c4;
    return rep;
}

namespace {

PipelineResult run_pipeline_impl(const ConeSpec& spec,
                                 const std::optional<Vec>& vec_input,
                                 const std::optional<SymMatrix>& mat_input,
                                 PipelineDirection dir,
                                 const PipelineOptions& opts) {
    if (!(opts.beta > 0.0 && opts.beta < 1.0)) {
        throw std::invalid_argument("run_pipeline: beta out of (0,1)");
    }
    const int m = spec.dim();
    const ScheduleCase sched_case = spec.cov_kind() == CovKind::POLYHEDRAL
                                        ? ScheduleCase::POLYHEDRAL
                                        : ScheduleCase::PSD;

    RoundingSpec rspec;
    rspec.kind = RoundingKind::GW_HYPERPLANE;

    auto solve = [&](const SolverConfig& cfg) {
        if (spec.cov_kind() == CovKind::POLYHEDRAL) {
            return dir == PipelineDirection::COVER
                       ? solve_nu_polar_eps(spec, *vec_input, cfg)
                       : solve_nu_eps(spec, *vec_input, cfg);
        }
        return dir == PipelineDirection::COVER
                   ? solve_nu_polar_eps(spec, *mat_input, cfg)
                   : solve_nu_eps(spec, *mat_input, cfg);
    };

    // Phase 1: solve at a small pilot perturbation to obtain the correlation
    // matrix whose empirical rounding constant drives the schedule.
    SolverConfig pilot;
    pilot.eps = 1e-3;
    pilot.sigma_budget = 0.2;
    RelaxSolution pilot_sol = solve(pilot);
    const SymMatrix y_bar_pilot =
        SymMatrix(pilot_sol.dual.y.mat() / pilot_sol.dual.mu, 1e-9);
    RngStream alpha_rng = RngStream::derive(opts.seed, kStageAlpha);
    AlphaEstimate alpha_est = estimate_rounding_constant(
        spec, rspec, y_bar_pilot, opts.alpha_samples, alpha_rng);
    const double alpha_used = alpha_est.alpha_hat;
    if (opts.beta >= alpha_used) {
        throw std::runtime_error(
            "run_pipeline: beta is not below the estimated rounding constant");
    }
    rspec.claimed_alpha = alpha_used;

    // Phase 2: re-solve at the schedule the (β, α̂) pair dictates. The
    // empirical rounding constant of the re-solved witness degrades as ε
    // grows (the perturbation pulls correlations off the optimizer), so a
    // schedule that is feasible at the pilot can leave the adaptive cover
    // short of its cost target. Retries halve ε and σ, which only tightens
    // the certificate.
    ParameterSchedule sched0 =
        parameter_schedule(opts.beta, alpha_used, sched_case);
    if (opts.eps_override > 0.0) {
        sched0.eps = opts.eps_override;
    }
    if (opts.sigma_override > 0.0) {
        sched0.sigma = opts.sigma_override;
    }
    if (opts.gamma_override > 0.0) {
        sched0.gamma = opts.gamma_override;
    }

    constexpr int kMaxAttempts = 4;
    PipelineResult out;
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        const bool last = attempt == kMaxAttempts - 1;
        ParameterSchedule sched = sched0;
        const double shrink = std::pow(0.5, attempt);
        sched.eps *= shrink;
        sched.sigma *= shrink;

        SolverConfig cfg;
        cfg.eps = sched.eps;
        cfg.sigma_budget = sched.sigma;
        RelaxSolution sol = solve(cfg);

        // Certificate scalars: ρ := ρ̄/(1−ε) and μ := ⟨W,Z⟩/ρ, which makes
        // clause (i) an identity and keeps ρμ within the budgeted slack of
        // ρ̄μ̄.
        const double rho = sol.primal.rho / (1.0 - sched.eps);
        const double pairing =
            (sol.w_matrix.mat().cwiseProduct(sol.z_matrix.mat())).sum();
        const double mu = pairing / rho;

        BuildCoverOptions copts;
        copts.mode = opts.mode;
        copts.beta_target = opts.beta;
        copts.mu_cert = mu;
        copts.t_cap = opts.t_cap;
        copts.seed = opts.seed;
        copts.threads = opts.threads;
        if (opts.mode == CoverMode::THEORETICAL) {
            BudgetParams bp;
            bp.n = m - 1;
            bp.d = spec.cov_kind() == CovKind::POLYHEDRAL ? spec.d() : 0;
            bp.gamma = sched.gamma;
            bp.eps = sched.eps;
            bp.alpha = alpha_used;
            bp.kappa =
                spec.cov_kind() == CovKind::POLYHEDRAL ? spec.kappa() : 0.0;
            copts.budget = sample_budget(spec.cov_kind() == CovKind::POLYHEDRAL
                                             ? BudgetRegime::POLYHEDRAL
                                             : BudgetRegime::PSD_NESTEROV,
                                         bp);
            if (copts.budget.t > opts.t_cap) {
                copts.budget.t = opts.t_cap;
            }
        }
        Cover cover;
        try {
            cover = build_cover(spec, rspec, sol.dual, copts);
        } catch (const std::runtime_error&) {
            if (last) {
                throw;
            }
            continue;
        }
        if (spec.cov_kind() == CovKind::FULL_PSD && sched.bss > 0.0) {
            SparsifyConfig scfg;
            scfg.eps_s = sched.bss;
            cover = sparsify_cover(cover, sol.z_matrix, scfg);
        }

        out = PipelineResult{};
        out.w_matrix = sol.w_matrix;
        out.z_matrix = sol.z_matrix;
        if (spec.cov_kind() == CovKind::POLYHEDRAL) {
            out.paired_weights = dir == PipelineDirection::COVER
                                     ? *sol.w_vector
                                     : *sol.z_vector;
        }
        out.schedule = sched;
        out.alpha_estimate = alpha_est;

        out.cert.beta = opts.beta;
        out.cert.rho = rho;
        out.cert.mu = mu;
        out.cert.u = select_best_cut(sol.w_matrix, cover);
        out.cert.y = cover;
        out.cert.x = sol.primal.x;
        out.cert.seed = opts.seed;
        out.cert.alpha_used = alpha_used;
        out.cert.checks =
            verify_certificate(spec, sol.w_matrix, sol.z_matrix, out.cert);
        if (out.cert.checks.pass || last) {
            break;
        }
    }
    return out;
}

}  // namespace

PipelineResult run_pipeline(const ConeSpec& spec, const Vec& weights,
                            PipelineDirection dir,
                            const PipelineOptions& opts) {
    if (spec.cov_kind() != CovKind::POLYHEDRAL) {
        throw std::invalid_argument(
            "run_pipeline: vector input needs a polyhedral cone");
    }
    return run_pipeline_impl(spec, weights, std::nullopt, dir, opts);
}

PipelineResult run_pipeline(const ConeSpec& spec, const SymMatrix& weights,
                            PipelineDirection dir,
                            const PipelineOptions& opts) {
    if (spec.cov_kind() != CovKind::FULL_PSD) {
        throw std::invalid_argument(
            "run_pipeline: matrix input needs the FULL_PSD cone");
    }
    return run_pipeline_impl(spec, std::nullopt, weights, dir, opts);
}

std::string certificate_to_json(const BetaCertificate& cert) {
    std::string out;
    out.reserve(4096);
    out += "{\"beta\":";
    out += fmt_double(cert.beta);
    out += ",\"rho\":";
    out += fmt_double(cert.rho);
    out += ",\"mu\":";
    out += fmt_double(cert.mu);
    out += ",\"U\":";
    append_members(out, cert.u);
    out += ",\"x\":[";
    for (int i = 0; i < cert.x.size(); ++i) {
        if (i > 0) {
            out += ',';
        }
        out += fmt_double(cert.x(i));
    }
    out += "],\"cover\":[";
    bool first = true;
    for (const auto& [u, y] : cert.y.entries) {
        if (!first) {
            out += ',';
        }
        first = false;
        out += "{\"U\":";
        append_members(out, u);
        out += ",\"y\":";
        out += fmt_double(y);
        out += '}';
    }
    out += "],\"seed\":";
    out += std::to_string(cert.seed);
    out += ",\"alpha_used\":";
    out += fmt_double(cert.alpha_used);
    out += ",\"checks\":{";
    out += "\"c1_gap\":" + fmt_double(cert.checks.c1_gap);
    out += ",\"c2_cut\":" + fmt_double(cert.checks.c2_cut);
    out += ",\"c3_cover_residual\":" + fmt_double(cert.checks.c3_cover_residual);
    out += ",\"c3_cost\":" + fmt_double(cert.checks.c3_cost);
    out += ",\"c4_trace\":" + fmt_double(cert.checks.c4_trace);
    out += ",\"c4_dist_star\":" + fmt_double(cert.checks.c4_dist_star);
    out += std::string(",\"c1\":") + (cert.checks.c1 ? "true" : "false");
    out += std::string(",\"c2\":") + (cert.checks.c2 ? "true" : "false");
    out += std::string(",\"c3\":") + (cert.checks.c3 ? "true" : "false");
    out += std::string(",\"c4\":") + (cert.checks.c4 ? "true" : "false");
    out += std::string(",\"pass\":") + (cert.checks.pass ? "true" : "false");
    out += "}}";
    return out;
}

BetaCertificate certificate_from_json(const std::string& text, int n) {
    nlohmann::json j = nlohmann::json::parse(text);
    BetaCertificate cert;
    cert.beta = j.at("beta").get<double>();
    cert.rho = j.at("rho").get<double>();
    cert.mu = j.at("mu").get<double>();

    auto cut_from_members = [n](const nlohmann::json& arr) {
        std::uint64_t bits = 0;
        for (const auto& idx : arr) {
            const int i = idx.get<int>();
            if (i < 0 || i > n) {
                throw std::invalid_argument(
                    "certificate_from_json: cut index out of range");
            }
            bits |= 1ULL << i;
        }
        return CutSet(bits, n);
    };
    cert.u = cut_from_members(j.at("U"));

    const auto& xj = j.at("x");
    cert.x = Vec(static_cast<int>(xj.size()));
    for (std::size_t i = 0; i < xj.size(); ++i) {
        cert.x(static_cast<int>(i)) = xj[i].get<double>();
    }
    for (const auto& entry : j.at("cover")) {
        cert.y.entries[cut_from_members(entry.at("U"))] +=
            entry.at("y").get<double>();
    }
    cert.seed = j.at("seed").get<std::uint64_t>();
    cert.alpha_used = j.at("alpha_used").get<double>();
    if (j.contains("checks")) {
        const auto& c = j["checks"];
        cert.checks.c1_gap = c.value("c1_gap", 0.0);
        cert.checks.c2_cut = c.value("c2_cut", 0.0);
        cert.checks.c3_cover_residual = c.value("c3_cover_residual", 0.0);
        cert.checks.c3_cost = c.value("c3_cost", 0.0);
        cert.checks.c4_trace = c.value("c4_trace", 0.0);
        cert.checks.c4_dist_star = c.value("c4_dist_star", 0.0);
        cert.checks.c1 = c.value("c1", false);
        cert.checks.c2 = c.value("c2", false);
        cert.checks.c3 = c.value("c3", false);
        cert.checks.c4 = c.value("c4", false);
        cert.checks.pass = c.value("pass", false);
    }
    return cert;
}

}  // namespace grothcover
