#ifndef GROTHCOVER_CERTIFY_HPP
#define GROTHCOVER_CERTIFY_HPP

#include <cstdint>
#include <string>

#include "grothcover/cones.hpp"
#include "grothcover/cover.hpp"
#include "grothcover/relax.hpp"
#include "grothcover/rounding.hpp"

namespace grothcover {

enum class ScheduleCase { POLYHEDRAL, PSD };

/// Parameters derived from (β, α): τ = 1 − β/α, then
///   POLYHEDRAL: ε = σ = γ = τ/3, ϑ = 0      (α(1−τ/3)³ ≥ β)
///   PSD:        ε = σ = γ = τ/4, ϑ = τ/(4−τ) (α(1−τ/4)⁴ ≥ β)
struct ParameterSchedule {
    double tau = 0.0;
    double eps = 0.0;
    double sigma = 0.0;
    double gamma = 0.0;
    double bss = 0.0;  // sparsifier ϑ
};
ParameterSchedule parameter_schedule(double beta, double alpha,
                                     ScheduleCase sched_case);

/// Per-clause verification report; residuals are signed so that ≥ −tol means
/// the clause holds.
struct CertReport {
    double c1_gap = 0.0;            // |ρμ − ⟨W,Z⟩| (clause holds iff ≤ tol)
    double c2_cut = 0.0;            // q(W,s_U) − βρ
    double c3_cover_residual = 0.0; // lifted-order residual of Σ y S vs Z
    double c3_cost = 0.0;           // μ/β − ⟨1,y⟩
    double c4_trace = 0.0;          // ρ − (1−ε)… i.e. ρ − ⟨1,x⟩
    double c4_dist_star = 0.0;      // Dist* membership residual of Diag(x)−W
    bool c1 = false, c2 = false, c3 = false, c4 = false;
    bool pass = false;
};

/// The Def-2.2 tuple (ρ, μ, U, y, x) with β and the verification report.
struct BetaCertificate {
    double beta = 0.0;
    double rho = 0.0;
    double mu = 0.0;
    CutSet u{1, 0};
    Cover y;
    Vec x;
    std::uint64_t seed = 0;
    double alpha_used = 0.0;
    CertReport checks;
};

/// argmax of s_Uᵀ W s_U over the support; ties by lexicographically smallest
/// member set.
CutSet select_best_cut(const SymMatrix& w, const Cover& support);

enum class PipelineDirection { COVER, MAX };

struct PipelineOptions {
    double beta = 0.8;
    CoverMode mode = CoverMode::ADAPTIVE;
    std::uint64_t seed = 0;
    long long t_cap = 1000000;
    long long alpha_samples = 10000;
    int threads = 1;
    // Optional power-user overrides; negative means "use the schedule".
    double eps_override = -1.0;
    double sigma_override = -1.0;
    double gamma_override = -1.0;
};

struct PipelineResult {
    BetaCertificate cert;
    SymMatrix w_matrix = SymMatrix::zero(1);
    SymMatrix z_matrix = SymMatrix::zero(1);
    Vec paired_weights;      // w (cover direction) or z (max direction)
    ParameterSchedule schedule;
    AlphaEstimate alpha_estimate;
};

/// Full pipeline for CSP (polyhedral) cones: solve the perturbed relaxation
/// in the requested direction, sample a Grothendieck cover, select the best
/// cut, assemble the β-certificate and verify it.
PipelineResult run_pipeline(const ConeSpec& spec, const Vec& weights,
                            PipelineDirection dir, const PipelineOptions& opts);

/// Same pipeline for FULL_PSD cones (matrix-valued weights/demands); the
/// sampled cover is additionally sparsified.
PipelineResult run_pipeline(const ConeSpec& spec, const SymMatrix& weights,
                            PipelineDirection dir, const PipelineOptions& opts);

/// Independent auditor: recomputes every Def-2.2 clause from (W, Z, cert)
/// alone, sharing only the cones module with construction.
CertReport verify_certificate(const ConeSpec& spec, const SymMatrix& w,
                              const SymMatrix& z, const BetaCertificate& cert,
                              double tol = 1e-7);

/// Fixed-field-order certificate JSON with floats at 17 significant digits.
std::string certificate_to_json(const BetaCertificate& cert);
BetaCertificate certificate_from_json(const std::string& text, int n);

}  // namespace grothcover

#endif  // GROTHCOVER_CERTIFY_HPP
