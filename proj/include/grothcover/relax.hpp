#ifndef GROTHCOVER_RELAX_HPP
#define GROTHCOVER_RELAX_HPP

#include <optional>
#include <vector>

#include "grothcover/cones.hpp"
#include "grothcover/splitting.hpp"

namespace grothcover {

struct SolverConfig {
    double eps = 1e-3;          // perturbation ε ∈ (0,1)
    double sigma_budget = 0.05; // allowed relative duality gap σ ∈ (0,1)
    double tol = 1e-9;          // feasibility tolerance target
    int max_iter = 50000;

    void validate() const;
};

/// (μ, Y) feasible for the perturbed covering relaxation:
/// diag(Y) = μ·1 exactly, Y − με·I ∈ Dist, and the covering constraint for
/// the given target holds (A*(Y) ≥ z, or Y ⪰ Z).
struct DualWitness {
    double mu = 0.0;
    SymMatrix y = SymMatrix::zero(1);
};

/// (ρ, x) feasible for the perturbed maximization dual:
/// Diag(x) − W ∈ Dist* and ρ ≥ (1−ε)⟨1,x⟩ + ε·tr(W).
/// tri_lambda is the constructive multiplier for the Dist* decomposition
/// Diag(x) − W − Σ λ_k Δ_k ⪰ 0 (empty when Dist is plain PSD).
struct PrimalWitness {
    double rho = 0.0;
    Vec x;
    std::vector<TriangleTerm> tri_terms;
    std::vector<double> tri_lambda;
};

/// Output of either solve direction: exactly-feasible witnesses for the
/// membership ((ρ̄,x),(μ̄,Y)) of (W, Z) in N_{ε,σ}, with Z := Y/μ̄-scaled
/// target and, for polyhedral cones, the vector forms w and z := A*(Z).
struct RelaxSolution {
    DualWitness dual;     // (μ̄, Y); Z := Y
    PrimalWitness primal; // (ρ̄, x)
    SymMatrix w_matrix = SymMatrix::zero(1); // W
    SymMatrix z_matrix = SymMatrix::zero(1); // Z (= dual.y)
    std::optional<Vec> w_vector;  // polyhedral only
    std::optional<Vec> z_vector;  // polyhedral only: A*(Z)
    double pairing = 0.0;         // ⟨W, Z⟩
    double gap_sigma = 0.0;       // 1 − ⟨W,Z⟩/(ρ̄·μ̄), charged against σ
    int iterations = 0;
};

/// Covering direction: given a demand (z ≥ 0, polyhedral; or Z ∈ Cov*,
/// FULL_PSD), nearly solves ν°_ε and returns witnesses with ρ̄ = 1 and the
/// paired maximization weights w (W := A(w)).
RelaxSolution solve_nu_polar_eps(const ConeSpec& spec, const Vec& z,
                                 const SolverConfig& cfg);
RelaxSolution solve_nu_polar_eps(const ConeSpec& spec, const SymMatrix& z_mat,
                                 const SolverConfig& cfg);

/// Maximization direction: given weights (w ≥ 0, polyhedral; or W ∈ Cov,
/// FULL_PSD), nearly solves ν_ε and returns witnesses with μ̄ = 1 and the
/// paired covering target Z := (1−ε)·Y* + ε·I.
RelaxSolution solve_nu_eps(const ConeSpec& spec, const Vec& w,
                           const SolverConfig& cfg);
RelaxSolution solve_nu_eps(const ConeSpec& spec, const SymMatrix& w_mat,
                           const SolverConfig& cfg);

/// Unperturbed SDP value ν(W) = max{⟨W,Y⟩ : Y ∈ Dist, diag(Y) = 1} together
/// with the optimizer; used by oracles/tests and internally by solve_nu_eps.
struct NuSolution {
    double value = 0.0;
    SymMatrix y = SymMatrix::zero(1);  // maximizer, diag = 1
    Vec x;                             // dual: ν = ⟨1,x⟩, Diag(x) ⪰_Dist* W
    std::vector<TriangleTerm> tri_terms;
    std::vector<double> tri_lambda;
    int iterations = 0;
};
NuSolution solve_nu(const ConeSpec& spec, const SymMatrix& w,
                    const SolverConfig& cfg);

/// Raw (possibly slightly infeasible) solver output accepted by
/// repair_witness.
struct RawWitnesses {
    double mu = 0.0;
    Mat y;
    double rho = 0.0;
    Vec x;
    std::vector<TriangleTerm> tri_terms;
    std::vector<double> tri_lambda;
};

/// Shifts Y ← Y + δI, μ ← μ + δ (and x ← x + δ'·1) with the smallest
/// nonnegative shifts clearing all residuals against the given target; the
/// induced slack is charged to σ and the call fails when the charged gap
/// exceeds cfg.sigma_budget.
struct RepairedWitnesses {
    DualWitness dual;
    PrimalWitness primal;
    double charged_sigma = 0.0;
};
RepairedWitnesses repair_witness(const ConeSpec& spec, const RawWitnesses& raw,
                                 const SymMatrix& w_matrix,
                                 const std::optional<Vec>& z_target,
                                 const std::optional<SymMatrix>& z_mat_target,
                                 const SolverConfig& cfg);

/// Constructive Dist* membership distance for D := Diag(x) − W: returns an
/// approximate max over λ ≥ 0 of λ_min(D − Σ λ_k Δ_k)… i.e. the best PSD
/// residual found. For dist PSD this is simply λ_min(D). Used by independent
/// certificate verification.
double dist_star_residual(const ConeSpec& spec, const Mat& d, int max_iter = 4000);

}  // namespace grothcover

#endif  // GROTHCOVER_RELAX_HPP
