#ifndef GROTHCOVER_ROUNDING_HPP
#define GROTHCOVER_ROUNDING_HPP

#include <optional>
#include <vector>

#include "grothcover/cones.hpp"
#include "grothcover/cutset.hpp"
#include "grothcover/rng.hpp"

namespace grothcover {

/// Gram factor of a correlation matrix Ȳ = Y/μ: B with BᵀB = Ȳ.
struct GramFactor {
    Mat b;          // columns b_i, unit norm within 1e−6
    double mu = 1.0;

    int dim() const { return static_cast<int>(b.cols()); }
};

enum class RoundingKind { GW_HYPERPLANE };

/// Rounding family descriptor. claimed_alpha is the analytic rounding
/// constant when one is known for the cone at hand (GW on pure cut
/// constraints: 0.87856); otherwise empirical estimation is used.
struct RoundingSpec {
    RoundingKind kind = RoundingKind::GW_HYPERPLANE;
    std::optional<double> claimed_alpha;
};

/// The GW worst-angle constant min over t of (arccos t/π)/((1−t)/2).
constexpr double kGwAlpha = 0.87856;

/// Factor Y/μ (must be PSD with unit diagonal within tol).
GramFactor gram_factor(const SymMatrix& y, double mu, double tol = 1e-8);

/// One GW hyperplane sample: U = {i : ⟨b_i, g⟩ ≥ 0}, canonicalized to 0 ∈ U.
CutSet gw_sample(const GramFactor& f, RngStream& rng);

struct AlphaEstimate {
    double alpha_hat = 0.0;
    double confidence_halfwidth = 0.0;      // normal approximation, 1.96σ
    std::vector<double> per_constraint_ratios;  // POLYHEDRAL only
    std::vector<int> excluded_constraints;      // ⟨A_f, Ȳ⟩ ≤ tol
    long long samples = 0;
};

/// Empirical rounding constant for the FIXED correlation matrix Ȳ = Y/μ:
/// min over constraints of P̂(f satisfied)/⟨A_f, Ȳ⟩ (POLYHEDRAL), or the
/// smallest generalized eigenvalue of Ê against Ȳ on Ȳ's range (FULL_PSD).
AlphaEstimate estimate_rounding_constant(const ConeSpec& spec,
                                         const RoundingSpec& r,
                                         const SymMatrix& y_bar,
                                         long long samples, RngStream& rng);

/// Grid + golden-section minimization of (arccos t/π)/((1−t)/2) on [−1,1];
/// used to validate kGwAlpha.
double gw_constant_minimize(int grid_points = 10000);

}  // namespace grothcover

#endif  // GROTHCOVER_ROUNDING_HPP
