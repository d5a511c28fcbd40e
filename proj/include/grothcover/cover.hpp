#ifndef GROTHCOVER_COVER_HPP
#define GROTHCOVER_COVER_HPP

#include <cstdint>
#include <map>
#include <string>

#include "grothcover/cones.hpp"
#include "grothcover/cutset.hpp"
#include "grothcover/relax.hpp"
#include "grothcover/rounding.hpp"

namespace grothcover {

struct CoverMeta {
    long long t_used = 0;
    double gamma = 0.0;
    double alpha_used = 0.0;
    std::string mode;
};

/// Sparse nonnegative weighting of canonical cut sets (a tensor sign cover).
struct Cover {
    std::map<CutSet, double> entries;
    CoverMeta meta;

    double total_weight() const;
    int support() const { return static_cast<int>(entries.size()); }
    Mat sum_tensor(int m) const;  // Σ y_U S_U
};

enum class BudgetRegime { POLYHEDRAL, PSD_BERNSTEIN, PSD_NESTEROV };

struct SampleBudget {
    long long t = 0;
    double gamma = 0.0;
    BudgetRegime regime = BudgetRegime::POLYHEDRAL;
};

struct BudgetParams {
    int n = 0;       // variable count
    int d = 0;       // constraint count (POLYHEDRAL)
    double gamma = 0.0;
    double eps = 0.0;
    double alpha = 0.0;
    double kappa = 0.0;  // POLYHEDRAL
};

/// Exact ceiling formulas from the concentration proofs:
///   POLYHEDRAL:    T = ⌈2(log d + log n)/(γ²·α·ε·κ)⌉
///   PSD_BERNSTEIN: T = max{⌈8(n/ε)²log(2n)/(αγ)²⌉, ⌈16(n/ε)log(2n)/(3αγ)⌉}
///   PSD_NESTEROV:  T = ⌈2π·log(2n)/(γ²·ξ)⌉ with ξ = ε/n
SampleBudget sample_budget(BudgetRegime regime, const BudgetParams& params);

enum class CoverMode { THEORETICAL, ADAPTIVE };

struct BuildCoverOptions {
    CoverMode mode = CoverMode::ADAPTIVE;
    SampleBudget budget;          // THEORETICAL: exact T to draw
    double beta_target = 0.0;     // ADAPTIVE stop: cost ≤ mu_cert/β
    double mu_cert = -1.0;        // certificate-side μ; defaults to witness μ
    long long t_cap = 1000000;    // ADAPTIVE sample cap
    std::uint64_t seed = 0;
    int threads = 1;
    double tol = 1e-9;
};

/// Rounds witness.Y repeatedly and assembles a cover for the target Z :=
/// witness.Y. THEORETICAL: y_U = μ·count_U/((1−γ)·α_used·T). ADAPTIVE:
/// batches of max(n²,1024); after each batch the smallest feasible scale c is
/// computed directly from residuals and sampling stops once
/// c·μ·Σ(count/T) ≤ mu_cert/β.
Cover build_cover(const ConeSpec& spec, const RoundingSpec& r,
                  const DualWitness& witness, const BuildCoverOptions& opts);

struct FeasReport {
    bool feasible = false;
    double worst_residual = 0.0;
};

/// Residual of Σ y_U S_U against a vector demand z (POLYHEDRAL)…
FeasReport check_cover_feasible(const ConeSpec& spec, const Cover& cover,
                                const Vec& z, double tol = 1e-8);
/// …or against a matrix target Z in the lifted order.
FeasReport check_cover_feasible(const ConeSpec& spec, const Cover& cover,
                                const SymMatrix& z, double tol = 1e-8);

}  // namespace grothcover

#endif  // GROTHCOVER_COVER_HPP
