#ifndef GROTHCOVER_SPARSIFY_HPP
#define GROTHCOVER_SPARSIFY_HPP

#include "grothcover/cones.hpp"
#include "grothcover/cover.hpp"

namespace grothcover {

struct SparsifyConfig {
    double eps_s = 0.3;  // ϑ ∈ (0,1): allowed cost inflation
    double tol = 1e-8;
};

/// Documented support constant: output support is at most
/// kSparsifySupportConst·m/eps_s².
constexpr double kSparsifySupportConst = 40.0;

/// Deterministic support reduction of a feasible PSD cover
/// (Σ y_U S_U ⪰ Z − tol·I, Z PSD). Contract on success:
///   (a) support(ȳ) ≤ 40·m/eps_s² and support(ȳ) ⊆ support(y),
///   (b) ⟨1,ȳ⟩ ≤ (1+eps_s)·⟨1,y⟩,
///   (c) Σ ȳ_U S_U ⪰ Z − tol·I.
/// Covers already within the support bound for which barrier selection
/// cannot shrink the support are returned unchanged.
Cover sparsify_cover(const Cover& cover, const SymMatrix& z,
                     const SparsifyConfig& cfg);

}  // namespace grothcover

#endif  // GROTHCOVER_SPARSIFY_HPP
