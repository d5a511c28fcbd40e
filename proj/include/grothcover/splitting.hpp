#ifndef GROTHCOVER_SPLITTING_HPP
#define GROTHCOVER_SPLITTING_HPP

#include <vector>

#include "grothcover/cones.hpp"

namespace grothcover {

/// Standard-form conic program
///     min ⟨c, x⟩   s.t.   A x = b,   x ∈ K,
/// where K is a product of dense PSD blocks (in scaled svec coordinates) and
/// a nonnegative orthant block, laid out in that order inside x.
///
/// Solved with a two-block operator-splitting scheme on the dual
///     max ⟨b, y⟩   s.t.   Aᵀy + s = c,   s ∈ K,
/// alternating an affine solve in y, a cone projection in s, and a multiplier
/// update that keeps the primal iterate x inside K at every step.
struct ConicProblem {
    std::vector<int> psd_dims;  // orders of the PSD blocks
    int nonneg_dim = 0;         // size of the trailing nonnegative block
    Mat a;                      // p × N constraint matrix
    Vec b;                      // p
    Vec c;                      // N

    int var_dim() const;
};

struct SplitConfig {
    double tol = 1e-10;   // relative primal/dual residual and gap target
    int max_iter = 50000;
    double t0 = 1.0;      // initial penalty
    int check_every = 25;
};

struct SplitResult {
    Vec x;  // primal point, in K by construction
    Vec y;  // equality multipliers
    Vec s;  // dual slack, in K by construction
    double pobj = 0.0;
    double dobj = 0.0;
    double pinf = 0.0;  // ‖Ax − b‖ / (1 + ‖b‖)
    double dinf = 0.0;  // ‖Aᵀy + s − c‖ / (1 + ‖c‖)
    double gap = 0.0;   // |⟨c,x⟩ − ⟨b,y⟩| / (1 + |⟨c,x⟩| + |⟨b,y⟩|)
    int iters = 0;
    bool converged = false;
};

SplitResult solve_conic(const ConicProblem& p, const SplitConfig& cfg,
                        const SplitResult* warm = nullptr);

/// Scaled symmetric vectorization: off-diagonal entries carry √2 so that
/// ⟨A, B⟩ = svec(A)ᵀ svec(B).
int svec_dim(int m);
Vec svec(const Mat& m);
Mat unsvec(const Vec& v, int m);

}  // namespace grothcover

#endif  // GROTHCOVER_SPLITTING_HPP
