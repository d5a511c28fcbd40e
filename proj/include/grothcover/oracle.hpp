#ifndef GROTHCOVER_ORACLE_HPP
#define GROTHCOVER_ORACLE_HPP

#include <optional>
#include <string>
#include <vector>

#include "grothcover/cones.hpp"
#include "grothcover/cover.hpp"
#include "grothcover/cutset.hpp"
#include "grothcover/instances.hpp"

namespace grothcover {

struct OracleResult {
    double value = 0.0;
    std::optional<CutSet> arg_cut;
    std::optional<Cover> arg_cover;
    std::string method;
};

/// Exact maxq(W) = max over canonical cuts U of s_Uᵀ W s_U, by Gray-code
/// enumeration of the 2^{m−1} canonical cuts. Requires m ≤ 24.
OracleResult brute_maxq(const ConeSpec& spec, const SymMatrix& w);

/// Exact fractional covering number for a CSP demand z: LP over all 2ⁿ
/// assignment columns, min ⟨1,y⟩ s.t. Σ_a y_a·val(a) ≥ z, y ≥ 0.
/// Requires n ≤ 14.
OracleResult exact_fevc(const CspInstance& inst);

/// Same LP with an explicit demand vector in place of inst.weights.
OracleResult exact_fevc(const CspInstance& inst, const Vec& z);

enum class RowSense { LE, GE, EQ };

enum class LpStatus { OPTIMAL, INFEASIBLE, UNBOUNDED };

struct LpResult {
    LpStatus status = LpStatus::OPTIMAL;
    double value = 0.0;
    Vec x;       // primal solution
    Vec y;       // dual multipliers per row
    double complementarity = 0.0;  // worst complementary-slackness residual
    double duality_gap = 0.0;
};

/// Dense two-phase simplex with Bland's anti-cycling rule:
///   min cᵀx  s.t.  row_i · x  (sense_i)  b_i,  x ≥ 0.
LpResult lp_solve(const Mat& a, const Vec& b, const Vec& c,
                  const std::vector<RowSense>& senses);

}  // namespace grothcover

#endif  // GROTHCOVER_ORACLE_HPP
