#ifndef GROTHCOVER_INSTANCES_HPP
#define GROTHCOVER_INSTANCES_HPP

#include <array>
#include <string>
#include <vector>

#include "grothcover/cones.hpp"
#include "grothcover/cutset.hpp"

namespace grothcover {

/// Binary predicate template as a truth table over (x_i, x_j) ∈ {F,T}².
/// Table index = 2·[x_i] + [x_j].
struct PredicateTemplate {
    std::array<bool, 4> truth_table{};

    bool eval(bool xi, bool xj) const {
        return truth_table[(xi ? 2 : 0) + (xj ? 1 : 0)];
    }
    bool identically_false() const {
        return !(truth_table[0] || truth_table[1] || truth_table[2] ||
                 truth_table[3]);
    }

    /// Template for op applied to literals (neg_i ? ¬x_i : x_i) and
    /// (neg_j ? ¬x_j : x_j). op ∈ {and, or, xor, implies, lit};
    /// "lit" uses the first literal alone.
    static PredicateTemplate from_op(const std::string& op, bool neg_i,
                                     bool neg_j);
};

/// A weighted predicate applied to a variable pair (i, j), 1-based; i = j is
/// permitted (unary predicates via the diagonal Δ case).
struct Constraint {
    PredicateTemplate tmpl;
    int i = 1;
    int j = 1;
};

/// Boolean 2-CSP instance. `weights` plays the role of w (maximization) or
/// z (covering demand) depending on the pipeline direction.
struct CspInstance {
    int n = 0;
    std::vector<Constraint> constraints;
    std::vector<double> weights;

    int d() const { return static_cast<int>(constraints.size()); }

    /// Throws on inconsistent sizes, out-of-range indices, negative weights,
    /// identically-false templates, or d = 0.
    void validate() const;

    Vec weight_vector() const;
};

/// Δ_{±i,±j} as a dense (n+1)×(n+1) matrix; sign_i, sign_j ∈ {−1,+1}.
Mat delta_matrix(int sign_i, int i, int sign_j, int j, int n);

/// A_c := ¼ Σ over true truth-table cells of the matching Δ matrix, so that
/// ⟨A_c, S_U⟩ is exactly the 0/1 satisfaction indicator.
SparseSym constraint_matrix(const Constraint& c, int n);

/// Truth-table evaluation on an assignment of all n variables.
bool satisfied(const Constraint& c, const std::vector<bool>& a);

enum class ProblemKind { MAXCUT, MAXDICUT, MAX2SAT, CSP };

/// One line of raw input: an edge/arc/clause/predicate with a weight.
struct RawItem {
    int i = 1;
    int j = 1;
    bool neg_i = false;
    bool neg_j = false;
    std::string op = "and";
    double weight = 1.0;
};

/// Encodes a problem into the matrix framework: maxcut → xor, maxdicut →
/// x_i ∧ ¬x_j, max2sat → disjunction of the given literals, csp → op as given.
CspInstance encode_problem(ProblemKind kind, const std::vector<RawItem>& raw,
                           int n);

/// The CSP cone pair: Dist = PSD ∩ triangle, Cov = polyhedral image of the
/// constraint map, κ = ¼ (every non-false predicate is satisfied by at least
/// a quarter of the assignments).
ConeSpec build_cone_spec(const CspInstance& inst);

ProblemKind problem_kind_from_string(const std::string& s);
std::string to_string(ProblemKind k);

/// True when every constraint is an xor (cut) predicate; used to decide
/// whether the GW claimed rounding constant applies.
bool all_xor(const CspInstance& inst);

/// Instance JSON: {"kind": "...", "n": int, "items": [{"i","j","neg_i",
/// "neg_j","op","weight"}]}. For maxcut/maxdicut kinds "op"/"neg_*" may be
/// omitted.
CspInstance parse_instance_json(const std::string& text);

/// Graph shortcut format: text lines "i j w"; kind supplied by the caller.
CspInstance parse_instance_text(const std::string& text, ProblemKind kind);

}  // namespace grothcover

#endif  // GROTHCOVER_INSTANCES_HPP
