#ifndef GROTHCOVER_CUTSET_HPP
#define GROTHCOVER_CUTSET_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace grothcover {

/// Subset U of {0} ∪ [n] identifying a cut / Boolean assignment.
///
/// Index 0 is the homogenization coordinate. The canonical representative
/// always contains 0: the sign tensor S_U is invariant under complementation,
/// so each assignment has a unique canonical cut set. Variable i is assigned
/// true exactly when i ∈ U \ {0}.
class CutSet {
public:
    /// Canonical cut over {0} ∪ [n]; complements the set if 0 is absent.
    CutSet(std::uint64_t member_bits, int n);

    /// Canonical cut from an assignment: U = {0} ∪ {i : a_i true}.
    static CutSet from_assignment(const std::vector<bool>& a);

    int n() const { return n_; }
    int dim() const { return n_ + 1; }  // matrix order m = n + 1

    bool contains(int idx) const { return (bits_ >> idx) & 1ULL; }

    /// Sign vector entry: +1 for members, -1 otherwise.
    double sign(int idx) const { return contains(idx) ? 1.0 : -1.0; }

    /// Assignment bits for variables 1..n (index 0 of the result = variable 1).
    std::vector<bool> assignment() const;

    /// Sorted member list (always starts with 0).
    std::vector<int> members() const;

    std::uint64_t bits() const { return bits_; }

    bool operator==(const CutSet& o) const {
        return bits_ == o.bits_ && n_ == o.n_;
    }

    /// Orders by lexicographic comparison of the sorted member lists,
    /// the deterministic tie-break order used throughout.
    bool operator<(const CutSet& o) const;

    std::string to_string() const;

private:
    std::uint64_t bits_ = 1;
    int n_ = 0;
};

}  // namespace grothcover

#endif  // GROTHCOVER_CUTSET_HPP
