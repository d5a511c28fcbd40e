#include "grothcover/cutset.hpp"

#include <sstream>
#include <stdexcept>

namespace grothcover {

CutSet::CutSet(std::uint64_t member_bits, int n) : n_(n) {
    if (n < 0 || n > 62) {
        throw std::invalid_argument("CutSet: n out of range [0,62]");
    }
    const std::uint64_t universe =
        (n + 1 == 64) ? ~0ULL : ((1ULL << (n + 1)) - 1);
    if (member_bits & ~universe) {
        throw std::invalid_argument("CutSet: member outside {0} ∪ [n]");
    }
    bits_ = member_bits;
    if (!(bits_ & 1ULL)) {
        bits_ = (~bits_) & universe;  // canonicalize: complement so 0 ∈ U
    }
}

CutSet CutSet::from_assignment(const std::vector<bool>& a) {
    std::uint64_t bits = 1;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i]) {
            bits |= 1ULL << (i + 1);
        }
    }
    return CutSet(bits, static_cast<int>(a.size()));
}

std::vector<bool> CutSet::assignment() const {
    std::vector<bool> a(n_);
    for (int i = 1; i <= n_; ++i) {
        a[i - 1] = contains(i);
    }
    return a;
}

std::vector<int> CutSet::members() const {
    std::vector<int> out;
    for (int i = 0; i <= n_; ++i) {
        if (contains(i)) {
            out.push_back(i);
        }
    }
    return out;
}

bool CutSet::operator<(const CutSet& o) const {
    if (n_ != o.n_) {
        return n_ < o.n_;
    }
    return members() < o.members();
}

std::string CutSet::to_string() const {
    std::ostringstream os;
    os << '{';
    bool first = true;
    for (int m : members()) {
        if (!first) {
            os << ',';
        }
        os << m;
        first = false;
    }
    os << '}';
    return os.str();
}

}  // namespace grothcover
