#include "grothcover/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace grothcover {

namespace {

constexpr double kPivotEps = 1e-10;

/// Dense two-phase simplex state. Column layout: structural x (n), then one
/// slack/surplus per inequality row, then artificials; last tableau column is
/// the right-hand side. Row m = phase-2 cost, row m+1 = phase-1 cost.
struct Tableau {
    Mat t;
    std::vector<int> basis;          // basic column per row
    std::vector<int> slack_col;      // per row, −1 if none
    std::vector<int> art_col;        // per row, −1 if none
    int rows = 0;
    int cols = 0;  // total columns excluding rhs
    int nart = 0;

    void pivot(int r, int s) {
        t.row(r) /= t(r, s);
        for (int i = 0; i < t.rows(); ++i) {
            if (i != r && std::abs(t(i, s)) > 0.0) {
                t.row(i) -= t(i, s) * t.row(r);
            }
        }
        basis[static_cast<std::size_t>(r)] = s;
    }

    /// Bland's rule simplex on the given cost row; artificials are blocked
    /// from entering in phase 2. Returns false on unboundedness.
    bool run(int cost_row, bool block_artificials) {
        for (;;) {
            int enter = -1;
            for (int j = 0; j < cols; ++j) {
                if (block_artificials && j >= cols - nart) {
                    break;
                }
                if (t(cost_row, j) < -kPivotEps) {
                    enter = j;
                    break;  // Bland: smallest eligible index
                }
            }
            if (enter < 0) {
                return true;
            }
            int leave = -1;
            double best_ratio = 0.0;
            for (int i = 0; i < rows; ++i) {
                if (t(i, enter) <= kPivotEps) {
                    continue;
                }
                const double ratio = t(i, cols) / t(i, enter);
                if (leave < 0 || ratio < best_ratio - kPivotEps ||
                    (ratio < best_ratio + kPivotEps &&
                     basis[static_cast<std::size_t>(i)] <
                         basis[static_cast<std::size_t>(leave)])) {
                    leave = i;
                    best_ratio = ratio;
                }
            }
            if (leave < 0) {
                return false;
            }
            pivot(leave, enter);
        }
    }
};

}  // namespace

LpResult lp_solve(const Mat& a, const Vec& b, const Vec& c,
                  const std::vector<RowSense>& senses) {
    const int m = static_cast<int>(a.rows());
    const int n = static_cast<int>(a.cols());
    if (b.size() != m || c.size() != n ||
        senses.size() != static_cast<std::size_t>(m)) {
        throw std::invalid_argument("lp_solve: inconsistent dimensions");
    }

    // Orient every row so that its right-hand side is nonnegative.
    Mat arows = a;
    Vec brhs = b;
    std::vector<RowSense> sense = senses;
    std::vector<double> row_flip(m, 1.0);
    for (int i = 0; i < m; ++i) {
        if (brhs(i) < 0.0) {
            arows.row(i) *= -1.0;
            brhs(i) *= -1.0;
            row_flip[static_cast<std::size_t>(i)] = -1.0;
            if (sense[static_cast<std::size_t>(i)] == RowSense::LE) {
                sense[static_cast<std::size_t>(i)] = RowSense::GE;
            } else if (sense[static_cast<std::size_t>(i)] == RowSense::GE) {
                sense[static_cast<std::size_t>(i)] = RowSense::LE;
            }
        }
    }

    int nslack = 0;
    int nart = 0;
    for (int i = 0; i < m; ++i) {
        if (sense[static_cast<std::size_t>(i)] != RowSense::EQ) {
            ++nslack;
        }
        if (sense[static_cast<std::size_t>(i)] != RowSense::LE) {
            ++nart;
        }
    }

    Tableau tb;
    tb.rows = m;
    tb.cols = n + nslack + nart;
    tb.nart = nart;
    tb.t = Mat::Zero(m + 2, tb.cols + 1);
    tb.basis.assign(static_cast<std::size_t>(m), -1);
    tb.slack_col.assign(static_cast<std::size_t>(m), -1);
    tb.art_col.assign(static_cast<std::size_t>(m), -1);

    tb.t.block(0, 0, m, n) = arows;
    tb.t.block(0, tb.cols, m, 1) = brhs;
    int sc = n;
    int ac = n + nslack;
    for (int i = 0; i < m; ++i) {
        const RowSense s = sense[static_cast<std::size_t>(i)];
        if (s != RowSense::EQ) {
            tb.t(i, sc) = (s == RowSense::LE) ? 1.0 : -1.0;
            tb.slack_col[static_cast<std::size_t>(i)] = sc;
            ++sc;
        }
        if (s == RowSense::LE) {
            tb.basis[static_cast<std::size_t>(i)] =
                tb.slack_col[static_cast<std::size_t>(i)];
        } else {
            tb.t(i, ac) = 1.0;
            tb.art_col[static_cast<std::size_t>(i)] = ac;
            tb.basis[static_cast<std::size_t>(i)] = ac;
            ++ac;
        }
    }

    const int p2 = m;      // phase-2 cost row
    const int p1 = m + 1;  // phase-1 cost row
    tb.t.block(p2, 0, 1, n) = c.transpose();
    for (int i = 0; i < m; ++i) {
        const int j = tb.art_col[static_cast<std::size_t>(i)];
        if (j >= 0) {
            tb.t(p1, j) = 1.0;
        }
    }
    // Reduce both cost rows against the initial basis (artificials basic).
    for (int i = 0; i < m; ++i) {
        const int j = tb.art_col[static_cast<std::size_t>(i)];
        if (j >= 0) {
            tb.t.row(p1) -= tb.t.row(i);
        }
    }

    LpResult res;
    if (nart > 0) {
        if (!tb.run(p1, false)) {
            throw std::runtime_error("lp_solve: phase-1 unbounded (internal)");
        }
        if (-tb.t(p1, tb.cols) > 1e-7) {
            res.status = LpStatus::INFEASIBLE;
            return res;
        }
        // Drive any zero-level artificial out of the basis where possible.
        for (int i = 0; i < m; ++i) {
            if (tb.basis[static_cast<std::size_t>(i)] >= tb.cols - nart) {
                for (int j = 0; j < tb.cols - nart; ++j) {
                    if (std::abs(tb.t(i, j)) > kPivotEps) {
                        tb.pivot(i, j);
                        break;
                    }
                }
            }
        }
    }
    if (!tb.run(p2, true)) {
        res.status = LpStatus::UNBOUNDED;
        return res;
    }

    res.status = LpStatus::OPTIMAL;
    res.value = -tb.t(p2, tb.cols);
    res.x = Vec::Zero(n);
    for (int i = 0; i < m; ++i) {
        const int j = tb.basis[static_cast<std::size_t>(i)];
        if (j < n) {
            res.x(j) = tb.t(i, tb.cols);
        }
    }
    // Duals from the reduced costs of the identity-forming columns: for a
    // column with original coefficient e_i·coef and cost 0, the reduced cost
    // equals −coef·y_i.
    res.y = Vec::Zero(m);
    for (int i = 0; i < m; ++i) {
        const int aj = tb.art_col[static_cast<std::size_t>(i)];
        const int sj = tb.slack_col[static_cast<std::size_t>(i)];
        double yi = 0.0;
        if (aj >= 0) {
            yi = -tb.t(p2, aj);
        } else if (sj >= 0) {
            yi = (sense[static_cast<std::size_t>(i)] == RowSense::LE)
                     ? -tb.t(p2, sj)
                     : tb.t(p2, sj);
        }
        res.y(i) = row_flip[static_cast<std::size_t>(i)] * yi;
    }

    // Certification: complementary slackness and duality gap.
    double comp = 0.0;
    for (int i = 0; i < m; ++i) {
        const double act = a.row(i).dot(res.x) - b(i);
        comp = std::max(comp, std::abs(res.y(i) * act));
    }
    const Vec red = c - a.transpose() * res.y;
    for (int j = 0; j < n; ++j) {
        comp = std::max(comp, std::abs(res.x(j) * red(j)));
    }
    res.complementarity = comp;
    res.duality_gap = std::abs(res.value - res.y.dot(b));
    return res;
}

OracleResult brute_maxq(const ConeSpec& spec, const SymMatrix& w) {
    const int m = spec.dim();
    if (w.dim() != m) {
        throw std::invalid_argument("brute_maxq: dimension mismatch");
    }
    if (m > 24) {
        throw std::invalid_argument("brute_maxq: m > 24 not enumerable");
    }
    const Mat& wm = w.mat();

    // Gray-code walk over the canonical cuts (0 ∈ U): flipping variable i
    // updates q = sᵀWs in O(m).
    Vec s = -Vec::Ones(m);
    s(0) = 1.0;
    Vec r = wm * s;
    double q = s.dot(r);

    double best = q;
    std::uint64_t best_bits = 1;
    std::uint64_t gray_bits = 0;  // bits over variables 1..m−1

    const std::uint64_t count = (m > 1) ? (1ULL << (m - 1)) : 1ULL;
    for (std::uint64_t k = 1; k < count; ++k) {
        const int i = __builtin_ctzll(k) + 1;
        q += -4.0 * s(i) * r(i) + 4.0 * wm(i, i);
        s(i) = -s(i);
        r += 2.0 * s(i) * wm.col(i);
        gray_bits ^= 1ULL << i;
        if (q > best) {
            best = q;
            best_bits = gray_bits | 1ULL;
        }
    }

    OracleResult out;
    out.value = best;
    out.arg_cut = CutSet(best_bits, m - 1);
    out.method = "brute_maxq";
    return out;
}

OracleResult exact_fevc(const CspInstance& inst) {
    return exact_fevc(inst, inst.weight_vector());
}

OracleResult exact_fevc(const CspInstance& inst, const Vec& z) {
    inst.validate();
    const int n = inst.n;
    const int d = inst.d();
    if (z.size() != d) {
        throw std::invalid_argument("exact_fevc: demand dimension mismatch");
    }
    if (n > 14) {
        throw std::invalid_argument("exact_fevc: n > 14 not enumerable");
    }
    OracleResult out;
    out.method = "exact_fevc";
    if (z.maxCoeff() <= 0.0) {
        out.value = 0.0;
        out.arg_cover = Cover{};
        return out;
    }

    const std::uint64_t cols = 1ULL << n;
    Mat v(d, static_cast<int>(cols));
    for (std::uint64_t a = 0; a < cols; ++a) {
        std::vector<bool> bits(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            bits[static_cast<std::size_t>(i)] = (a >> i) & 1ULL;
        }
        for (int f = 0; f < d; ++f) {
            v(f, static_cast<int>(a)) =
                satisfied(inst.constraints[static_cast<std::size_t>(f)], bits)
                    ? 1.0
                    : 0.0;
        }
    }

    const Vec ones = Vec::Ones(static_cast<int>(cols));
    const LpResult lp =
        lp_solve(v, z, ones, std::vector<RowSense>(static_cast<std::size_t>(d),
                                                   RowSense::GE));
    if (lp.status != LpStatus::OPTIMAL) {
        throw std::runtime_error("exact_fevc: covering LP not optimal");
    }
    out.value = lp.value;
    Cover cover;
    cover.meta.mode = "oracle";
    for (std::uint64_t a = 0; a < cols; ++a) {
        const double ya = lp.x(static_cast<int>(a));
        if (ya > 1e-12) {
            cover.entries[CutSet((a << 1) | 1ULL, n)] += ya;
        }
    }
    out.arg_cover = std::move(cover);
    return out;
}

}  // namespace grothcover
