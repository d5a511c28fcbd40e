#include "grothcover/cones.hpp"

#include <algorithm>
#include <stdexcept>

namespace grothcover {

SymMatrix::SymMatrix(const Mat& m, double asym_tol) {
    if (m.rows() != m.cols()) {
        throw std::invalid_argument("SymMatrix: not square");
    }
    const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if (asym > asym_tol * scale) {
        throw std::invalid_argument("SymMatrix: asymmetry above tolerance");
    }
    m_ = 0.5 * (m + m.transpose());
}

SymMatrix SymMatrix::identity(int dim) {
    return SymMatrix(Mat::Identity(dim, dim));
}

SymMatrix SymMatrix::zero(int dim) { return SymMatrix(Mat::Zero(dim, dim)); }

void SparseSym::add(int r, int c, double v) {
    if (r > c) {
        std::swap(r, c);
    }
    for (auto& e : entries) {
        if (e.r == r && e.c == c) {
            e.v += v;
            return;
        }
    }
    entries.push_back({r, c, v});
}

double SparseSym::inner(const Mat& y) const {
    double acc = 0.0;
    for (const auto& e : entries) {
        acc += (e.r == e.c) ? e.v * y(e.r, e.c) : 2.0 * e.v * y(e.r, e.c);
    }
    return acc;
}

double SparseSym::inner_cut(const CutSet& u) const {
    double acc = 0.0;
    for (const auto& e : entries) {
        const double s = u.sign(e.r) * u.sign(e.c);
        acc += (e.r == e.c) ? e.v * s : 2.0 * e.v * s;
    }
    return acc;
}

double SparseSym::trace() const {
    double acc = 0.0;
    for (const auto& e : entries) {
        if (e.r == e.c) {
            acc += e.v;
        }
    }
    return acc;
}

Mat SparseSym::dense() const {
    Mat m = Mat::Zero(dim, dim);
    add_to(m, 1.0);
    return m;
}

void SparseSym::add_to(Mat& m, double coef) const {
    for (const auto& e : entries) {
        m(e.r, e.c) += coef * e.v;
        if (e.r != e.c) {
            m(e.c, e.r) += coef * e.v;
        }
    }
}

bool SparseSym::is_zero(double tol) const {
    for (const auto& e : entries) {
        if (std::abs(e.v) > tol) {
            return false;
        }
    }
    return true;
}

ConeSpec ConeSpec::full_psd(int dim, DistKind dist) {
    if (dim < 1) {
        throw std::invalid_argument("ConeSpec: dim must be positive");
    }
    ConeSpec s;
    s.dist_ = dist;
    s.cov_ = CovKind::FULL_PSD;
    s.dim_ = dim;
    return s;
}

ConeSpec ConeSpec::polyhedral(int dim, std::vector<SparseSym> a_matrices,
                              double kappa, DistKind dist) {
    if (dim < 1) {
        throw std::invalid_argument("ConeSpec: dim must be positive");
    }
    if (a_matrices.empty()) {
        throw std::invalid_argument("ConeSpec: polyhedral cone needs d ≥ 1");
    }
    if (kappa <= 0.0) {
        throw std::invalid_argument("ConeSpec: kappa must be positive");
    }
    for (const auto& a : a_matrices) {
        if (a.dim != dim) {
            throw std::invalid_argument("ConeSpec: A matrix dimension mismatch");
        }
        if (a.is_zero()) {
            throw std::invalid_argument("ConeSpec: zero A matrix");
        }
        if (a.trace() < kappa - 1e-12) {
            throw std::invalid_argument(
                "ConeSpec: A*(I) ≥ κ·1 fails (degenerate constraint)");
        }
    }
    ConeSpec s;
    s.dist_ = dist;
    s.cov_ = CovKind::POLYHEDRAL;
    s.dim_ = dim;
    s.a_ = std::move(a_matrices);
    s.kappa_ = kappa;
    return s;
}

int ConeSpec::d() const {
    if (cov_ != CovKind::POLYHEDRAL) {
        throw std::logic_error("ConeSpec: d() requires POLYHEDRAL cover cone");
    }
    return static_cast<int>(a_.size());
}

const std::vector<SparseSym>& ConeSpec::a_matrices() const {
    if (cov_ != CovKind::POLYHEDRAL) {
        throw std::logic_error(
            "ConeSpec: constraint map requires POLYHEDRAL cover cone");
    }
    return a_;
}

double ConeSpec::kappa() const {
    if (cov_ != CovKind::POLYHEDRAL) {
        throw std::logic_error("ConeSpec: kappa requires POLYHEDRAL cover cone");
    }
    return kappa_;
}

SymMatrix sign_tensor(const CutSet& u) {
    const int m = u.dim();
    Vec s(m);
    for (int i = 0; i < m; ++i) {
        s(i) = u.sign(i);
    }
    return SymMatrix(s * s.transpose());
}

Vec apply_adjoint(const ConeSpec& spec, const Mat& y) {
    const auto& as = spec.a_matrices();
    if (y.rows() != spec.dim() || y.cols() != spec.dim()) {
        throw std::invalid_argument("apply_adjoint: dimension mismatch");
    }
    Vec out(static_cast<int>(as.size()));
    for (std::size_t i = 0; i < as.size(); ++i) {
        out(static_cast<int>(i)) = as[i].inner(y);
    }
    return out;
}

Vec apply_adjoint(const ConeSpec& spec, const SymMatrix& y) {
    return apply_adjoint(spec, y.mat());
}

SymMatrix apply_map(const ConeSpec& spec, const Vec& w) {
    const auto& as = spec.a_matrices();
    if (w.size() != static_cast<int>(as.size())) {
        throw std::invalid_argument("apply_map: weight dimension mismatch");
    }
    Mat m = Mat::Zero(spec.dim(), spec.dim());
    for (std::size_t i = 0; i < as.size(); ++i) {
        as[i].add_to(m, w(static_cast<int>(i)));
    }
    return SymMatrix(m);
}

DistReport check_dist_membership(const ConeSpec& spec, const SymMatrix& y,
                                 double tol) {
    if (y.dim() != spec.dim()) {
        throw std::invalid_argument("check_dist_membership: dimension mismatch");
    }
    DistReport rep;
    Eigen::SelfAdjointEigenSolver<Mat> es(y.mat(),
                                          Eigen::EigenvaluesOnly);
    rep.min_eigenvalue = es.eigenvalues().minCoeff();
    rep.worst_triangle_violation = 0.0;
    if (spec.dist_kind() == DistKind::PSD_TRIANGLE && spec.dim() >= 2) {
        rep.worst_triangle_violation = worst_triangle(y.mat());
    }
    rep.member = rep.min_eigenvalue >= -tol &&
                 rep.worst_triangle_violation >= -tol;
    return rep;
}

OrderReport check_cover_order(const ConeSpec& spec, const SymMatrix& x,
                              const SymMatrix& y, double tol) {
    if (x.dim() != spec.dim() || y.dim() != spec.dim()) {
        throw std::invalid_argument("check_cover_order: dimension mismatch");
    }
    OrderReport rep;
    if (spec.cov_kind() == CovKind::POLYHEDRAL) {
        const Vec diff = apply_adjoint(spec, Mat(y.mat() - x.mat()));
        rep.residual = diff.minCoeff();
    } else {
        Eigen::SelfAdjointEigenSolver<Mat> es(y.mat() - x.mat(),
                                              Eigen::EigenvaluesOnly);
        rep.residual = es.eigenvalues().minCoeff();
    }
    rep.holds = rep.residual >= -tol;
    return rep;
}

Mat psd_project(const Mat& m) {
    Eigen::SelfAdjointEigenSolver<Mat> es(m);
    if (es.info() != Eigen::Success) {
        throw std::runtime_error("psd_project: eigendecomposition failed");
    }
    const Vec lam = es.eigenvalues().cwiseMax(0.0);
    return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
}

SymMatrix psd_project(const SymMatrix& m) {
    return SymMatrix(psd_project(m.mat()), 1e-9);
}

double triangle_value(const Mat& y, const TriangleTerm& t) {
    return y(0, 0) + t.si * y(0, t.i) + t.sj * y(0, t.j) +
           t.si * t.sj * y(t.i, t.j);
}

std::vector<TriangleTerm> triangle_family(int m) {
    std::vector<TriangleTerm> fam;
    for (int i = 1; i < m; ++i) {
        // i = j: Δ_{−i,−i}, Δ_{−i,+i} (= Δ_{+i,−i}), Δ_{+i,+i}
        fam.push_back({i, i, -1, -1});
        fam.push_back({i, i, -1, +1});
        fam.push_back({i, i, +1, +1});
        for (int j = i + 1; j < m; ++j) {
            for (int si : {-1, +1}) {
                for (int sj : {-1, +1}) {
                    fam.push_back({i, j, si, sj});
                }
            }
        }
    }
    return fam;
}

double worst_triangle(const Mat& y, TriangleTerm* arg) {
    const int m = static_cast<int>(y.rows());
    double best = std::numeric_limits<double>::infinity();
    for (const auto& t : triangle_family(m)) {
        const double v = triangle_value(y, t);
        if (v < best) {
            best = v;
            if (arg != nullptr) {
                *arg = t;
            }
        }
    }
    if (m < 2) {
        best = 0.0;
    }
    return best;
}

std::vector<TriangleTerm> violated_triangles(const Mat& y, double tol,
                                             int max_count) {
    const int m = static_cast<int>(y.rows());
    std::vector<std::pair<double, TriangleTerm>> hits;
    for (const auto& t : triangle_family(m)) {
        const double v = triangle_value(y, t);
        if (v < -tol) {
            hits.emplace_back(v, t);
        }
    }
    std::sort(hits.begin(), hits.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<TriangleTerm> out;
    for (const auto& h : hits) {
        if (static_cast<int>(out.size()) >= max_count) {
            break;
        }
        out.push_back(h.second);
    }
    return out;
}

SparseSym triangle_sparse(const TriangleTerm& t, int m) {
    if (t.i < 1 || t.j < 1 || t.i >= m || t.j >= m) {
        throw std::invalid_argument("triangle_sparse: index out of range");
    }
    // Δ_{si·i, sj·j} = sym((e₀ + si·e_i)(e₀ + sj·e_j)ᵀ)
    SparseSym a;
    a.dim = m;
    a.add(0, 0, 1.0);
    if (t.i == t.j) {
        a.add(0, t.i, 0.5 * (t.si + t.sj));
        a.add(t.i, t.i, static_cast<double>(t.si * t.sj));
    } else {
        a.add(0, t.i, 0.5 * t.si);
        a.add(0, t.j, 0.5 * t.sj);
        a.add(t.i, t.j, 0.5 * t.si * t.sj);
    }
    return a;
}

Mat triangle_dense(const TriangleTerm& t, int m) {
    return triangle_sparse(t, m).dense();
}

}  // namespace grothcover
