#ifndef GROTHCOVER_CONES_HPP
#define GROTHCOVER_CONES_HPP

#include <Eigen/Dense>
#include <vector>

#include "grothcover/cutset.hpp"

namespace grothcover {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

/// Dense symmetric matrix; symmetry is enforced at construction.
class SymMatrix {
public:
    /// Accepts M with max asymmetry ≤ asym_tol (then symmetrizes), else throws.
    explicit SymMatrix(const Mat& m, double asym_tol = 1e-12);

    static SymMatrix identity(int dim);
    static SymMatrix zero(int dim);

    int dim() const { return static_cast<int>(m_.rows()); }
    const Mat& mat() const { return m_; }
    double operator()(int r, int c) const { return m_(r, c); }

private:
    Mat m_;
};

/// Sparse symmetric matrix stored as upper-triangle triplets (r ≤ c).
/// Used for the constraint matrices A_i, which touch only rows/cols {0,i,j}.
struct SparseSym {
    struct Entry {
        int r;
        int c;  // r ≤ c
        double v;
    };

    int dim = 0;
    std::vector<Entry> entries;

    void add(int r, int c, double v);  // accumulates, any order of (r,c)

    double inner(const Mat& y) const;        // ⟨A, Y⟩
    double inner_cut(const CutSet& u) const; // ⟨A, S_U⟩ without forming S_U
    double trace() const;                    // ⟨A, I⟩
    Mat dense() const;
    void add_to(Mat& m, double coef) const;  // M += coef·A
    bool is_zero(double tol = 0.0) const;
};

enum class DistKind { PSD, PSD_TRIANGLE };
enum class CovKind { FULL_PSD, POLYHEDRAL };

/// One member of the Δ_{±i,±j} triangle family (signs si, sj ∈ {−1,+1}).
struct TriangleTerm {
    int i = 0;
    int j = 0;
    int si = 1;
    int sj = 1;
};

/// The cone pair (Dist, Cov) together with the constraint map A and κ.
class ConeSpec {
public:
    static ConeSpec full_psd(int dim, DistKind dist = DistKind::PSD);
    static ConeSpec polyhedral(int dim, std::vector<SparseSym> a_matrices,
                               double kappa,
                               DistKind dist = DistKind::PSD_TRIANGLE);

    DistKind dist_kind() const { return dist_; }
    CovKind cov_kind() const { return cov_; }
    int dim() const { return dim_; }

    /// Number of constraint matrices (POLYHEDRAL only).
    int d() const;
    const std::vector<SparseSym>& a_matrices() const;
    double kappa() const;

private:
    ConeSpec() = default;

    DistKind dist_ = DistKind::PSD;
    CovKind cov_ = CovKind::FULL_PSD;
    int dim_ = 0;
    std::vector<SparseSym> a_;
    double kappa_ = 0.0;
};

/// S_U = s_U s_Uᵀ with s_U = 2·1_U − 1.
SymMatrix sign_tensor(const CutSet& u);

/// A*(Y) = (⟨A_i, Y⟩)_i. POLYHEDRAL only.
Vec apply_adjoint(const ConeSpec& spec, const SymMatrix& y);
Vec apply_adjoint(const ConeSpec& spec, const Mat& y);

/// A(w) = Σ w_i A_i. POLYHEDRAL only.
SymMatrix apply_map(const ConeSpec& spec, const Vec& w);

struct DistReport {
    double min_eigenvalue = 0.0;
    double worst_triangle_violation = 0.0;  // min ⟨Δ, Y⟩; 0 when dist is PSD
    bool member = false;
};

/// Membership report for Y ∈ Dist at tolerance tol.
DistReport check_dist_membership(const ConeSpec& spec, const SymMatrix& y,
                                 double tol = 1e-8);

struct OrderReport {
    bool holds = false;
    double residual = 0.0;
};

/// Lifted cover-dual order test X ⪯ Y: componentwise on A* (POLYHEDRAL) or
/// the PSD order (FULL_PSD).
OrderReport check_cover_order(const ConeSpec& spec, const SymMatrix& x,
                              const SymMatrix& y, double tol = 1e-8);

/// Nearest PSD matrix in Frobenius norm (eigenvalue clipping at 0).
SymMatrix psd_project(const SymMatrix& m);
Mat psd_project(const Mat& m);

/// ⟨Δ_{si·i, sj·j}, Y⟩ = Y₀₀ + si·Y₀ᵢ + sj·Y₀ⱼ + si·sj·Yᵢⱼ.
double triangle_value(const Mat& y, const TriangleTerm& t);

/// Enumerates the Δ family for matrix order m (indices 1..m−1):
/// all four sign pairs for i < j and the three distinct ones for i = j.
std::vector<TriangleTerm> triangle_family(int m);

/// min over the Δ family of ⟨Δ, Y⟩; arg (if non-null) receives a minimizer.
double worst_triangle(const Mat& y, TriangleTerm* arg = nullptr);

/// Family members with ⟨Δ, Y⟩ < −tol, most violated first, at most max_count.
std::vector<TriangleTerm> violated_triangles(const Mat& y, double tol,
                                             int max_count);

/// Dense Δ matrix for a family member.
Mat triangle_dense(const TriangleTerm& t, int m);
SparseSym triangle_sparse(const TriangleTerm& t, int m);

}  // namespace grothcover

#endif  // GROTHCOVER_CONES_HPP
