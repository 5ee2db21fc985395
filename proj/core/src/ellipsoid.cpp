#include "safefilter/ellipsoid.hpp"

#include <cmath>
#include <stdexcept>

#include "safefilter/lmi/solve.hpp"

namespace safefilter {

Ellipsoid::Ellipsoid(Matrix Q_, Vector c_, RankMode mode)
    : Q(std::move(Q_)), c(std::move(c_)), rank_mode(mode) {
    if (Q.rows() != Q.cols()) throw std::invalid_argument("Ellipsoid: Q must be square");
    if (c.size() != Q.rows()) throw std::invalid_argument("Ellipsoid: center dimension mismatch");
    if (!is_symmetric(Q, 1e-10)) throw std::invalid_argument("Ellipsoid: Q must be symmetric");
    const double mineig = min_eigenvalue(Q);
    if (rank_mode == RankMode::PositiveDefinite) {
        if (mineig < 1e-10)
            throw std::invalid_argument("Ellipsoid: Q not positive definite (min eig " +
                                        std::to_string(mineig) + ")");
    } else if (mineig < -1e-10) {
        throw std::invalid_argument("Ellipsoid: Q not positive semidefinite");
    }
    Q = sym_part(Q);
}

double Ellipsoid::level(const Vector& x) const {
    if (x.size() != dim()) throw std::invalid_argument("Ellipsoid: point dimension mismatch");
    const Vector d = x - c;
    return d.dot(Q * d);
}

bool contains_point(const Ellipsoid& e, const Vector& x, double tol) {
    return e.level(x) <= 1.0 + tol;
}

Ellipsoid project(const Ellipsoid& e, Eigen::Index k) {
    if (e.rank_mode != RankMode::PositiveDefinite)
        throw std::invalid_argument("project: requires a positive definite shape");
    const auto d = e.dim();
    if (k <= 0 || k >= d) throw std::invalid_argument("project: k must satisfy 0 < k < dim");
    const Matrix q1 = e.Q.topLeftCorner(k, k);
    const Matrix q2 = e.Q.topRightCorner(k, d - k);
    const Matrix q3 = e.Q.bottomRightCorner(d - k, d - k);
    const auto svd = q3.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double smin = svd.singularValues().minCoeff();
    const double smax = svd.singularValues().maxCoeff();
    if (!(smin > 0.0) || smax / smin > 1e14) {
        throw std::runtime_error("project: trailing block numerically singular (sigma_min = " +
                                 std::to_string(smin) + ")");
    }
    Matrix shape = sym_part(q1 - q2 * svd.solve(q2.transpose()));
    return Ellipsoid(std::move(shape), e.c.head(k), RankMode::PositiveDefinite);
}

bool is_contained(const Ellipsoid& e1, const Ellipsoid& e2, double tol) {
    if (e1.dim() != e2.dim()) throw std::invalid_argument("is_contained: dimension mismatch");
    const double center_gap = (e1.c - e2.c).norm();
    if (center_gap <= 1e-12 * std::max(1.0, e1.c.norm())) {
        // E1 ⊆ E2  ⟺  Q2 ⪯ Q1 (larger shape matrix = smaller set)
        return min_eigenvalue(e1.Q - e2.Q) >= -tol;
    }

    // S-procedure: exists t >= 0 with t*M1 - M2 >= 0, where Mi is the
    // homogenized form [Qi, -Qi ci; *, ci^T Qi ci - 1].
    const auto d = e1.dim();
    auto homog = [d](const Ellipsoid& e) {
        Matrix m(d + 1, d + 1);
        m.topLeftCorner(d, d) = e.Q;
        m.topRightCorner(d, 1) = -e.Q * e.c;
        m.bottomLeftCorner(1, d) = (-e.Q * e.c).transpose();
        m(d, d) = e.c.dot(e.Q * e.c) - 1.0;
        return m;
    };
    lmi::LmiProblem p;
    auto t = p.add_scalar("tau");
    lmi::AffineMatrixExpr expr({d + 1});
    expr.add_scalar_term(t, homog(e1));
    expr.add_constant(-homog(e2));
    p.add_psd_constraint(std::move(expr), "s-procedure");
    p.add_scalar_nonneg(t, "tau >= 0");
    p.seal();
    const auto res = lmi::solve(p);
    if (res.status == lmi::SolverStatus::Infeasible) return false;
    if (!res.ok())
        throw std::runtime_error("is_contained: solver failure on S-procedure LMI: " +
                                 res.message);
    return true;
}

std::vector<Vector> sample_boundary(const Ellipsoid& e, int count, std::uint64_t seed) {
    if (count <= 0) throw std::invalid_argument("sample_boundary: count must be positive");
    if (e.rank_mode != RankMode::PositiveDefinite || min_eigenvalue(e.Q) <= 0.0)
        throw std::invalid_argument("sample_boundary: requires a positive definite shape");
    Eigen::LLT<Matrix> llt(e.Q);
    if (llt.info() != Eigen::Success)
        throw std::invalid_argument("sample_boundary: Cholesky of Q failed");
    const Matrix lt = llt.matrixU();  // Q = U^T U with U upper

    // Hand-rolled Box-Muller on a splitmix-seeded xorshift keeps the samples
    // identical across standard libraries.
    std::uint64_t state = seed + 0x9e3779b97f4a7c15ULL;
    auto next_u64 = [&state]() {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        return state;
    };
    auto next_unit = [&]() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    };
    auto next_gauss = [&]() {
        const double u1 = next_unit();
        const double u2 = next_unit();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    };

    std::vector<Vector> pts;
    pts.reserve(count);
    const auto d = e.dim();
    while (static_cast<int>(pts.size()) < count) {
        Vector z(d);
        for (Eigen::Index i = 0; i < d; ++i) z(i) = next_gauss();
        const double norm = z.norm();
        if (norm < 1e-14) continue;
        // x = c + U^{-1} (z / |z|): then (x-c)^T Q (x-c) = |z/|z||^2 = 1
        pts.push_back(e.c + lt.triangularView<Eigen::Upper>().solve(z / norm));
    }
    return pts;
}

} // namespace safefilter
