#ifndef SAFEFILTER_ELLIPSOID_HPP
#define SAFEFILTER_ELLIPSOID_HPP

#include <cstdint>
#include <vector>

#include "safefilter/linalg.hpp"

namespace safefilter {

enum class RankMode { PositiveDefinite, PositiveSemidefinite };

/// Ellipsoidal set { x : (x - c)^T Q (x - c) <= 1 }.
///
/// Rank-deficient shape matrices are allowed as data (normal and safe sets
/// constrain only part of the state); projection and boundary sampling
/// require a definite shape.
struct Ellipsoid {
    Matrix Q;
    Vector c;
    RankMode rank_mode;

    Ellipsoid() : Q(Matrix::Identity(1, 1)), c(Vector::Zero(1)), rank_mode(RankMode::PositiveDefinite) {}
    Ellipsoid(Matrix Q_, Vector c_, RankMode mode = RankMode::PositiveDefinite);

    static Ellipsoid centered(Matrix Q_, RankMode mode = RankMode::PositiveDefinite) {
        const auto d = Q_.rows();
        return Ellipsoid(std::move(Q_), Vector::Zero(d), mode);
    }

    Eigen::Index dim() const { return Q.rows(); }

    /// Quadratic form value (x - c)^T Q (x - c).
    double level(const Vector& x) const;
};

/// Membership with slack: (x - c)^T Q (x - c) <= 1 + tol.
bool contains_point(const Ellipsoid& e, const Vector& x, double tol = 0.0);

/// Exact shadow of a definite ellipsoid on its first k coordinates:
/// shape Q1 - Q2 Q3^{-1} Q2^T, center = leading k entries of c.
/// Reports the smallest singular value of the trailing block if it is
/// numerically singular.
Ellipsoid project(const Ellipsoid& e, Eigen::Index k);

/// Containment E1 ⊆ E2. Coincident centers reduce to the eigenvalue test
/// Q2 ⪯ Q1 + tol I; distinct centers go through the single-multiplier
/// S-procedure LMI (lossless for two ellipsoids) via the solver backend.
bool is_contained(const Ellipsoid& e1, const Ellipsoid& e2, double tol = 1e-7);

/// N points on the boundary, Gaussian directions pushed through the Cholesky
/// factor of Q^{-1}. Deterministic for a fixed seed.
std::vector<Vector> sample_boundary(const Ellipsoid& e, int count, std::uint64_t seed);

} // namespace safefilter

#endif
