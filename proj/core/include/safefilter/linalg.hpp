#ifndef SAFEFILTER_LINALG_HPP
#define SAFEFILTER_LINALG_HPP

#include <Eigen/Dense>

namespace safefilter {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;

inline Matrix sym_part(const Matrix& m) { return 0.5 * (m + m.transpose()); }

inline bool is_symmetric(const Matrix& m, double tol = 1e-10) {
    if (m.rows() != m.cols()) return false;
    return (m - m.transpose()).cwiseAbs().maxCoeff() <= tol * std::max(1.0, m.cwiseAbs().maxCoeff());
}

inline bool all_finite(const Matrix& m) { return m.allFinite(); }

// Smallest eigenvalue of a symmetric matrix (input symmetrized first).
inline double min_eigenvalue(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Matrix> es(sym_part(m), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

inline double max_singular_value(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    return m.jacobiSvd().singularValues()(0);
}

} // namespace safefilter

#endif
