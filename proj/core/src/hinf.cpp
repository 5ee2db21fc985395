#include "safefilter/hinf.hpp"

#include <cmath>
#include <stdexcept>

namespace safefilter {

namespace {

// gamma is attained as a singular value of G(jw) for some finite w iff the
// Hamiltonian below has an eigenvalue on the imaginary axis (gamma > max
// singular value of D assumed).
bool hamiltonian_has_imaginary_eig(const StateSpaceModel& sys, double gamma) {
    const auto n = sys.n();
    const auto m = sys.m();
    const Matrix& A = sys.A;
    const Matrix& B = sys.B;
    const Matrix& C = sys.C;
    const Matrix& D = sys.D;

    const Matrix R = gamma * gamma * Matrix::Identity(m, m) - D.transpose() * D;
    Eigen::LDLT<Matrix> Rf(R);
    if (Rf.info() != Eigen::Success || !Rf.isPositive()) return true;  // at/below sigma_max(D)

    const Matrix Rinv_Bt = Rf.solve(B.transpose());
    const Matrix Ah = A + B * Rf.solve(D.transpose() * C);
    Matrix H(2 * n, 2 * n);
    H.topLeftCorner(n, n) = Ah;
    H.topRightCorner(n, n) = B * Rinv_Bt;
    H.bottomLeftCorner(n, n) = -C.transpose() * (Matrix::Identity(sys.p(), sys.p()) + D * Rf.solve(D.transpose())) * C;
    H.bottomRightCorner(n, n) = -Ah.transpose();

    Eigen::EigenSolver<Matrix> es(H, false);
    const auto& ev = es.eigenvalues();
    const double scale = std::max(1.0, H.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (std::abs(ev(i).real()) <= 1e-9 * scale) return true;
    }
    return false;
}

} // namespace

double hinf_norm(const StateSpaceModel& sys, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("hinf_norm: tol must be positive");
    if (sys.n() > 0 && !is_hurwitz(sys.A, 0.0)) {
        throw std::runtime_error("hinf_norm: A is not Hurwitz, norm undefined");
    }
    const double sd = max_singular_value(sys.D);
    if (sys.n() == 0 || sys.C.cwiseAbs().maxCoeff() == 0.0 || sys.B.cwiseAbs().maxCoeff() == 0.0) {
        return sd;  // pure feedthrough
    }

    // DC gain -C A^{-1} B + D.
    const Matrix g0 = -sys.C * sys.A.partialPivLu().solve(sys.B) + sys.D;
    double lo = std::max(sd, max_singular_value(g0));

    double hi = std::max(2.0 * lo, 1e-8);
    int guard = 0;
    while (hamiltonian_has_imaginary_eig(sys, hi)) {
        hi *= 2.0;
        if (++guard > 200) throw std::runtime_error("hinf_norm: upper bound search failed");
    }
    if (lo == 0.0) lo = hi * 1e-14;

    while ((hi - lo) > tol * hi) {
        const double mid = 0.5 * (lo + hi);
        if (hamiltonian_has_imaginary_eig(sys, mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace safefilter
