#include "safefilter/state_space.hpp"

#include <limits>
#include <sstream>
#include <stdexcept>

namespace safefilter {

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

std::string dims(const Matrix& m) {
    std::ostringstream os;
    os << m.rows() << "x" << m.cols();
    return os.str();
}

} // namespace

StateSpaceModel::StateSpaceModel(Matrix A_, Matrix B_, Matrix C_, Matrix D_)
    : A(std::move(A_)), B(std::move(B_)), C(std::move(C_)), D(std::move(D_)) {
    require(A.rows() == A.cols(), "StateSpaceModel: A must be square, got " + dims(A));
    require(B.rows() == A.rows(), "StateSpaceModel: B must have n rows, got " + dims(B));
    require(C.cols() == A.rows(), "StateSpaceModel: C must have n columns, got " + dims(C));
    require(D.rows() == C.rows() && D.cols() == B.cols(),
            "StateSpaceModel: D must be p x m, got " + dims(D));
    require(all_finite(A) && all_finite(B) && all_finite(C) && all_finite(D),
            "StateSpaceModel: non-finite entry");
}

StateSpaceModel StateSpaceModel::from_ab(Matrix A_, Matrix B_) {
    const auto n = A_.rows();
    const auto m = B_.cols();
    return StateSpaceModel(std::move(A_), std::move(B_), Matrix::Identity(n, n),
                           Matrix::Zero(n, m));
}

FilterRealization::FilterRealization(Matrix A_f_, Matrix B_f_, Matrix C_f_, Matrix D_f_,
                                     Matrix gamma_f_, Matrix gamma_c_)
    : A_f(std::move(A_f_)),
      B_f(std::move(B_f_)),
      C_f(std::move(C_f_)),
      D_f(std::move(D_f_)),
      gamma_f(std::move(gamma_f_)),
      gamma_c(std::move(gamma_c_)) {
    const auto nf = A_f.rows();
    const auto mm = D_f.cols();
    require(A_f.cols() == nf, "FilterRealization: A_f must be square");
    require(B_f.rows() == nf && B_f.cols() == mm, "FilterRealization: B_f must be n_f x m");
    require(C_f.rows() == mm && C_f.cols() == nf, "FilterRealization: C_f must be m x n_f");
    require(D_f.rows() == mm, "FilterRealization: D_f must be square m x m");
    require(gamma_f.rows() == mm && gamma_f.cols() == mm && gamma_c.rows() == mm &&
                gamma_c.cols() == mm,
            "FilterRealization: selection matrices must be m x m");
    require((gamma_f + gamma_c - Matrix::Identity(mm, mm)).cwiseAbs().maxCoeff() < 1e-12,
            "FilterRealization: gamma_f + gamma_c must equal I_m");
    for (Eigen::Index i = 0; i < mm; ++i) {
        for (Eigen::Index j = 0; j < mm; ++j) {
            const double g = gamma_f(i, j);
            if (i == j) {
                require(std::abs(g) < 1e-12 || std::abs(g - 1.0) < 1e-12,
                        "FilterRealization: gamma_f diagonal entries must be 0 or 1");
            } else {
                require(std::abs(g) < 1e-12, "FilterRealization: gamma_f must be diagonal");
            }
        }
    }
    if (nf == 0) {
        require((D_f - Matrix::Identity(mm, mm)).cwiseAbs().maxCoeff() < 1e-12,
                "FilterRealization: n_f = 0 requires D_f = I");
    }
    require(all_finite(A_f) && all_finite(B_f) && all_finite(C_f) && all_finite(D_f),
            "FilterRealization: non-finite entry");
}

FilterRealization FilterRealization::identity_passthrough(Eigen::Index m) {
    return FilterRealization(Matrix(0, 0), Matrix(0, m), Matrix(m, 0), Matrix::Identity(m, m),
                             Matrix::Identity(m, m), Matrix::Zero(m, m));
}

bool is_hurwitz(const Matrix& a, double tol) {
    if (a.rows() != a.cols()) throw std::invalid_argument("is_hurwitz: matrix must be square");
    if (!all_finite(a)) throw std::invalid_argument("is_hurwitz: non-finite entry");
    if (a.rows() == 0) return true;
    Eigen::EigenSolver<Matrix> es(a, /*computeEigenvectors=*/false);
    return (es.eigenvalues().real().array() < -tol).all();
}

double min_decay_rate(const Matrix& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("min_decay_rate: matrix must be square");
    if (a.rows() == 0) return std::numeric_limits<double>::infinity();
    Eigen::EigenSolver<Matrix> es(a, false);
    return es.eigenvalues().real().cwiseAbs().minCoeff();
}

StateSpaceModel build_extended_system(const StateSpaceModel& plant,
                                      const FilterRealization& filter) {
    const auto np = plant.n();
    const auto m = plant.m();
    const auto nf = filter.n_f();
    require(filter.m() == m, "build_extended_system: filter channel count must match plant input");

    const Matrix& Ap = plant.A;
    const Matrix& Bp = plant.B;
    const auto n = np + nf;

    Matrix A = Matrix::Zero(n, n);
    A.topLeftCorner(np, np) = Ap;
    A.topRightCorner(np, nf) = Bp * filter.gamma_f * filter.C_f;
    A.bottomRightCorner(nf, nf) = filter.A_f;

    Matrix B(n, m);
    B.topRows(np) = Bp * filter.gamma_f * filter.D_f + Bp * filter.gamma_c;
    B.bottomRows(nf) = filter.B_f;

    Matrix Cz = Matrix::Zero(m, n);
    Cz.rightCols(nf) = filter.C_f;
    Matrix Dz = filter.D_f - Matrix::Identity(m, m);
    if (nf == 0) {
        Cz.setZero();
        Dz.setZero();
    }
    return StateSpaceModel(std::move(A), std::move(B), std::move(Cz), std::move(Dz));
}

std::vector<ComplexMatrix> frequency_response(const StateSpaceModel& sys,
                                              const std::vector<double>& omegas) {
    const auto n = sys.n();
    std::vector<ComplexMatrix> out;
    out.reserve(omegas.size());
    const ComplexMatrix Ac = sys.A.cast<std::complex<double>>();
    const ComplexMatrix Bc = sys.B.cast<std::complex<double>>();
    const ComplexMatrix Cc = sys.C.cast<std::complex<double>>();
    const ComplexMatrix Dc = sys.D.cast<std::complex<double>>();
    for (double w : omegas) {
        ComplexMatrix resolvent = ComplexMatrix::Identity(n, n) * std::complex<double>(0.0, w) - Ac;
        Eigen::PartialPivLU<ComplexMatrix> lu(resolvent);
        const double rcond_proxy = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
        if (!(rcond_proxy > 0.0) || !std::isfinite(rcond_proxy)) {
            throw std::runtime_error("frequency_response: singular resolvent at omega = " +
                                     std::to_string(w));
        }
        out.push_back(Cc * lu.solve(Bc) + Dc);
    }
    return out;
}

} // namespace safefilter
