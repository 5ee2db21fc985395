#ifndef SAFEFILTER_STATE_SPACE_HPP
#define SAFEFILTER_STATE_SPACE_HPP

#include <complex>
#include <vector>

#include "safefilter/linalg.hpp"

namespace safefilter {

/// Continuous-time LTI system ẋ = Ax + Bu, y = Cx + Du.
///
/// Used for the plant, the filter, and the stacked plant–filter system.
/// All matrices are validated for consistent dimensions and finite entries
/// on construction.
struct StateSpaceModel {
    Matrix A;  // n x n
    Matrix B;  // n x m
    Matrix C;  // p x n
    Matrix D;  // p x m

    StateSpaceModel(Matrix A_, Matrix B_, Matrix C_, Matrix D_);

    // A/B-only system with full-state output (C = I, D = 0).
    static StateSpaceModel from_ab(Matrix A_, Matrix B_);

    Eigen::Index n() const { return A.rows(); }
    Eigen::Index m() const { return B.cols(); }
    Eigen::Index p() const { return C.rows(); }
};

/// Input filter u_f = C_f x_f + D_f u_c with channel selection.
/// gamma_f + gamma_c = I_m; diagonal entries are 0 or 1.
/// n_f = 0 (empty A_f) is the no-filter case and requires D_f = I.
struct FilterRealization {
    Matrix A_f;      // n_f x n_f
    Matrix B_f;      // n_f x m
    Matrix C_f;      // m x n_f
    Matrix D_f;      // m x m
    Matrix gamma_f;  // m x m diagonal 0/1
    Matrix gamma_c;  // m x m diagonal 0/1

    FilterRealization(Matrix A_f_, Matrix B_f_, Matrix C_f_, Matrix D_f_,
                      Matrix gamma_f_, Matrix gamma_c_);

    // Pass-through: n_f = 0, D_f = I, everything routed through gamma_f.
    static FilterRealization identity_passthrough(Eigen::Index m);

    Eigen::Index n_f() const { return A_f.rows(); }
    Eigen::Index m() const { return D_f.cols(); }
};

/// True iff every eigenvalue of A has real part < -tol.
bool is_hurwitz(const Matrix& a, double tol = 1e-9);

/// Slowest decay rate: min over eigenvalues of |Re lambda|. Requires Hurwitz A.
double min_decay_rate(const Matrix& a);

/// Stacks plant and filter into the extended system with state [x_p; x_f],
/// input u_c and performance output z = u_f - u_c:
///   A = [A_p  B_p Γ_f C_f; 0  A_f],  B = [B_p Γ_f D_f + B_p Γ_c; B_f],
///   C_z = [0  C_f],  D_z = D_f - I.
/// The n_f = 0 case degenerates to (A_p, B_p) with z ≡ 0.
StateSpaceModel build_extended_system(const StateSpaceModel& plant,
                                      const FilterRealization& filter);

/// G(jw) = C (jwI - A)^{-1} B + D at each requested frequency.
std::vector<ComplexMatrix> frequency_response(const StateSpaceModel& sys,
                                              const std::vector<double>& omegas);

} // namespace safefilter

#endif
