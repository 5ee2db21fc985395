#ifndef SAFEFILTER_LMI_THEOREM1_HPP
#define SAFEFILTER_LMI_THEOREM1_HPP

#include <optional>

#include "safefilter/ellipsoid.hpp"
#include "safefilter/lmi/problem.hpp"
#include "safefilter/state_space.hpp"

namespace safefilter::lmi {

/// Input, safe and normal-operation sets of one synthesis instance. The
/// normal set lives on the plant states; its absence selects the
/// non-stealthy variant (the lambda T' term is dropped).
struct SafetySets {
    Ellipsoid input_set;                   // E_u(R, u_bar) on the m inputs
    Ellipsoid safe_set;                    // E_s(Psi, psi_bar) on the n_p plant states
    std::optional<Ellipsoid> normal_set;   // E_n(Xi_p, xi_bar_p) on the n_p plant states
};

/// Fixed scalars of the synthesis problem (the bilinear multipliers enter as
/// data so the constraints stay affine).
struct Theorem1Scalars {
    double alpha = 1.0;
    double lambda = 0.5;
    double delta = 0.9;
    double gamma = 0.61;
    double epsilon = 1e-8;
};

struct Theorem1Assembly {
    LmiProblem problem;
    VarRef x, y;                     // symmetric n_p x n_p
    VarRef a_hat, b_hat, c_hat, d_hat;  // filter variables after the change of variables
    VarRef beta;
};

/// Filter-synthesis conditions (change-of-variables form), in variables
/// X, Y, A_hat, B_hat, C_hat, D_hat, beta >= 0:
///   -E' - alpha F' - beta S' - lambda T' >= 0
///   -J - delta W >= 0
///   -L >= 0
///   Q(kappa) = [X I; I Y] >= pd_margin I
/// with objective minimize trace(X). Requires invertible Xi_p and Psi
/// (condition number below 1e12). n_f = n_p structurally.
Theorem1Assembly assemble_theorem1(const StateSpaceModel& plant, const Matrix& gamma_f,
                                   const Matrix& gamma_c, const SafetySets& sets,
                                   const Theorem1Scalars& scalars, double pd_margin = 1e-8);

} // namespace safefilter::lmi

#endif
