#ifndef SAFEFILTER_LMI_LEMMA1_HPP
#define SAFEFILTER_LMI_LEMMA1_HPP

#include <optional>

#include "safefilter/ellipsoid.hpp"
#include "safefilter/lmi/problem.hpp"

namespace safefilter::lmi {

/// S-procedure matrix of the input-set membership u ∈ E_u(R, u_bar) in the
/// homogenized basis [state; 1; u]:
///   [0 0 0; 0 1-u^T R u  u^T R; 0 R u  -R].
/// Shared between the invariance and synthesis assemblies.
Matrix input_set_sprocedure_matrix(Eigen::Index head_dim, const Ellipsoid& input_set);

/// S-procedure matrix of the normal-set membership (state ∈ E_n(Xi, xi_bar)):
///   [-Xi  Xi xi  0; *  1 - xi^T Xi xi  0; *  *  0].
Matrix normal_set_sprocedure_matrix(const Ellipsoid& normal_set, Eigen::Index input_dim);

struct Lemma1Assembly {
    LmiProblem problem;
    VarRef q;       // invariant-set shape, symmetric n x n
    VarRef beta;    // input-set multiplier
    VarRef lambda;  // normal-set multiplier; invalid when non-stealthy
};

/// Invariance conditions for ζ̇ = A ζ + B u with u confined to the input set:
///   -E - alpha F - beta S - lambda T >= 0,   Q >= pd_margin I,
/// in variables Q (symmetric), beta >= 0, lambda >= 0, for fixed alpha.
/// `normal_set` (over the full state) enables the stealthy term; when absent
/// the lambda T term is omitted. Objective: maximize trace(Q).
Lemma1Assembly assemble_lemma1(const Matrix& A, const Matrix& B, const Ellipsoid& input_set,
                               const std::optional<Ellipsoid>& normal_set, double alpha,
                               double pd_margin = 1e-8);

struct Lemma1FixedQAssembly {
    LmiProblem problem;
    VarRef beta;
    VarRef lambda;  // invalid when non-stealthy
};

/// Same inequality with Q fixed: a pure LMI in the multipliers (beta, lambda),
/// used to replay an invariance certificate for a given ellipsoid.
Lemma1FixedQAssembly assemble_lemma1_fixed_q(const Matrix& A, const Matrix& B, const Matrix& Q,
                                             const Ellipsoid& input_set,
                                             const std::optional<Ellipsoid>& normal_set,
                                             double alpha);

} // namespace safefilter::lmi

#endif
