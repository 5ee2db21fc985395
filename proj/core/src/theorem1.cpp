#include "safefilter/lmi/theorem1.hpp"

#include <stdexcept>

#include "safefilter/lmi/lemma1.hpp"

namespace safefilter::lmi {

namespace {

// Symmetric inverse with a hard conditioning gate; silent regularization is
// worse than failing.
Matrix checked_inverse(const Matrix& m, const std::string& name) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(sym_part(m));
    const double emin = es.eigenvalues().minCoeff();
    const double emax = es.eigenvalues().maxCoeff();
    if (!(emin > 0.0) || emax / emin > 1e12) {
        throw std::runtime_error(name + " is singular or ill-conditioned (eigs in [" +
                                 std::to_string(emin) + ", " + std::to_string(emax) + "])");
    }
    return es.eigenvectors() * es.eigenvalues().cwiseInverse().asDiagonal() *
           es.eigenvectors().transpose();
}

} // namespace

Theorem1Assembly assemble_theorem1(const StateSpaceModel& plant, const Matrix& gamma_f,
                                   const Matrix& gamma_c, const SafetySets& sets,
                                   const Theorem1Scalars& sc, double pd_margin) {
    const auto np = plant.n();
    const auto m = plant.m();
    const Matrix& Ap = plant.A;
    const Matrix& Bp = plant.B;

    if (gamma_f.rows() != m || gamma_f.cols() != m || gamma_c.rows() != m || gamma_c.cols() != m)
        throw std::invalid_argument("assemble_theorem1: selection matrices must be m x m");
    if ((gamma_f + gamma_c - Matrix::Identity(m, m)).cwiseAbs().maxCoeff() > 1e-12)
        throw std::invalid_argument("assemble_theorem1: gamma_f + gamma_c must equal I_m");
    if (sets.input_set.dim() != m)
        throw std::invalid_argument("assemble_theorem1: input set dimension mismatch");
    if (sets.safe_set.dim() != np)
        throw std::invalid_argument("assemble_theorem1: safe set dimension mismatch");
    if (sets.normal_set && sets.normal_set->dim() != np)
        throw std::invalid_argument("assemble_theorem1: normal set dimension mismatch");
    if (sc.alpha < 0 || sc.lambda < 0 || sc.delta < 0 || sc.gamma < 0 || sc.epsilon < 0)
        throw std::invalid_argument("assemble_theorem1: scalars must be nonnegative");

    const bool stealthy = sets.normal_set.has_value();
    const Matrix psi_inv = checked_inverse(sets.safe_set.Q, "Psi");
    Matrix xi_inv;
    if (stealthy) xi_inv = checked_inverse(sets.normal_set->Q, "Xi_p");

    Theorem1Assembly out;
    auto& p = out.problem;
    out.x = p.add_symmetric("X", np);
    out.y = p.add_symmetric("Y", np);
    out.a_hat = p.add_variable("A_hat", np, np, false);
    out.b_hat = p.add_variable("B_hat", np, m, false);
    out.c_hat = p.add_variable("C_hat", m, np, false);
    out.d_hat = p.add_variable("D_hat", m, m, false);
    out.beta = p.add_scalar("beta");

    const auto& xv = p.var(out.x);
    const auto& yv = p.var(out.y);
    const auto& av = p.var(out.a_hat);
    const auto& bv = p.var(out.b_hat);
    const auto& cv = p.var(out.c_hat);
    const auto& dv = p.var(out.d_hat);
    const Matrix id_np = Matrix::Identity(np, np);
    const Matrix id_m = Matrix::Identity(m, m);

    // Shorthand for the A(kappa)^T + A(kappa) contribution with sign `s`,
    // shared by the invariance constraint and the H-infinity constraint.
    auto add_acal = [&](AffineMatrixExpr& e, double s) {
        e.add_term_block(0, 0, Ap, out.x, id_np, xv, false, s);          // Ap X + X Ap^T
        e.add_term_block(0, 0, Bp * gamma_f, out.c_hat, id_np, cv, false, s);
        e.add_constant_block(0, 1, s * Ap);                              // A(kappa)_{01} = Ap
        e.add_term_block(0, 1, id_np, out.a_hat, id_np, av, true, s);    // + A_hat^T
        e.add_term_block(1, 1, id_np, out.y, Ap, yv, false, s);          // Y Ap + Ap^T Y
    };
    // B(kappa) column block at block column `bc` with sign `s`.
    auto add_bcal = [&](AffineMatrixExpr& e, int bc, double s) {
        e.add_term_block(0, bc, Bp * gamma_f, out.d_hat, id_m, dv, false, s);
        e.add_constant_block(0, bc, s * Bp * gamma_c);
        e.add_term_block(1, bc, id_np, out.b_hat, id_m, bv, false, s);
        e.add_term_block(1, bc, id_np, out.y, Bp * gamma_c, yv, false, s);
    };
    // Q(kappa) = [X I; I Y] scaled by `s` on blocks (0,0),(0,1),(1,1).
    auto add_qcal = [&](AffineMatrixExpr& e, double s) {
        e.add_term_block(0, 0, id_np, out.x, id_np, xv, false, 0.5 * s);
        e.add_constant_block(0, 1, s * id_np);
        e.add_term_block(1, 1, id_np, out.y, id_np, yv, false, 0.5 * s);
    };

    // ---- invariance: -E' - alpha F' - beta S' - lambda T' >= 0, blocks (np, np, 1, m)
    {
        AffineMatrixExpr e({np, np, 1, m});
        add_acal(e, -1.0);
        add_bcal(e, 3, -1.0);
        add_qcal(e, -sc.alpha);                                     // -alpha F' head
        e.add_constant_block(2, 2, Matrix::Constant(1, 1, sc.alpha));  // -alpha * (-1)
        e.add_scalar_term(out.beta, input_set_sprocedure_matrix(2 * np, sets.input_set), -1.0);
        if (stealthy) {
            const Matrix& xi = sets.normal_set->Q;
            const Vector& xb = sets.normal_set->c;
            const double l = sc.lambda;
            // -lambda T' with T' = [-G  H  0; *  1 - xi^T Xi xi  0; *  *  0],
            // G = [2X - Xi^{-1}  X Xi; Xi X  Xi], H = [X Xi xi; Xi xi].
            e.add_term_block(0, 0, id_np, out.x, id_np, xv, false, l);  // lambda 2X
            e.add_constant_block(0, 0, -l * xi_inv);
            e.add_term_block(0, 1, id_np, out.x, xi, xv, false, l);     // lambda X Xi
            e.add_constant_block(1, 1, l * xi);
            e.add_term_block(0, 2, id_np, out.x, xi * xb, xv, false, -l);
            e.add_constant_block(1, 2, -l * (xi * xb));
            e.add_constant_block(2, 2, Matrix::Constant(1, 1, -l * (1.0 - xb.dot(xi * xb))));
        }
        p.add_psd_constraint(std::move(e), "invariance");
    }

    // ---- containment: -J - delta W >= 0, blocks (np, 1, np)
    {
        const Matrix& psi = sets.safe_set.Q;
        const Vector& pb = sets.safe_set.c;
        AffineMatrixExpr e({np, 1, np});
        e.add_term_block(0, 0, id_np, out.x, id_np, xv, false, 0.5 * sc.delta);  // delta X
        e.add_term_block(0, 1, id_np, out.x, psi * pb, xv, false, 1.0);          // X Psi psi_bar
        e.add_term_block(0, 2, id_np, out.x, id_np, xv, false, 1.0);             // X
        e.add_constant_block(1, 1, Matrix::Constant(1, 1, 1.0 - pb.dot(psi * pb) - sc.delta));
        e.add_constant_block(2, 2, psi_inv);
        p.add_psd_constraint(std::move(e), "containment");
    }

    // ---- distortion: -L >= 0, blocks (np, np, m, m)
    {
        AffineMatrixExpr e({np, np, m, m});
        add_acal(e, -1.0);
        add_bcal(e, 2, -1.0);
        e.add_term_block(0, 3, id_np, out.c_hat, id_m, cv, true, -1.0);  // -C_hat^T
        e.add_constant_block(2, 2, (sc.gamma - sc.epsilon) * id_m);
        e.add_term_block(2, 3, id_m, out.d_hat, id_m, dv, true, -1.0);   // -D_z^T, D_z = D_hat - I
        e.add_constant_block(2, 3, id_m);
        e.add_constant_block(3, 3, sc.gamma * id_m);
        p.add_psd_constraint(std::move(e), "h-infinity");
    }

    // ---- Q(kappa) > 0
    {
        AffineMatrixExpr e({np, np});
        add_qcal(e, 1.0);
        e.add_constant(-pd_margin * Matrix::Identity(2 * np, 2 * np));
        p.add_psd_constraint(std::move(e), "Q(kappa) positive definite");
    }

    p.add_scalar_nonneg(out.beta, "beta >= 0");
    p.set_sense(LmiProblem::Sense::Minimize);
    p.add_objective_trace(out.x);
    p.set_metadata("synthesis", stealthy);
    p.seal();
    return out;
}

} // namespace safefilter::lmi
