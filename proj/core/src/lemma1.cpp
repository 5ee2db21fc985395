#include "safefilter/lmi/lemma1.hpp"

#include <stdexcept>

namespace safefilter::lmi {

Matrix input_set_sprocedure_matrix(Eigen::Index head_dim, const Ellipsoid& input_set) {
    const auto m = input_set.dim();
    const Matrix& R = input_set.Q;
    const Vector& ub = input_set.c;
    const auto d = head_dim + 1 + m;
    Matrix s = Matrix::Zero(d, d);
    s(head_dim, head_dim) = 1.0 - ub.dot(R * ub);
    s.block(head_dim, head_dim + 1, 1, m) = (R * ub).transpose();
    s.block(head_dim + 1, head_dim, m, 1) = R * ub;
    s.block(head_dim + 1, head_dim + 1, m, m) = -R;
    return s;
}

Matrix normal_set_sprocedure_matrix(const Ellipsoid& normal_set, Eigen::Index input_dim) {
    const auto n = normal_set.dim();
    const Matrix& xi = normal_set.Q;
    const Vector& xb = normal_set.c;
    const auto d = n + 1 + input_dim;
    Matrix t = Matrix::Zero(d, d);
    t.topLeftCorner(n, n) = -xi;
    t.block(0, n, n, 1) = xi * xb;
    t.block(n, 0, 1, n) = (xi * xb).transpose();
    t(n, n) = 1.0 - xb.dot(xi * xb);
    return t;
}

Lemma1Assembly assemble_lemma1(const Matrix& A, const Matrix& B, const Ellipsoid& input_set,
                               const std::optional<Ellipsoid>& normal_set, double alpha,
                               double pd_margin) {
    const auto n = A.rows();
    const auto m = B.cols();
    if (A.cols() != n) throw std::invalid_argument("assemble_lemma1: A must be square");
    if (B.rows() != n) throw std::invalid_argument("assemble_lemma1: B row count mismatch");
    if (input_set.dim() != m)
        throw std::invalid_argument("assemble_lemma1: input set dimension mismatch");
    if (normal_set && normal_set->dim() != n)
        throw std::invalid_argument("assemble_lemma1: normal set dimension mismatch");
    if (alpha < 0.0) throw std::invalid_argument("assemble_lemma1: alpha must be nonnegative");

    Lemma1Assembly out;
    auto& p = out.problem;
    out.q = p.add_symmetric("Q", n);
    out.beta = p.add_scalar("beta");
    const bool stealthy = normal_set.has_value();
    if (stealthy) out.lambda = p.add_scalar("lambda");
    const auto& qv = p.var(out.q);

    const Matrix id_n = Matrix::Identity(n, n);

    // -E - alpha F - beta S - lambda T >= 0 over blocks (n, 1, m)
    AffineMatrixExpr main({n, 1, m});
    main.add_term_block(0, 0, id_n, out.q, A, qv, false, -1.0);          // -(Q A + A^T Q)
    main.add_term_block(0, 0, id_n, out.q, id_n, qv, false, -0.5 * alpha);  // -alpha Q
    main.add_constant_block(1, 1, Matrix::Constant(1, 1, alpha));        // -alpha * (-1)
    main.add_term_block(0, 2, id_n, out.q, B, qv, false, -1.0);          // -(Q B | B^T Q)
    main.add_scalar_term(out.beta, input_set_sprocedure_matrix(n, input_set), -1.0);
    if (stealthy)
        main.add_scalar_term(out.lambda, normal_set_sprocedure_matrix(*normal_set, m), -1.0);
    p.add_psd_constraint(std::move(main), "invariance");

    AffineMatrixExpr qpd({n});
    qpd.add_term_block(0, 0, id_n, out.q, id_n, qv, false, 0.5);
    qpd.add_constant(-pd_margin * id_n);
    p.add_psd_constraint(std::move(qpd), "Q positive definite");
    p.mark_pd(out.q);

    p.add_scalar_nonneg(out.beta, "beta >= 0");
    if (stealthy) p.add_scalar_nonneg(out.lambda, "lambda >= 0");

    p.set_sense(LmiProblem::Sense::Maximize);
    p.add_objective_trace(out.q);
    p.set_metadata("analysis", stealthy);
    p.seal();
    return out;
}

Lemma1FixedQAssembly assemble_lemma1_fixed_q(const Matrix& A, const Matrix& B, const Matrix& Q,
                                             const Ellipsoid& input_set,
                                             const std::optional<Ellipsoid>& normal_set,
                                             double alpha) {
    const auto n = A.rows();
    const auto m = B.cols();
    if (Q.rows() != n || Q.cols() != n || !is_symmetric(Q, 1e-8))
        throw std::invalid_argument("assemble_lemma1_fixed_q: Q must be symmetric n x n");
    if (alpha < 0.0) throw std::invalid_argument("assemble_lemma1_fixed_q: alpha >= 0 required");

    Lemma1FixedQAssembly out;
    auto& p = out.problem;
    out.beta = p.add_scalar("beta");
    const bool stealthy = normal_set.has_value();
    if (stealthy) out.lambda = p.add_scalar("lambda");

    const auto d = n + 1 + m;
    Matrix base = Matrix::Zero(d, d);
    const Matrix qa = sym_part(Q * A + A.transpose() * Q);
    base.topLeftCorner(n, n) = -qa - alpha * Q;
    base(n, n) = alpha;
    base.block(0, n + 1, n, m) = -(Q * B);
    base.block(n + 1, 0, m, n) = -(Q * B).transpose();

    AffineMatrixExpr main({n, 1, m});
    main.add_constant(base);
    main.add_scalar_term(out.beta, input_set_sprocedure_matrix(n, input_set), -1.0);
    if (stealthy)
        main.add_scalar_term(out.lambda, normal_set_sprocedure_matrix(*normal_set, m), -1.0);
    p.add_psd_constraint(std::move(main), "invariance (fixed Q)");
    p.add_scalar_nonneg(out.beta, "beta >= 0");
    if (stealthy) p.add_scalar_nonneg(out.lambda, "lambda >= 0");
    p.set_metadata("invariance-replay", stealthy);
    p.seal();
    return out;
}

} // namespace safefilter::lmi
