#ifndef SAFEFILTER_LMI_EXPR_HPP
#define SAFEFILTER_LMI_EXPR_HPP

#include <map>
#include <string>
#include <vector>

#include "safefilter/linalg.hpp"

namespace safefilter::lmi {

/// Named matrix decision variable. Symmetric variables are square and are
/// scalarized over the upper triangle when lowered.
struct MatrixVar {
    int id = -1;
    std::string name;
    Eigen::Index rows = 0;
    Eigen::Index cols = 0;
    bool symmetric = false;

    Eigen::Index scalar_count() const {
        return symmetric ? rows * (rows + 1) / 2 : rows * cols;
    }
};

/// Lightweight handle to a registered variable.
struct VarRef {
    int id = -1;
    bool valid() const { return id >= 0; }
};

/// Values for every variable, keyed by id. Used for certificate replay and
/// for mapping solver output back to matrices.
using VarAssignment = std::map<int, Matrix>;

/// Symmetric affine matrix expression over a block partition.
///
/// The expression is symmetric by construction: every variable term is added
/// together with its transpose, i.e. a sandwich term contributes
///   coeff * (L op(V) R + (L op(V) R)^T),
/// and a scalar term contributes coeff * v * M with symmetric M.
class AffineMatrixExpr {
public:
    explicit AffineMatrixExpr(std::vector<Eigen::Index> block_dims);

    Eigen::Index dim() const { return dim_; }
    const std::vector<Eigen::Index>& block_dims() const { return block_dims_; }

    /// Adds a constant M into block (bi, bj) (and M^T into (bj, bi) when
    /// bi != bj). Diagonal-block constants must be symmetric.
    void add_constant_block(int bi, int bj, const Matrix& m);

    /// Adds coeff * (L op(V) R + transpose) with L placed on block row bi and
    /// R on block column bj. L is (dim_bi x vrows(op)), R is (vcols(op) x dim_bj).
    void add_term_block(int bi, int bj, const Matrix& left, VarRef var, const Matrix& right,
                        const MatrixVar& var_info, bool transpose_var = false,
                        double coeff = 1.0);

    /// Adds coeff * v * M for a 1x1 variable v and symmetric M (full dimension).
    void add_scalar_term(VarRef var, const Matrix& m, double coeff = 1.0);

    /// Adds a constant symmetric matrix over the full dimension.
    void add_constant(const Matrix& m);

    /// Evaluates the expression at the given assignment.
    Matrix eval(const VarAssignment& values) const;

    /// Partial derivative with respect to one scalar coordinate of `var`,
    /// where `basis` is the coordinate's basis matrix in variable space.
    Matrix derivative(VarRef var, const Matrix& basis) const;

    /// Ids of all variables referenced by this expression.
    std::vector<int> referenced_vars() const;

private:
    struct SandwichTerm {
        int var;
        Matrix left;   // dim x (vrows or vcols)
        Matrix right;  // (vcols or vrows) x dim
        bool transpose_var;
        double coeff;
    };
    struct ScalarTerm {
        int var;
        Matrix m;  // dim x dim symmetric
        double coeff;
    };

    Eigen::Index offset(int b) const;

    std::vector<Eigen::Index> block_dims_;
    std::vector<Eigen::Index> offsets_;
    Eigen::Index dim_ = 0;
    Matrix constant_;
    std::vector<SandwichTerm> sandwich_;
    std::vector<ScalarTerm> scalar_;
};

/// Scalar coordinates of a matrix variable: upper-triangle vectorization with
/// sqrt(2) off-diagonal scaling for symmetric variables, column-major
/// otherwise. `basis_matrix(k)` returns B_k with V = sum_k y_k B_k.
Matrix basis_matrix(const MatrixVar& var, Eigen::Index k);

/// Inverse of the scalarization: rebuilds the matrix from coordinates.
Matrix devectorize(const MatrixVar& var, const Vector& coords);

/// Forward scalarization (exact inverse of devectorize).
Vector vectorize(const MatrixVar& var, const Matrix& value);

} // namespace safefilter::lmi

#endif
