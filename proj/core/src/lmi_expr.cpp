#include "safefilter/lmi/expr.hpp"

#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

namespace safefilter::lmi {

AffineMatrixExpr::AffineMatrixExpr(std::vector<Eigen::Index> block_dims)
    : block_dims_(std::move(block_dims)) {
    offsets_.resize(block_dims_.size());
    Eigen::Index off = 0;
    for (size_t i = 0; i < block_dims_.size(); ++i) {
        if (block_dims_[i] < 0) throw std::invalid_argument("AffineMatrixExpr: negative block dim");
        offsets_[i] = off;
        off += block_dims_[i];
    }
    dim_ = off;
    constant_ = Matrix::Zero(dim_, dim_);
}

Eigen::Index AffineMatrixExpr::offset(int b) const {
    if (b < 0 || static_cast<size_t>(b) >= block_dims_.size())
        throw std::out_of_range("AffineMatrixExpr: block index out of range");
    return offsets_[b];
}

void AffineMatrixExpr::add_constant_block(int bi, int bj, const Matrix& m) {
    const auto oi = offset(bi);
    const auto oj = offset(bj);
    if (m.rows() != block_dims_[bi] || m.cols() != block_dims_[bj])
        throw std::invalid_argument("AffineMatrixExpr: constant block shape mismatch");
    if (bi == bj && !is_symmetric(m, 1e-9))
        throw std::invalid_argument("AffineMatrixExpr: diagonal constant block must be symmetric");
    constant_.block(oi, oj, m.rows(), m.cols()) += m;
    if (bi != bj) constant_.block(oj, oi, m.cols(), m.rows()) += m.transpose();
}

void AffineMatrixExpr::add_constant(const Matrix& m) {
    if (m.rows() != dim_ || m.cols() != dim_ || !is_symmetric(m, 1e-9))
        throw std::invalid_argument("AffineMatrixExpr: full constant must be symmetric dim x dim");
    constant_ += m;
}

void AffineMatrixExpr::add_term_block(int bi, int bj, const Matrix& left, VarRef var,
                                      const Matrix& right, const MatrixVar& var_info,
                                      bool transpose_var, double coeff) {
    if (!var.valid()) throw std::invalid_argument("AffineMatrixExpr: invalid variable reference");
    const auto vr = transpose_var ? var_info.cols : var_info.rows;
    const auto vc = transpose_var ? var_info.rows : var_info.cols;
    if (left.rows() != block_dims_[bi] || left.cols() != vr)
        throw std::invalid_argument("AffineMatrixExpr: left coefficient shape mismatch");
    if (right.rows() != vc || right.cols() != block_dims_[bj])
        throw std::invalid_argument("AffineMatrixExpr: right coefficient shape mismatch");
    Matrix lfull = Matrix::Zero(dim_, vr);
    lfull.middleRows(offset(bi), block_dims_[bi]) = left;
    Matrix rfull = Matrix::Zero(vc, dim_);
    rfull.middleCols(offset(bj), block_dims_[bj]) = right;
    sandwich_.push_back({var.id, std::move(lfull), std::move(rfull), transpose_var, coeff});
}

void AffineMatrixExpr::add_scalar_term(VarRef var, const Matrix& m, double coeff) {
    if (!var.valid()) throw std::invalid_argument("AffineMatrixExpr: invalid variable reference");
    if (m.rows() != dim_ || m.cols() != dim_ || !is_symmetric(m, 1e-9))
        throw std::invalid_argument("AffineMatrixExpr: scalar term matrix must be symmetric dim x dim");
    scalar_.push_back({var.id, m, coeff});
}

Matrix AffineMatrixExpr::eval(const VarAssignment& values) const {
    Matrix out = constant_;
    for (const auto& t : sandwich_) {
        auto it = values.find(t.var);
        if (it == values.end())
            throw std::invalid_argument("AffineMatrixExpr::eval: missing variable value");
        const Matrix v = t.transpose_var ? it->second.transpose() : it->second;
        const Matrix piece = t.coeff * (t.left * v * t.right);
        out += piece + piece.transpose();
    }
    for (const auto& t : scalar_) {
        auto it = values.find(t.var);
        if (it == values.end())
            throw std::invalid_argument("AffineMatrixExpr::eval: missing variable value");
        if (it->second.size() != 1)
            throw std::invalid_argument("AffineMatrixExpr::eval: scalar term on non-scalar var");
        out += t.coeff * it->second(0, 0) * t.m;
    }
    return out;
}

Matrix AffineMatrixExpr::derivative(VarRef var, const Matrix& basis) const {
    Matrix out = Matrix::Zero(dim_, dim_);
    for (const auto& t : sandwich_) {
        if (t.var != var.id) continue;
        const Matrix v = t.transpose_var ? basis.transpose() : basis;
        const Matrix piece = t.coeff * (t.left * v * t.right);
        out += piece + piece.transpose();
    }
    for (const auto& t : scalar_) {
        if (t.var != var.id) continue;
        out += t.coeff * basis(0, 0) * t.m;
    }
    return out;
}

std::vector<int> AffineMatrixExpr::referenced_vars() const {
    std::set<int> ids;
    for (const auto& t : sandwich_) ids.insert(t.var);
    for (const auto& t : scalar_) ids.insert(t.var);
    return {ids.begin(), ids.end()};
}

Matrix basis_matrix(const MatrixVar& var, Eigen::Index k) {
    if (k < 0 || k >= var.scalar_count())
        throw std::out_of_range("basis_matrix: coordinate out of range");
    Matrix b = Matrix::Zero(var.rows, var.cols);
    if (!var.symmetric) {
        b(k % var.rows, k / var.rows) = 1.0;  // column-major
        return b;
    }
    // upper triangle, row by row: (0,0),(0,1),...,(0,n-1),(1,1),...
    Eigen::Index idx = 0;
    for (Eigen::Index i = 0; i < var.rows; ++i) {
        for (Eigen::Index j = i; j < var.cols; ++j) {
            if (idx == k) {
                if (i == j) {
                    b(i, i) = 1.0;
                } else {
                    const double s = 1.0 / std::sqrt(2.0);
                    b(i, j) = s;
                    b(j, i) = s;
                }
                return b;
            }
            ++idx;
        }
    }
    return b;
}

Vector vectorize(const MatrixVar& var, const Matrix& value) {
    if (value.rows() != var.rows || value.cols() != var.cols)
        throw std::invalid_argument("vectorize: value shape mismatch");
    Vector out(var.scalar_count());
    if (!var.symmetric) {
        Eigen::Index idx = 0;
        for (Eigen::Index j = 0; j < var.cols; ++j)
            for (Eigen::Index i = 0; i < var.rows; ++i) out(idx++) = value(i, j);
        return out;
    }
    Eigen::Index idx = 0;
    const double s = std::sqrt(2.0);
    for (Eigen::Index i = 0; i < var.rows; ++i) {
        for (Eigen::Index j = i; j < var.cols; ++j) {
            out(idx++) = (i == j) ? value(i, i) : s * 0.5 * (value(i, j) + value(j, i));
        }
    }
    return out;
}

Matrix devectorize(const MatrixVar& var, const Vector& coords) {
    if (coords.size() != var.scalar_count())
        throw std::invalid_argument("devectorize: coordinate count mismatch");
    Matrix out(var.rows, var.cols);
    if (!var.symmetric) {
        Eigen::Index idx = 0;
        for (Eigen::Index j = 0; j < var.cols; ++j)
            for (Eigen::Index i = 0; i < var.rows; ++i) out(i, j) = coords(idx++);
        return out;
    }
    Eigen::Index idx = 0;
    const double s = 1.0 / std::sqrt(2.0);
    for (Eigen::Index i = 0; i < var.rows; ++i) {
        for (Eigen::Index j = i; j < var.cols; ++j) {
            const double v = coords(idx++);
            if (i == j) {
                out(i, i) = v;
            } else {
                out(i, j) = v * s;
                out(j, i) = v * s;
            }
        }
    }
    return out;
}

} // namespace safefilter::lmi
