#include "safefilter/lmi/problem.hpp"

#include <stdexcept>

namespace safefilter::lmi {

std::string to_string(SolverStatus s) {
    switch (s) {
        case SolverStatus::Optimal: return "optimal";
        case SolverStatus::Feasible: return "feasible";
        case SolverStatus::Infeasible: return "infeasible";
        case SolverStatus::Unbounded: return "unbounded";
        case SolverStatus::NumericalFailure: return "numerical-failure";
    }
    return "unknown";
}

const Matrix& SolverResult::value(const std::string& name) const {
    auto it = by_name.find(name);
    if (it == by_name.end()) throw std::out_of_range("SolverResult: unknown variable " + name);
    return it->second;
}

void LmiProblem::require_open() const {
    if (sealed_) throw std::logic_error("LmiProblem: already sealed");
}

VarRef LmiProblem::add_variable(const std::string& name, Eigen::Index rows, Eigen::Index cols,
                                bool symmetric) {
    require_open();
    if (symmetric && rows != cols)
        throw std::invalid_argument("LmiProblem: symmetric variable must be square");
    if (rows <= 0 || cols <= 0) throw std::invalid_argument("LmiProblem: empty variable");
    for (const auto& v : vars_) {
        if (v.name == name)
            throw std::invalid_argument("LmiProblem: duplicate variable name " + name);
    }
    MatrixVar v;
    v.id = static_cast<int>(vars_.size());
    v.name = name;
    v.rows = rows;
    v.cols = cols;
    v.symmetric = symmetric;
    vars_.push_back(v);
    return VarRef{v.id};
}

const MatrixVar& LmiProblem::var(VarRef ref) const {
    if (!ref.valid() || static_cast<size_t>(ref.id) >= vars_.size())
        throw std::out_of_range("LmiProblem: bad variable reference");
    return vars_[ref.id];
}

const MatrixVar& LmiProblem::var_by_name(const std::string& name) const {
    for (const auto& v : vars_)
        if (v.name == name) return v;
    throw std::out_of_range("LmiProblem: unknown variable " + name);
}

void LmiProblem::add_psd_constraint(AffineMatrixExpr expr, std::string label) {
    require_open();
    for (int id : expr.referenced_vars()) {
        if (id < 0 || static_cast<size_t>(id) >= vars_.size())
            throw std::invalid_argument("LmiProblem: constraint references unregistered variable");
    }
    constraints_.push_back({std::move(label), std::move(expr)});
}

void LmiProblem::add_scalar_nonneg(VarRef v, std::string label) {
    const auto& info = var(v);
    if (info.rows != 1 || info.cols != 1)
        throw std::invalid_argument("LmiProblem: nonneg constraint requires a scalar variable");
    AffineMatrixExpr e({1});
    e.add_term_block(0, 0, Matrix::Identity(1, 1), v, Matrix::Identity(1, 1), info, false, 0.5);
    add_psd_constraint(std::move(e), std::move(label));
}

void LmiProblem::mark_pd(VarRef v) {
    require_open();
    var(v);
    pd_marked_.push_back(v.id);
}

void LmiProblem::add_objective_term(VarRef v, const Matrix& coeff_matrix) {
    require_open();
    const auto& info = var(v);
    if (coeff_matrix.rows() != info.rows || coeff_matrix.cols() != info.cols)
        throw std::invalid_argument("LmiProblem: objective coefficient shape mismatch");
    auto [it, inserted] = objective_.try_emplace(v.id, coeff_matrix);
    if (!inserted) it->second += coeff_matrix;
}

void LmiProblem::add_objective_trace(VarRef v, double scale) {
    const auto& info = var(v);
    if (info.rows != info.cols)
        throw std::invalid_argument("LmiProblem: trace objective requires a square variable");
    add_objective_term(v, scale * Matrix::Identity(info.rows, info.cols));
}

void LmiProblem::seal() { sealed_ = true; }

double LmiProblem::objective_value(const VarAssignment& values) const {
    double obj = 0.0;
    for (const auto& [id, cmat] : objective_) {
        auto it = values.find(id);
        if (it == values.end()) throw std::invalid_argument("objective_value: missing variable");
        obj += (cmat.array() * it->second.array()).sum();
    }
    return obj;
}

std::vector<std::pair<std::string, double>> LmiProblem::constraint_min_eigs(
    const VarAssignment& values) const {
    std::vector<std::pair<std::string, double>> out;
    out.reserve(constraints_.size());
    for (const auto& c : constraints_) {
        out.emplace_back(c.label, min_eigenvalue(c.expr.eval(values)));
    }
    return out;
}

} // namespace safefilter::lmi
