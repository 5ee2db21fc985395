#ifndef SAFEFILTER_LMI_PROBLEM_HPP
#define SAFEFILTER_LMI_PROBLEM_HPP

#include <optional>
#include <string>
#include <vector>

#include "safefilter/lmi/expr.hpp"

namespace safefilter::lmi {

enum class SolverStatus { Optimal, Feasible, Infeasible, Unbounded, NumericalFailure };

std::string to_string(SolverStatus s);

struct SolverOptions {
    double tol = 1e-8;           // feasibility / relative-gap target
    int max_iter = 200;
    double infeas_cert_tol = 1e-9;  // Farkas certificate quality
    bool verbose = false;
};

struct Residuals {
    double max_psd_violation = 0.0;  // most negative constraint eigenvalue, sign-flipped
    double max_eq_violation = 0.0;   // backend dual equality residual
    double relative_gap = 0.0;
};

struct SolverResult {
    SolverStatus status = SolverStatus::NumericalFailure;
    VarAssignment values;                      // by variable id
    std::map<std::string, Matrix> by_name;     // same values, by variable name
    double objective = 0.0;
    Residuals residuals;
    double solve_time_s = 0.0;
    int iterations = 0;
    std::string message;

    bool ok() const {
        return status == SolverStatus::Optimal || status == SolverStatus::Feasible;
    }
    const Matrix& value(const std::string& name) const;
};

struct Constraint {
    std::string label;
    AffineMatrixExpr expr;  // expr(y) >= 0 (PSD)
};

/// Declarative container for an LMI feasibility/optimization problem:
/// a variable registry, PSD constraints, and a linear objective. Built
/// single-owner, then sealed; a sealed problem is immutable.
class LmiProblem {
public:
    enum class Sense { Minimize, Maximize };

    VarRef add_variable(const std::string& name, Eigen::Index rows, Eigen::Index cols,
                        bool symmetric);
    VarRef add_symmetric(const std::string& name, Eigen::Index n) {
        return add_variable(name, n, n, true);
    }
    VarRef add_scalar(const std::string& name) { return add_variable(name, 1, 1, false); }

    const MatrixVar& var(VarRef ref) const;
    const MatrixVar& var_by_name(const std::string& name) const;
    const std::vector<MatrixVar>& variables() const { return vars_; }

    void add_psd_constraint(AffineMatrixExpr expr, std::string label);
    /// v >= 0 as a 1x1 PSD block.
    void add_scalar_nonneg(VarRef v, std::string label);
    const std::vector<Constraint>& constraints() const { return constraints_; }

    /// Marks a symmetric variable as PD-constrained (used for the post-solve
    /// eigenvalue check); the caller still adds the matching expr - eps I >= 0
    /// constraint.
    void mark_pd(VarRef v);
    const std::vector<int>& pd_marked() const { return pd_marked_; }

    /// Accumulates <coeff_matrix, V> into the objective.
    void add_objective_term(VarRef v, const Matrix& coeff_matrix);
    void add_objective_trace(VarRef v, double scale = 1.0);
    void set_sense(Sense s) { sense_ = s; }
    Sense sense() const { return sense_; }
    const std::map<int, Matrix>& objective_terms() const { return objective_; }
    bool has_objective() const { return !objective_.empty(); }

    void set_metadata(std::string mode, bool stealthy) {
        mode_ = std::move(mode);
        stealthy_ = stealthy;
    }
    const std::string& mode() const { return mode_; }
    bool stealthy() const { return stealthy_; }

    void seal();
    bool sealed() const { return sealed_; }

    /// Objective value at an assignment (in the problem's own sense).
    double objective_value(const VarAssignment& values) const;

    /// Min eigenvalue of each constraint at an assignment (certificate replay).
    std::vector<std::pair<std::string, double>> constraint_min_eigs(
        const VarAssignment& values) const;

private:
    void require_open() const;

    std::vector<MatrixVar> vars_;
    std::vector<Constraint> constraints_;
    std::map<int, Matrix> objective_;
    std::vector<int> pd_marked_;
    Sense sense_ = Sense::Minimize;
    std::string mode_;
    bool stealthy_ = false;
    bool sealed_ = false;
};

} // namespace safefilter::lmi

#endif
