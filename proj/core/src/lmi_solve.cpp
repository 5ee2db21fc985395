#include "safefilter/lmi/solve.hpp"

#include <cmath>
#include <set>

namespace safefilter::lmi {

namespace {

// Exact structural infeasibility: a diagonal entry of some block whose
// constant part is negative while no coefficient matrix touches it. The unit
// certificate e_d e_d^T is a rigorous Farkas witness.
std::optional<std::string> constant_negative_diagonal(const StandardConicForm& f) {
    for (const auto& blk : f.blocks) {
        std::set<int> touched;
        for (const auto& [idx, trips] : blk.coefficients)
            for (const auto& t : trips)
                if (t.row == t.col) touched.insert(t.row);
        for (const auto& t : blk.constant) {
            if (t.row == t.col && t.value < -1e-15 && !touched.count(t.row)) {
                return "constraint '" + blk.label + "' has constant negative diagonal entry (" +
                       std::to_string(t.row) + "," + std::to_string(t.row) + ") = " +
                       std::to_string(t.value);
            }
        }
    }
    return std::nullopt;
}

} // namespace

SolverResult solve(const LmiProblem& p, const SolverOptions& options,
                   const sdp::SdpBackend& backend) {
    SolverResult res;
    const StandardConicForm form = to_standard_form(p);

    if (auto why = constant_negative_diagonal(form)) {
        res.status = SolverStatus::Infeasible;
        res.message = "structurally infeasible: " + *why;
        return res;
    }

    sdp::BackendSolution sol = backend.solve(form, options);
    res.status = sol.status;
    res.message = sol.message;
    res.iterations = sol.iterations;
    res.solve_time_s = sol.solve_time_s;
    res.residuals.max_eq_violation = sol.dual_residual;
    res.residuals.relative_gap = sol.relative_gap;
    if (!sol.ok()) return res;

    res.values = form.index_map.extract_all(sol.y);
    for (const auto& v : p.variables()) res.by_name[v.name] = res.values.at(v.id);
    res.objective = form.objective_sign * sol.objective;

    double worst = 0.0;
    for (const auto& [label, mineig] : p.constraint_min_eigs(res.values))
        worst = std::max(worst, -mineig);
    res.residuals.max_psd_violation = worst;

    // PD-marked variables must come back numerically positive definite.
    for (int id : p.pd_marked()) {
        const double me = min_eigenvalue(res.values.at(id));
        if (me < -10.0 * options.tol) {
            res.status = SolverStatus::NumericalFailure;
            res.message = "PD-constrained variable '" + p.var(VarRef{id}).name +
                          "' has min eigenvalue " + std::to_string(me);
            return res;
        }
    }
    return res;
}

} // namespace safefilter::lmi
