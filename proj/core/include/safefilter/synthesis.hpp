#ifndef SAFEFILTER_SYNTHESIS_HPP
#define SAFEFILTER_SYNTHESIS_HPP

#include <optional>
#include <string>
#include <vector>

#include "safefilter/lmi/solve.hpp"
#include "safefilter/lmi/theorem1.hpp"
#include "safefilter/state_space.hpp"

namespace safefilter {

/// Fixed scalars, mode and solver settings of one synthesis run.
struct SynthesisConfig {
    double alpha = 1.0;
    double lambda = 0.5;
    double delta = 0.9;
    double gamma = 0.61;
    double epsilon = 1e-8;
    bool stealthy = true;
    lmi::SolverOptions solver;

    lmi::Theorem1Scalars scalars() const { return {alpha, lambda, delta, gamma, epsilon}; }
};

/// Result of the reachable-set analysis for the unfiltered plant.
struct AnalysisResult {
    lmi::SolverStatus status = lmi::SolverStatus::NumericalFailure;
    Matrix Q;                  // invariant-set shape (plant coordinates), valid when ok
    std::optional<Ellipsoid> projection;
    bool safe = false;         // projection contained in the safe set
    double beta = 0.0;
    double lambda = 0.0;
    double trace_q = 0.0;
    std::pair<double, double> alpha_guidance{0.0, 0.0};  // feasible-alpha range hint
    bool degenerate_alpha = false;                       // alpha == 0 loses the level-set term
    lmi::SolverResult solver_result;

    bool ok() const {
        return status == lmi::SolverStatus::Optimal || status == lmi::SolverStatus::Feasible;
    }
};

/// Solves the invariance problem for the plant without a filter (n_f = 0,
/// D_f = I) and reports whether the invariant ellipsoid stays inside the
/// safe set. For the non-stealthy problem, alpha >= 2 min|Re eig(A_p)| is a
/// provable infeasibility (the decay-rate bound), reported without a solver
/// run; the stealthy problem has no such bound.
AnalysisResult analyze_reachable_set(const StateSpaceModel& plant, const lmi::SafetySets& sets,
                                     double alpha, bool stealthy,
                                     const lmi::SolverOptions& options = {});

/// Recovers the filter from the solved change-of-variables matrices with the
/// deterministic factorization M = I, N = I - Y X. Throws when I - Y X is
/// numerically singular (condition number above 1e12); the error suggests
/// rescaling X and re-solving.
FilterRealization extract_filter(const Matrix& X, const Matrix& Y, const Matrix& A_hat,
                                 const Matrix& B_hat, const Matrix& C_hat, const Matrix& D_hat,
                                 const StateSpaceModel& plant, const Matrix& gamma_f);

struct SynthesisOutcome {
    lmi::SolverStatus status = lmi::SolverStatus::NumericalFailure;
    std::optional<FilterRealization> filter;
    Matrix X, Y, A_hat, B_hat, C_hat, D_hat;
    Matrix Q;              // reconstructed 2 n_p invariant-set shape
    double beta = 0.0;
    double objective = 0.0;  // trace(X)
    bool containment = false;
    double hinf_value = 0.0;
    double gamma_budget = 0.0;
    lmi::SolverResult solver_result;
    std::string message;

    bool ok() const {
        return status == lmi::SolverStatus::Optimal || status == lmi::SolverStatus::Feasible;
    }
};

/// Assembles and solves the synthesis problem, extracts the filter,
/// reconstructs Q from the change-of-variables identity Q Pi_1 = Pi_2, and
/// verifies containment and the H-infinity budget post hoc.
SynthesisOutcome synthesize_filter(const StateSpaceModel& plant, const lmi::SafetySets& sets,
                                   const SynthesisConfig& config,
                                   const Matrix& gamma_f, const Matrix& gamma_c);

/// Convenience overload with full filtering (gamma_f = I).
SynthesisOutcome synthesize_filter(const StateSpaceModel& plant, const lmi::SafetySets& sets,
                                   const SynthesisConfig& config);

struct GridSpec {
    std::vector<double> alpha{1.0};
    std::vector<double> lambda{0.5};
    std::vector<double> delta{0.9};
    std::vector<double> gamma{0.61};
};

struct GridRow {
    double alpha, lambda, delta, gamma;
    lmi::SolverStatus status;
    double objective;  // trace(X) when feasible
    double beta;
};

struct GridSearchResult {
    std::optional<SynthesisOutcome> best;
    std::optional<GridRow> best_row;
    std::vector<GridRow> table;
};

/// Independent solves over the scalar grid (run concurrently); the feasible
/// outcome minimizing trace(X) wins, ties broken by grid order.
GridSearchResult grid_search(const StateSpaceModel& plant, const lmi::SafetySets& sets,
                             const GridSpec& grid, const SynthesisConfig& base,
                             const Matrix& gamma_f, const Matrix& gamma_c);

} // namespace safefilter

#endif
