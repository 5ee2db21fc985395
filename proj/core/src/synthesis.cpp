#include "safefilter/synthesis.hpp"

#include <algorithm>
#include <future>
#include <limits>
#include <stdexcept>

#include "safefilter/hinf.hpp"
#include "safefilter/lmi/lemma1.hpp"

namespace safefilter {

using lmi::SolverStatus;

AnalysisResult analyze_reachable_set(const StateSpaceModel& plant, const lmi::SafetySets& sets,
                                     double alpha, bool stealthy,
                                     const lmi::SolverOptions& options) {
    if (alpha < 0.0) throw std::invalid_argument("analyze_reachable_set: alpha must be >= 0");
    if (!is_hurwitz(plant.A)) throw std::invalid_argument("analyze_reachable_set: A_p not Hurwitz");

    AnalysisResult out;
    out.alpha_guidance = {0.0, 2.0 * min_decay_rate(plant.A)};
    out.degenerate_alpha = (alpha == 0.0);

    // Decay-rate bound: without the normal-set relaxation, the invariance
    // inequality forces A^T Q + Q A + alpha Q <= 0, hence alpha < 2 min|Re
    // eig(A_p)|. Beyond it the problem is infeasible by margins far below
    // solver resolution, so it is reported directly.
    if (!stealthy && alpha >= out.alpha_guidance.second) {
        out.status = SolverStatus::Infeasible;
        out.solver_result.status = SolverStatus::Infeasible;
        out.solver_result.message = "alpha beyond the decay-rate bound 2 min|Re eig(A_p)| = " +
                                    std::to_string(out.alpha_guidance.second);
        return out;
    }

    std::optional<Ellipsoid> normal;
    if (stealthy) {
        if (!sets.normal_set)
            throw std::invalid_argument("analyze_reachable_set: stealthy mode needs a normal set");
        normal = *sets.normal_set;  // n_f = 0: extended state = plant state
    }
    auto assembly = lmi::assemble_lemma1(plant.A, plant.B, sets.input_set, normal, alpha);
    out.solver_result = lmi::solve(assembly.problem, options);
    out.status = out.solver_result.status;
    if (!out.solver_result.ok()) return out;

    out.Q = sym_part(out.solver_result.value("Q"));
    out.trace_q = out.Q.trace();
    out.beta = out.solver_result.value("beta")(0, 0);
    if (stealthy) out.lambda = out.solver_result.value("lambda")(0, 0);
    out.projection = Ellipsoid::centered(out.Q);
    out.safe = is_contained(*out.projection, sets.safe_set);
    return out;
}

FilterRealization extract_filter(const Matrix& X, const Matrix& Y, const Matrix& A_hat,
                                 const Matrix& B_hat, const Matrix& C_hat, const Matrix& D_hat,
                                 const StateSpaceModel& plant, const Matrix& gamma_f) {
    const auto np = plant.n();
    const auto m = plant.m();
    const Matrix n_mat = Matrix::Identity(np, np) - Y * X;
    const auto svd = n_mat.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double smin = svd.singularValues().minCoeff();
    const double smax = svd.singularValues().maxCoeff();
    if (!(smin > 0.0) || smax / smin > 1e12) {
        throw std::runtime_error(
            "extract_filter: I - Y X is numerically singular (sigma_min = " +
            std::to_string(smin) + ", sigma_max = " + std::to_string(smax) +
            "); rescale X by (1 + 1e-6) and re-solve");
    }
    const Matrix d_f = D_hat;
    const Matrix c_f = C_hat;  // M = I
    const Matrix b_f = svd.solve(B_hat - Y * plant.B * gamma_f * d_f);
    const Matrix a_f = svd.solve(A_hat - Y * plant.A * X - Y * plant.B * gamma_f * c_f);
    const Matrix gamma_c = Matrix::Identity(m, m) - gamma_f;
    return FilterRealization(a_f, b_f, c_f, d_f, gamma_f, gamma_c);
}

namespace {

// Q Pi_1 = Pi_2 with Pi_1 = [X I; I 0], Pi_2 = [I Y; 0 N^T], N = I - Y X.
Matrix reconstruct_q(const Matrix& X, const Matrix& Y) {
    const auto np = X.rows();
    Matrix pi1(2 * np, 2 * np), pi2(2 * np, 2 * np);
    pi1 << X, Matrix::Identity(np, np), Matrix::Identity(np, np), Matrix::Zero(np, np);
    const Matrix n_mat = Matrix::Identity(np, np) - Y * X;
    pi2 << Matrix::Identity(np, np), Y, Matrix::Zero(np, np), n_mat.transpose();
    const Matrix q = pi2 * pi1.partialPivLu().solve(Matrix::Identity(2 * np, 2 * np));
    return sym_part(q);
}

} // namespace

SynthesisOutcome synthesize_filter(const StateSpaceModel& plant, const lmi::SafetySets& sets,
                                   const SynthesisConfig& config, const Matrix& gamma_f,
                                   const Matrix& gamma_c) {
    if (!is_hurwitz(plant.A)) throw std::invalid_argument("synthesize_filter: A_p not Hurwitz");

    SynthesisOutcome out;
    out.gamma_budget = config.gamma;

    if (!config.stealthy && config.alpha >= 2.0 * min_decay_rate(plant.A)) {
        // Same decay-rate theorem as in analysis: the extended A keeps every
        // plant eigenvalue, so no filter can rescue alpha past the bound.
        out.status = SolverStatus::Infeasible;
        out.message = "alpha beyond the decay-rate bound 2 min|Re eig(A_p)| = " +
                      std::to_string(2.0 * min_decay_rate(plant.A));
        out.solver_result.status = SolverStatus::Infeasible;
        out.solver_result.message = out.message;
        return out;
    }

    lmi::SafetySets effective = sets;
    if (!config.stealthy) effective.normal_set.reset();
    auto assembly =
        lmi::assemble_theorem1(plant, gamma_f, gamma_c, effective, config.scalars());
    out.solver_result = lmi::solve(assembly.problem, config.solver);
    out.status = out.solver_result.status;
    out.message = out.solver_result.message;
    if (!out.solver_result.ok()) return out;

    out.X = sym_part(out.solver_result.value("X"));
    out.Y = sym_part(out.solver_result.value("Y"));
    out.A_hat = out.solver_result.value("A_hat");
    out.B_hat = out.solver_result.value("B_hat");
    out.C_hat = out.solver_result.value("C_hat");
    out.D_hat = out.solver_result.value("D_hat");
    out.beta = out.solver_result.value("beta")(0, 0);
    out.objective = out.X.trace();

    out.filter = extract_filter(out.X, out.Y, out.A_hat, out.B_hat, out.C_hat, out.D_hat, plant,
                                gamma_f);
    out.Q = reconstruct_q(out.X, out.Y);

    // Post-hoc guarantees: E_{x_p}(X^{-1}) ⊆ E_s and the distortion budget.
    Eigen::SelfAdjointEigenSolver<Matrix> es(out.X);
    const Matrix x_inv = es.eigenvectors() * es.eigenvalues().cwiseInverse().asDiagonal() *
                         es.eigenvectors().transpose();
    out.containment = is_contained(Ellipsoid::centered(sym_part(x_inv)), sets.safe_set, 1e-6);
    const auto extended = build_extended_system(plant, *out.filter);
    out.hinf_value = hinf_norm(extended);
    return out;
}

SynthesisOutcome synthesize_filter(const StateSpaceModel& plant, const lmi::SafetySets& sets,
                                   const SynthesisConfig& config) {
    const auto m = plant.m();
    return synthesize_filter(plant, sets, config, Matrix::Identity(m, m), Matrix::Zero(m, m));
}

GridSearchResult grid_search(const StateSpaceModel& plant, const lmi::SafetySets& sets,
                             const GridSpec& grid, const SynthesisConfig& base,
                             const Matrix& gamma_f, const Matrix& gamma_c) {
    if (grid.alpha.empty() || grid.lambda.empty() || grid.delta.empty() || grid.gamma.empty())
        throw std::invalid_argument("grid_search: grids must be nonempty");

    std::vector<SynthesisConfig> configs;
    for (double a : grid.alpha)
        for (double l : grid.lambda)
            for (double d : grid.delta)
                for (double g : grid.gamma) {
                    SynthesisConfig c = base;
                    c.alpha = a;
                    c.lambda = l;
                    c.delta = d;
                    c.gamma = g;
                    configs.push_back(c);
                }

    std::vector<std::future<SynthesisOutcome>> jobs;
    jobs.reserve(configs.size());
    for (const auto& c : configs) {
        jobs.push_back(std::async(std::launch::async, [&, c] {
            return synthesize_filter(plant, sets, c, gamma_f, gamma_c);
        }));
    }

    GridSearchResult out;
    size_t best_idx = configs.size();
    std::vector<SynthesisOutcome> outcomes;
    outcomes.reserve(configs.size());
    for (auto& j : jobs) outcomes.push_back(j.get());

    for (size_t i = 0; i < configs.size(); ++i) {
        const auto& c = configs[i];
        const auto& o = outcomes[i];
        out.table.push_back({c.alpha, c.lambda, c.delta, c.gamma, o.status,
                             o.ok() ? o.objective : std::numeric_limits<double>::quiet_NaN(),
                             o.ok() ? o.beta : std::numeric_limits<double>::quiet_NaN()});
        if (o.ok() && (best_idx == configs.size() || o.objective < outcomes[best_idx].objective)) {
            best_idx = i;
        }
    }
    if (best_idx < configs.size()) {
        out.best = outcomes[best_idx];
        out.best_row = out.table[best_idx];
    }
    return out;
}

} // namespace safefilter
