#include "safefilter/verify.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "safefilter/hinf.hpp"
#include "safefilter/lmi/lemma1.hpp"

namespace safefilter {

InputSignal AttackPolicy::signal() const {
    switch (kind) {
        case Kind::GreedyWorstCase: {
            const Matrix bt = B.transpose();
            const Matrix q = Q;
            const Ellipsoid u_set = input_set;
            Eigen::LLT<Matrix> rf(u_set.Q);
            if (rf.info() != Eigen::Success)
                throw std::invalid_argument("AttackPolicy: greedy kind needs definite R");
            return [bt, q, u_set, rf](double, const Vector& zeta) -> Vector {
                const Vector g = bt * (q * zeta);
                const Vector rinv_g = rf.solve(g);
                const double denom = g.dot(rinv_g);
                if (denom <= 0.0) return u_set.c;
                return u_set.c + rinv_g / std::sqrt(denom);
            };
        }
        case Kind::BoundaryRandom: {
            const Ellipsoid u_set = input_set;
            const double dw = dwell;
            const std::uint64_t sd = seed;
            return [u_set, dw, sd](double t, const Vector&) -> Vector {
                const auto interval = static_cast<std::uint64_t>(t / dw);
                // one boundary point per dwell interval, seeded by interval index
                return sample_boundary(u_set, 1, sd * 0x9e3779b9ULL + interval)[0];
            };
        }
        case Kind::Constant: {
            const Vector v = constant_value;
            return [v](double, const Vector&) { return v; };
        }
    }
    throw std::logic_error("AttackPolicy: unknown kind");
}

AttackPolicy greedy_attack_policy(const StateSpaceModel& extended, const Matrix& Q,
                                  const Ellipsoid& input_set) {
    if (Q.rows() != extended.n() || Q.cols() != extended.n())
        throw std::invalid_argument("greedy_attack_policy: Q dimension mismatch");
    if (min_eigenvalue(input_set.Q) <= 0.0)
        throw std::invalid_argument("greedy_attack_policy: R must be positive definite");
    AttackPolicy p;
    p.kind = AttackPolicy::Kind::GreedyWorstCase;
    p.input_set = input_set;
    p.B = extended.B;
    p.Q = sym_part(Q);
    return p;
}

AttackPolicy boundary_random_policy(const Ellipsoid& input_set, std::uint64_t seed, double dwell) {
    AttackPolicy p;
    p.kind = AttackPolicy::Kind::BoundaryRandom;
    p.input_set = input_set;
    p.seed = seed;
    p.dwell = dwell;
    return p;
}

AttackPolicy constant_policy(const Ellipsoid& input_set, const Vector& value) {
    if (!contains_point(input_set, value, 1e-12))
        throw std::invalid_argument("constant_policy: value not in the input set");
    AttackPolicy p;
    p.kind = AttackPolicy::Kind::Constant;
    p.input_set = input_set;
    p.constant_value = value;
    return p;
}

std::vector<double> default_alpha_grid(const Matrix& a) {
    const double bound = 2.0 * min_decay_rate(a);
    std::vector<double> grid;
    for (double v : {0.1, 0.25, 0.5, 1.0, 2.0, 5.0, 10.0, 15.0, 19.0})
        if (v > 0.0 && v < bound) grid.push_back(v);
    return grid;
}

InvarianceCheck check_invariance(const StateSpaceModel& extended, const Matrix& Q,
                                 const lmi::SafetySets& sets, const std::vector<double>& alpha_grid,
                                 bool stealthy, const lmi::SolverOptions& options) {
    if (min_eigenvalue(Q) <= 0.0)
        throw std::invalid_argument("check_invariance: Q must be positive definite");
    const auto n = extended.n();
    const auto np = sets.safe_set.dim();

    std::optional<Ellipsoid> normal_ext;
    if (stealthy) {
        if (!sets.normal_set)
            throw std::invalid_argument("check_invariance: stealthy mode needs a normal set");
        // extend Xi_p to the full state: Xi = diag(Xi_p, 0)
        Matrix xi = Matrix::Zero(n, n);
        xi.topLeftCorner(np, np) = sets.normal_set->Q;
        Vector xb = Vector::Zero(n);
        xb.head(np) = sets.normal_set->c;
        normal_ext = Ellipsoid(xi, xb, RankMode::PositiveSemidefinite);
    }

    InvarianceCheck out;
    for (double alpha : alpha_grid) {
        auto assembly = lmi::assemble_lemma1_fixed_q(extended.A, extended.B, Q, sets.input_set,
                                                     normal_ext, alpha);
        const auto res = lmi::solve(assembly.problem, options);
        out.status_by_alpha[alpha] = res.status;
        out.residual_by_alpha[alpha] =
            res.ok() ? res.residuals.max_psd_violation : std::numeric_limits<double>::quiet_NaN();
        if (res.ok() && !out.certified) {
            out.certified = true;
            out.certifying_alpha = alpha;
        }
    }
    return out;
}

MonteCarloResult monte_carlo_invariance(const StateSpaceModel& extended, const Matrix& Q,
                                        const AttackPolicy& policy, double t_end, double dt,
                                        int n_runs, std::uint64_t seed, const lmi::SafetySets& sets,
                                        Eigen::Index n_plant, const Vector& zeta0,
                                        double level_tol) {
    if (zeta0.size() != extended.n())
        throw std::invalid_argument("monte_carlo_invariance: zeta0 dimension mismatch");
    if (zeta0.dot(Q * zeta0) > 1.0 + level_tol)
        throw std::invalid_argument("monte_carlo_invariance: zeta0 outside the level set");

    const bool deterministic = policy.kind != AttackPolicy::Kind::BoundaryRandom;
    const int runs = deterministic ? 1 : n_runs;

    MonteCarloResult out;
    out.runs = runs;
    for (int r = 0; r < runs; ++r) {
        AttackPolicy p = policy;
        p.seed = seed + static_cast<std::uint64_t>(r) * 0x100000001b3ULL;
        const Trajectory traj = simulate(extended, p.signal(), zeta0, t_end, dt);
        double run_max = 0.0;
        std::optional<double> esc, unsafe, abnormal;
        for (Eigen::Index k = 0; k < traj.states.rows(); ++k) {
            const Vector zeta = traj.states.row(k).transpose();
            const double v = zeta.dot(Q * zeta);
            run_max = std::max(run_max, v);
            const double t = traj.t_grid[k];
            if (!esc && v > 1.0 + level_tol) esc = t;
            const Vector xp = zeta.head(n_plant);
            if (!unsafe && !contains_point(sets.safe_set, xp)) unsafe = t;
            if (!abnormal && sets.normal_set && !contains_point(*sets.normal_set, xp))
                abnormal = t;
        }
        if (run_max >= out.max_level) {
            out.max_level = run_max;
            out.worst_trajectory = traj;
        }
        auto keep_earliest = [](std::optional<double>& dst, const std::optional<double>& src) {
            if (src && (!dst || *src < *dst)) dst = src;
        };
        keep_earliest(out.first_escape_time, esc);
        keep_earliest(out.first_unsafe_time, unsafe);
        keep_earliest(out.first_abnormal_time, abnormal);
    }
    return out;
}

VerificationReport full_verify(const StateSpaceModel& plant, const FilterRealization& filter,
                               const Matrix& Q, const lmi::SafetySets& sets, double gamma,
                               bool stealthy, double t_end, double dt,
                               const lmi::SolverOptions& options) {
    const auto extended = build_extended_system(plant, filter);
    VerificationReport rep;

    const auto inv =
        check_invariance(extended, Q, sets, default_alpha_grid(extended.A), stealthy, options);
    rep.invariance_feasible = inv.certified;
    if (inv.certified) rep.residuals["invariance_alpha"] = inv.certifying_alpha;

    const auto proj = project(Ellipsoid::centered(sym_part(Q)), plant.n());
    rep.containment = is_contained(proj, sets.safe_set);
    rep.residuals["containment_margin"] = min_eigenvalue(proj.Q - sets.safe_set.Q);

    rep.hinf_value = hinf_norm(extended);
    rep.hinf_within_budget = rep.hinf_value <= gamma + 1e-4;
    rep.residuals["hinf_margin"] = gamma - rep.hinf_value;

    const auto policy = greedy_attack_policy(extended, Q, sets.input_set);
    const auto mc = monte_carlo_invariance(extended, Q, policy, t_end, dt, 1, 0, sets, plant.n(),
                                           Vector::Zero(extended.n()));
    rep.max_level = mc.max_level;
    rep.first_escape_time = mc.first_escape_time;
    rep.residuals["max_level"] = mc.max_level;
    return rep;
}

} // namespace safefilter
