#ifndef SAFEFILTER_VERIFY_HPP
#define SAFEFILTER_VERIFY_HPP

#include <cstdint>
#include <map>
#include <optional>

#include "safefilter/ellipsoid.hpp"
#include "safefilter/lmi/solve.hpp"
#include "safefilter/lmi/theorem1.hpp"
#include "safefilter/simulate.hpp"

namespace safefilter {

/// Admissible adversarial input policies. Every emitted input lies in the
/// input set. The greedy kind maximizes the pointwise growth of
/// V = zeta^T Q zeta; boundary-random holds a random boundary input over each
/// dwell interval; constant plays a fixed admissible vector.
struct AttackPolicy {
    enum class Kind { GreedyWorstCase, BoundaryRandom, Constant };
    Kind kind = Kind::GreedyWorstCase;
    Ellipsoid input_set;
    std::uint64_t seed = 0;
    double dwell = 0.01;        // boundary-random: seconds between redraws
    Vector constant_value;      // constant kind
    Matrix B;                   // greedy: input matrix of the attacked system
    Matrix Q;                   // greedy: level-set shape

    /// Resolves the policy to a state-feedback input signal.
    InputSignal signal() const;
};

/// u(zeta) = u_bar + R^{-1} g / sqrt(g^T R^{-1} g), g = B^T Q zeta — the
/// admissible input maximizing dV/dt; at g = 0 the center u_bar is played.
AttackPolicy greedy_attack_policy(const StateSpaceModel& extended, const Matrix& Q,
                                  const Ellipsoid& input_set);

AttackPolicy boundary_random_policy(const Ellipsoid& input_set, std::uint64_t seed,
                                    double dwell = 0.01);

AttackPolicy constant_policy(const Ellipsoid& input_set, const Vector& value);

struct InvarianceCheck {
    bool certified = false;
    double certifying_alpha = 0.0;
    std::map<double, lmi::SolverStatus> status_by_alpha;
    std::map<double, double> residual_by_alpha;  // max PSD violation of the replay solve
};

/// Replays the invariance certificate for a fixed Q: for each alpha in the
/// grid, feasibility in the remaining multipliers (beta, lambda) is a pure
/// LMI. True if any alpha certifies.
InvarianceCheck check_invariance(const StateSpaceModel& extended, const Matrix& Q,
                                 const lmi::SafetySets& sets, const std::vector<double>& alpha_grid,
                                 bool stealthy, const lmi::SolverOptions& options = {});

/// Grid used when the caller does not supply one: a fixed ladder intersected
/// with (0, 2 min|Re eig(A)|).
std::vector<double> default_alpha_grid(const Matrix& a);

struct MonteCarloResult {
    double max_level = 0.0;                       // max over time of zeta^T Q zeta
    std::optional<double> first_escape_time;      // V > 1 + tol
    std::optional<double> first_unsafe_time;      // x_p outside the safe set
    std::optional<double> first_abnormal_time;    // x_p outside the normal set
    int runs = 0;
    Trajectory worst_trajectory;                  // run attaining max_level
};

/// Simulates the policy (greedy is deterministic, so one run), recording the
/// level trajectory and safe/normal-set membership of the plant states.
/// `n_plant` identifies the leading plant coordinates inside zeta.
MonteCarloResult monte_carlo_invariance(const StateSpaceModel& extended, const Matrix& Q,
                                        const AttackPolicy& policy, double t_end, double dt,
                                        int n_runs, std::uint64_t seed, const lmi::SafetySets& sets,
                                        Eigen::Index n_plant, const Vector& zeta0,
                                        double level_tol = 1e-3);

struct VerificationReport {
    bool invariance_feasible = false;
    bool containment = false;
    double hinf_value = 0.0;
    bool hinf_within_budget = false;
    double max_level = 0.0;
    std::optional<double> first_escape_time;
    std::map<std::string, double> residuals;

    bool all_pass() const { return invariance_feasible && containment && hinf_within_budget; }
};

/// Bundled post-hoc verification of a fixed filter: invariance replay,
/// projection containment in the safe set, H-infinity bound, and a greedy
/// adversarial run from zeta0 (defaults to the origin).
VerificationReport full_verify(const StateSpaceModel& plant, const FilterRealization& filter,
                               const Matrix& Q, const lmi::SafetySets& sets, double gamma,
                               bool stealthy, double t_end = 5.0, double dt = 1e-4,
                               const lmi::SolverOptions& options = {});

} // namespace safefilter

#endif
