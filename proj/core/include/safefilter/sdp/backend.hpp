#ifndef SAFEFILTER_SDP_BACKEND_HPP
#define SAFEFILTER_SDP_BACKEND_HPP

#include "safefilter/lmi/standard_form.hpp"

namespace safefilter::sdp {

struct BackendSolution {
    lmi::SolverStatus status = lmi::SolverStatus::NumericalFailure;
    Vector y;  // scalarized variable values (meaningful when status is optimal/feasible)
    double objective = 0.0;  // objective . y of the minimized form
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    double relative_gap = 0.0;
    int iterations = 0;
    double solve_time_s = 0.0;
    std::string message;

    bool ok() const {
        return status == lmi::SolverStatus::Optimal || status == lmi::SolverStatus::Feasible;
    }
};

/// In-process semidefinite-cone backend contract. Input is the vectorized
/// standard form (objective vector, per-block constraint matrices in sparse
/// triplet form); output carries status, the primal point, and residuals.
class SdpBackend {
public:
    virtual ~SdpBackend() = default;
    virtual BackendSolution solve(const lmi::StandardConicForm& form,
                                  const lmi::SolverOptions& options) const = 0;
    virtual std::string name() const = 0;
};

/// Dense homogeneous self-dual interior-point method (HKM direction,
/// Mehrotra predictor-corrector). Suited to the small block-structured
/// problems this library assembles; detects infeasible and unbounded
/// problems through Farkas-type certificates.
class HsdIpmBackend final : public SdpBackend {
public:
    BackendSolution solve(const lmi::StandardConicForm& form,
                          const lmi::SolverOptions& options) const override;
    std::string name() const override { return "hsd-ipm"; }
};

/// The process-wide default backend (the bundled interior-point method).
const SdpBackend& default_backend();

} // namespace safefilter::sdp

#endif
