#ifndef SAFEFILTER_LMI_SOLVE_HPP
#define SAFEFILTER_LMI_SOLVE_HPP

#include "safefilter/lmi/standard_form.hpp"
#include "safefilter/sdp/backend.hpp"

namespace safefilter::lmi {

/// Lowers the problem to standard conic form and delegates to the backend.
/// Infeasibility is a value (SolverStatus::Infeasible), not an error.
/// Structurally infeasible problems (a constant negative diagonal entry no
/// variable can touch) are rejected before the backend runs; this is an exact
/// Farkas certificate and catches degenerate inputs such as a zero H-infinity
/// budget.
SolverResult solve(const LmiProblem& p, const SolverOptions& options = {},
                   const sdp::SdpBackend& backend = sdp::default_backend());

} // namespace safefilter::lmi

#endif
