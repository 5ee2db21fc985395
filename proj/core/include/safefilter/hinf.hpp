#ifndef SAFEFILTER_HINF_HPP
#define SAFEFILTER_HINF_HPP

#include "safefilter/state_space.hpp"

namespace safefilter {

/// H-infinity norm of G(s) = C (sI - A)^{-1} B + D for Hurwitz A, computed by
/// bisection on the imaginary-eigenvalue test of the associated Hamiltonian
/// matrix. `tol` is the relative gap at which bisection stops. The lower
/// bound starts from the largest singular value of D and of the DC gain.
/// Throws if A is not Hurwitz (the norm is undefined).
double hinf_norm(const StateSpaceModel& sys, double tol = 1e-6);

} // namespace safefilter

#endif
