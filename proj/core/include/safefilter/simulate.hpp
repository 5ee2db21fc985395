#ifndef SAFEFILTER_SIMULATE_HPP
#define SAFEFILTER_SIMULATE_HPP

#include <functional>
#include <vector>

#include "safefilter/state_space.hpp"

namespace safefilter {

/// Sampled trajectory of a simulation run. One row of `states` / `inputs`
/// per entry of `t_grid`.
struct Trajectory {
    std::vector<double> t_grid;
    Matrix states;  // (num_samples) x n
    Matrix inputs;  // (num_samples) x m
};

/// Input signal; may depend on the current state (the worst-case attack
/// policies do).
using InputSignal = std::function<Vector(double t, const Vector& state)>;

/// Fixed-step classic Runge-Kutta integration of ẋ = Ax + Bu(t, x).
/// Throws on NaN/overflow, reporting the time of failure.
Trajectory simulate(const StateSpaceModel& sys, const InputSignal& u, const Vector& x0,
                    double t_end, double dt);

/// Convenience overload for a pre-sampled input held constant over each step
/// (zero-order hold); sample k applies on [k dt, (k+1) dt).
Trajectory simulate(const StateSpaceModel& sys, const Matrix& u_samples, const Vector& x0,
                    double t_end, double dt);

} // namespace safefilter

#endif
