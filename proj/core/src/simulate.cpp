#include "safefilter/simulate.hpp"

#include <cmath>
#include <stdexcept>

namespace safefilter {

Trajectory simulate(const StateSpaceModel& sys, const InputSignal& u, const Vector& x0,
                    double t_end, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("simulate: dt must be positive");
    if (x0.size() != sys.n()) throw std::invalid_argument("simulate: x0 dimension mismatch");
    const auto n = sys.n();
    const auto m = sys.m();
    const auto steps = static_cast<Eigen::Index>(std::llround(t_end / dt));

    Trajectory traj;
    traj.t_grid.reserve(steps + 1);
    traj.states.resize(steps + 1, n);
    traj.inputs.resize(steps + 1, m);

    Vector x = x0;
    auto deriv = [&](double t, const Vector& xs) -> Vector {
        Vector uu = u(t, xs);
        if (uu.size() != m) throw std::invalid_argument("simulate: input dimension mismatch");
        return sys.A * xs + sys.B * uu;
    };

    for (Eigen::Index k = 0; k <= steps; ++k) {
        const double t = k * dt;
        traj.t_grid.push_back(t);
        traj.states.row(k) = x.transpose();
        traj.inputs.row(k) = u(t, x).transpose();
        if (!x.allFinite()) {
            throw std::runtime_error("simulate: divergence (non-finite state) at t = " +
                                     std::to_string(t));
        }
        if (k == steps) break;
        const Vector k1 = deriv(t, x);
        const Vector k2 = deriv(t + 0.5 * dt, x + 0.5 * dt * k1);
        const Vector k3 = deriv(t + 0.5 * dt, x + 0.5 * dt * k2);
        const Vector k4 = deriv(t + dt, x + dt * k3);
        x += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return traj;
}

Trajectory simulate(const StateSpaceModel& sys, const Matrix& u_samples, const Vector& x0,
                    double t_end, double dt) {
    if (u_samples.cols() != sys.m())
        throw std::invalid_argument("simulate: sampled input column count mismatch");
    auto u = [&](double t, const Vector&) -> Vector {
        auto k = static_cast<Eigen::Index>(t / dt);
        k = std::min(k, u_samples.rows() - 1);
        return u_samples.row(k).transpose();
    };
    return simulate(sys, u, x0, t_end, dt);
}

} // namespace safefilter
