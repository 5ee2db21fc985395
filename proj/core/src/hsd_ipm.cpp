#include "safefilter/sdp/backend.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace safefilter::sdp {

using lmi::SolverOptions;
using lmi::SolverStatus;
using lmi::StandardConicForm;

namespace {

struct DenseBlock {
    int dim = 0;
    Matrix f0;
    std::vector<std::pair<int, Matrix>> coeffs;  // (variable coordinate, coefficient matrix)
};

Matrix densify(int dim, const std::vector<lmi::Triplet>& trips) {
    Matrix m = Matrix::Zero(dim, dim);
    for (const auto& t : trips) m(t.row, t.col) += t.value;
    return m;
}

// Largest step a with M + a dM staying PSD; 0 if M is not usable.
double max_psd_step(const Matrix& m, const Matrix& dm) {
    Eigen::LLT<Matrix> llt(sym_part(m));
    if (llt.info() != Eigen::Success) return 0.0;
    // generalized eigenvalues of (dM, M)
    Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> ges(sym_part(dm), sym_part(m),
                                                         Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
    if (ges.info() != Eigen::Success) return 0.0;
    const double wmin = ges.eigenvalues().minCoeff();
    if (wmin >= 0.0) return std::numeric_limits<double>::infinity();
    return -1.0 / wmin;
}

bool positive_definite(const Matrix& m) {
    Eigen::LLT<Matrix> llt(sym_part(m));
    return llt.info() == Eigen::Success;
}

} // namespace

BackendSolution HsdIpmBackend::solve(const StandardConicForm& form,
                                     const SolverOptions& opts) const {
    const auto t_start = std::chrono::steady_clock::now();
    BackendSolution out;
    auto finish = [&](SolverStatus st, const std::string& msg) {
        out.status = st;
        out.message = msg;
        out.solve_time_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
        return out;
    };

    const Eigen::Index k = form.index_map.total;
    const size_t nb = form.blocks.size();
    if (nb == 0) {
        out.y = Vector::Zero(k);
        return finish(SolverStatus::Optimal, "no constraints");
    }

    // Dual-form mapping: the user problem  min c.y  s.t.  F0 + sum y_i Fi >= 0
    // is the SDP dual  max b.y,  S = C - A*(y) >= 0  with C = F0, A_i = -F_i,
    // b = -c. The HSD embedding solves the primal-dual pair jointly.
    std::vector<DenseBlock> blocks(nb);
    for (size_t bi = 0; bi < nb; ++bi) {
        const auto& src = form.blocks[bi];
        blocks[bi].dim = src.dim;
        blocks[bi].f0 = densify(src.dim, src.constant);
        for (const auto& [idx, trips] : src.coefficients)
            blocks[bi].coeffs.emplace_back(idx, densify(src.dim, trips));
    }

    std::vector<Matrix> C(nb);
    std::vector<std::vector<std::pair<int, Matrix>>> A(nb);
    double nu = 0.0;
    for (size_t bi = 0; bi < nb; ++bi) {
        double scale = std::max(1.0, blocks[bi].f0.norm());
        for (const auto& [idx, m] : blocks[bi].coeffs) scale = std::max(scale, m.norm());
        C[bi] = blocks[bi].f0 / scale;
        for (const auto& [idx, m] : blocks[bi].coeffs) A[bi].emplace_back(idx, -m / scale);
        nu += blocks[bi].dim;
    }
    Vector b = -form.objective;
    const double objscale = std::max(1.0, b.norm());
    b /= objscale;

    auto a_op = [&](const std::vector<Matrix>& xs) {
        Vector r = Vector::Zero(k);
        for (size_t bi = 0; bi < nb; ++bi)
            for (const auto& [idx, m] : A[bi]) r(idx) += (m.array() * xs[bi].array()).sum();
        return r;
    };
    auto a_star = [&](const Vector& yv) {
        std::vector<Matrix> r(nb);
        for (size_t bi = 0; bi < nb; ++bi) {
            r[bi] = Matrix::Zero(blocks[bi].dim, blocks[bi].dim);
            for (const auto& [idx, m] : A[bi]) r[bi] += yv(idx) * m;
        }
        return r;
    };
    auto inner = [&](const std::vector<Matrix>& ms, const std::vector<Matrix>& ns) {
        double s = 0.0;
        for (size_t bi = 0; bi < nb; ++bi) s += (ms[bi].array() * ns[bi].array()).sum();
        return s;
    };

    std::vector<Matrix> X(nb), S(nb);
    for (size_t bi = 0; bi < nb; ++bi) {
        X[bi] = Matrix::Identity(blocks[bi].dim, blocks[bi].dim);
        S[bi] = X[bi];
    }
    Vector y = Vector::Zero(k);
    double tau = 1.0, kappa = 1.0;

    const double mu0 = (inner(X, S) + tau * kappa) / (nu + 1.0);
    double pin = 0.0, din = 0.0, relgap = 0.0;
    int it = 0;
    int stall_count = 0;
    double mu_prev = mu0;

    auto grade_stall = [&](const std::string& why) {
        if (pin <= 1e-6 && din <= 1e-6 && relgap <= 1e-5) {
            out.y = y / tau;
            out.objective = -objscale * (b.dot(y) / tau);
            return finish(SolverStatus::Feasible, "stalled with usable iterate (" + why + ")");
        }
        return finish(SolverStatus::NumericalFailure, why);
    };

    for (it = 0; it < opts.max_iter; ++it) {
        out.iterations = it;
        const Vector rp = tau * b - a_op(X);
        std::vector<Matrix> rd(nb);
        {
            auto asy = a_star(y);
            for (size_t bi = 0; bi < nb; ++bi) rd[bi] = tau * C[bi] - asy[bi] - S[bi];
        }
        const double rg = b.dot(y) - inner(C, X) - kappa;
        const double mu = (inner(X, S) + tau * kappa) / (nu + 1.0);

        const double cx = inner(C, X);
        const double by = b.dot(y);
        pin = rp.norm() / (tau * (1.0 + b.norm()) + a_op(X).norm());
        din = 0.0;
        for (size_t bi = 0; bi < nb; ++bi) {
            const double d = rd[bi].norm() / (tau * (1.0 + C[bi].norm()) + S[bi].norm());
            din = std::max(din, d);
        }
        const double gap = inner(X, S) / (tau * tau);
        relgap = gap / (1.0 + std::abs(cx / tau) + std::abs(by / tau));
        out.primal_residual = pin;
        out.dual_residual = din;
        out.relative_gap = relgap;

        if (!std::isfinite(mu) || !std::isfinite(pin) || !std::isfinite(din))
            return finish(SolverStatus::NumericalFailure, "non-finite iterate");

        if (pin <= opts.tol && din <= opts.tol && relgap <= opts.tol) {
            out.y = y / tau;
            out.objective = -objscale * (by / tau);
            return finish(SolverStatus::Optimal, "converged");
        }

        // Farkas-type certificates. The user problem is the dual, so a dual
        // infeasibility certificate (X >= 0, A(X) = 0, <C,X> < 0) proves the
        // user's LMIs infeasible; a primal one proves the objective unbounded.
        if (by > 1e-12) {
            auto asy = a_star(y);
            double resid = 0.0;
            for (size_t bi = 0; bi < nb; ++bi) resid = std::max(resid, (asy[bi] + S[bi]).norm());
            if (resid <= opts.infeas_cert_tol * by) {
                out.y = y;
                return finish(SolverStatus::Unbounded,
                              "objective unbounded (improving-ray certificate)");
            }
        }
        if (-cx > 1e-12 && a_op(X).norm() <= opts.infeas_cert_tol * (-cx)) {
            return finish(SolverStatus::Infeasible, "Farkas certificate found");
        }

        if (mu < 1e-16 * mu0 || tau < 1e-12 * std::max(1.0, kappa))
            return grade_stall("tau/mu collapse without certificate");
        if (mu > 0.95 * mu_prev) {
            if (++stall_count >= 8) return grade_stall("no progress in complementarity");
        } else {
            stall_count = 0;
        }
        mu_prev = mu;

        // Scaling quantities for the HKM direction.
        std::vector<Matrix> Sinv(nb);
        for (size_t bi = 0; bi < nb; ++bi) {
            Eigen::LLT<Matrix> llt(sym_part(S[bi]));
            if (llt.info() != Eigen::Success)
                return grade_stall("dual slack lost definiteness");
            Sinv[bi] = llt.solve(Matrix::Identity(blocks[bi].dim, blocks[bi].dim));
        }
        // P_j = sym(X A_j S^{-1}) per block; Schur matrix M_ij = <A_i, P_j>.
        std::vector<std::vector<Matrix>> P(nb);
        std::vector<Matrix> Pt(nb);
        for (size_t bi = 0; bi < nb; ++bi) {
            P[bi].reserve(A[bi].size());
            for (const auto& [idx, m] : A[bi]) P[bi].push_back(sym_part(X[bi] * m * Sinv[bi]));
            Pt[bi] = sym_part(X[bi] * C[bi] * Sinv[bi]);
        }
        Matrix schur = Matrix::Zero(k + 1, k + 1);
        Vector h = Vector::Zero(k), ctil = Vector::Zero(k);
        double cpt = 0.0;
        for (size_t bi = 0; bi < nb; ++bi) {
            for (size_t i = 0; i < A[bi].size(); ++i) {
                const int gi = A[bi][i].first;
                h(gi) += (A[bi][i].second.array() * Pt[bi].array()).sum();
                ctil(gi) += (C[bi].array() * P[bi][i].array()).sum();
                for (size_t j = 0; j < A[bi].size(); ++j) {
                    schur(gi, A[bi][j].first) +=
                        (A[bi][i].second.array() * P[bi][j].array()).sum();
                }
            }
            cpt += (C[bi].array() * Pt[bi].array()).sum();
        }
        schur.topLeftCorner(k, k) = sym_part(schur.topLeftCorner(k, k));
        schur.block(0, k, k, 1) = -(h + b);
        schur.block(k, 0, 1, k) = (b - ctil).transpose();
        schur(k, k) = cpt + kappa / tau;
        const double ridge = 1e-13 * std::max(1.0, schur.cwiseAbs().maxCoeff());
        schur.diagonal().array() += ridge;
        Eigen::PartialPivLU<Matrix> kkt(schur);

        struct Direction {
            std::vector<Matrix> dX, dS;
            Vector dy;
            double dtau = 0.0, dkappa = 0.0;
        };
        auto solve_direction = [&](const std::vector<Matrix>& rc, double rctk) {
            Direction d;
            std::vector<Matrix> p0(nb);
            Vector a = Vector::Zero(k);
            double cp0 = 0.0;
            for (size_t bi = 0; bi < nb; ++bi) {
                p0[bi] = sym_part(rc[bi] * Sinv[bi]) - sym_part(X[bi] * rd[bi] * Sinv[bi]);
                for (size_t i = 0; i < A[bi].size(); ++i)
                    a(A[bi][i].first) += (A[bi][i].second.array() * p0[bi].array()).sum();
                cp0 += (C[bi].array() * p0[bi].array()).sum();
            }
            Vector rhs(k + 1);
            rhs.head(k) = rp - a;
            rhs(k) = -rg + cp0 + rctk / tau;
            Vector sol = kkt.solve(rhs);
            sol += kkt.solve(rhs - schur * sol);  // one refinement step
            d.dy = sol.head(k);
            d.dtau = sol(k);
            auto asdy = a_star(d.dy);
            d.dS.resize(nb);
            d.dX.resize(nb);
            for (size_t bi = 0; bi < nb; ++bi) {
                d.dS[bi] = rd[bi] + C[bi] * d.dtau - asdy[bi];
                Matrix dx = p0[bi] - Pt[bi] * d.dtau;
                for (size_t i = 0; i < A[bi].size(); ++i) dx += d.dy(A[bi][i].first) * P[bi][i];
                d.dX[bi] = dx;
            }
            d.dkappa = (rctk - kappa * d.dtau) / tau;
            return d;
        };
        auto step_bound = [&](const Direction& d) {
            double a = 1.0 / 0.98;  // allows a full unit step after damping
            for (size_t bi = 0; bi < nb; ++bi) {
                a = std::min(a, max_psd_step(X[bi], d.dX[bi]));
                a = std::min(a, max_psd_step(S[bi], d.dS[bi]));
            }
            if (d.dtau < 0.0) a = std::min(a, -tau / d.dtau);
            if (d.dkappa < 0.0) a = std::min(a, -kappa / d.dkappa);
            return a;
        };

        // Predictor (affine scaling).
        std::vector<Matrix> rc_aff(nb);
        for (size_t bi = 0; bi < nb; ++bi) rc_aff[bi] = -X[bi] * S[bi];
        Direction aff = solve_direction(rc_aff, -tau * kappa);
        const double a_aff = std::min(1.0, step_bound(aff));
        double mu_aff = tau + a_aff * aff.dtau;
        mu_aff *= kappa + a_aff * aff.dkappa;
        for (size_t bi = 0; bi < nb; ++bi)
            mu_aff += ((X[bi] + a_aff * aff.dX[bi]).array() * (S[bi] + a_aff * aff.dS[bi]).array())
                          .sum();
        mu_aff /= (nu + 1.0);
        double sigma = std::clamp(mu_aff / mu, 0.0, 1.0);
        sigma = sigma * sigma * sigma;

        // Corrector with Mehrotra second-order term.
        std::vector<Matrix> rc(nb);
        for (size_t bi = 0; bi < nb; ++bi) {
            rc[bi] = sigma * mu * Matrix::Identity(blocks[bi].dim, blocks[bi].dim) -
                     X[bi] * S[bi] - aff.dX[bi] * aff.dS[bi];
        }
        Direction dir = solve_direction(rc, sigma * mu - tau * kappa - aff.dtau * aff.dkappa);
        double alpha = std::min(1.0, 0.98 * step_bound(dir));

        bool stepped = false;
        for (int bt = 0; bt < 30 && alpha > 1e-13; ++bt) {
            bool ok = tau + alpha * dir.dtau > 0.0 && kappa + alpha * dir.dkappa > 0.0;
            for (size_t bi = 0; ok && bi < nb; ++bi) {
                ok = positive_definite(X[bi] + alpha * dir.dX[bi]) &&
                     positive_definite(S[bi] + alpha * dir.dS[bi]);
            }
            if (ok) {
                stepped = true;
                break;
            }
            alpha *= 0.8;
        }
        if (!stepped) return grade_stall("step collapsed");
        for (size_t bi = 0; bi < nb; ++bi) {
            X[bi] = sym_part(X[bi] + alpha * dir.dX[bi]);
            S[bi] = sym_part(S[bi] + alpha * dir.dS[bi]);
        }
        y += alpha * dir.dy;
        tau += alpha * dir.dtau;
        kappa += alpha * dir.dkappa;
    }
    return grade_stall("iteration limit reached");
}

const SdpBackend& default_backend() {
    static const HsdIpmBackend backend;
    return backend;
}

} // namespace safefilter::sdp
