#include "lbclab/timestepper.hpp"

#include <cmath>
#include <stdexcept>

#include "lbclab/linalg.hpp"

namespace lbc {

void ThetaConfig::validate() const {
    if (!(theta >= 0.5 && theta <= 1.0))
        throw std::invalid_argument("ThetaConfig: theta must lie in [1/2, 1]");
    if (N < 1) throw std::invalid_argument("ThetaConfig: N must be >= 1");
    if (rannacher_substeps < 0) throw std::invalid_argument("ThetaConfig: negative substep count");
}

std::vector<double> theta_step(const DiscreteOperator& op, std::span<const double> U_prev,
                               std::span<const double> b_prev, std::span<const double> b_next,
                               double theta, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("theta_step: need dt > 0");
    const int n = op.size();
    if (static_cast<int>(U_prev.size()) != n) throw std::invalid_argument("theta_step: bad dimension");

    std::vector<double> rhs = op.tri.apply(U_prev);
    for (int i = 0; i < n; ++i) {
        rhs[static_cast<size_t>(i)] = U_prev[static_cast<size_t>(i)] +
                                      (1.0 - theta) * dt * (rhs[static_cast<size_t>(i)] + b_prev[static_cast<size_t>(i)]) +
                                      theta * dt * b_next[static_cast<size_t>(i)];
    }

    Tridiagonal lhs(n);
    for (int i = 0; i < n; ++i) lhs.diag[static_cast<size_t>(i)] = 1.0 - theta * dt * op.tri.diag[static_cast<size_t>(i)];
    for (int i = 0; i + 1 < n; ++i) {
        lhs.sub[static_cast<size_t>(i)] = -theta * dt * op.tri.sub[static_cast<size_t>(i)];
        lhs.super[static_cast<size_t>(i)] = -theta * dt * op.tri.super[static_cast<size_t>(i)];
    }
    return solve_tridiagonal(lhs, rhs);
}

SolveResult solve(const DiscreteOperator& op, std::vector<double> initial, const DirichletFn& g0,
                  const ThetaConfig& config, double T) {
    config.validate();
    if (!(T > 0.0)) throw std::invalid_argument("solve: need T > 0");

    auto source = [&](double t) {
        std::vector<double> b(static_cast<size_t>(op.size()), 0.0);
        if (g0) b[0] = op.beta1 * g0(t);
        return b;
    };

    SolveResult out;
    out.dt = T / config.N;
    out.rannacher_substeps = config.rannacher_substeps;
    out.norm_trace.push_back(norm_inf(initial));

    std::vector<double> U = std::move(initial);
    double t = 0.0;
    int n0 = 0;
    if (config.rannacher_substeps > 0) {
        // Startup damping: the first nominal step as implicit-Euler substeps.
        const double sub_dt = out.dt / config.rannacher_substeps;
        for (int k = 0; k < config.rannacher_substeps; ++k) {
            U = theta_step(op, U, source(t), source(t + sub_dt), 1.0, sub_dt);
            t += sub_dt;
        }
        out.norm_trace.push_back(norm_inf(U));
        n0 = 1;
    }
    for (int n = n0; n < config.N; ++n) {
        U = theta_step(op, U, source(t), source(t + out.dt), config.theta, out.dt);
        t += out.dt;
        out.norm_trace.push_back(norm_inf(U));
    }
    out.U = std::move(U);
    return out;
}

OrderFit measure_time_order(const DiscreteOperator& op, std::span<const double> initial,
                            double theta, const std::vector<int>& N_list, double T,
                            int N_reference) {
    if (N_list.size() < 3)
        throw std::invalid_argument("measure_time_order: need at least three step counts");

    std::vector<double> U0(initial.begin(), initial.end());
    ThetaConfig ref_cfg{0.5, N_reference, 0};
    const std::vector<double> ref = solve(op, U0, op.g0, ref_cfg, T).U;

    OrderFit fit;
    std::vector<double> log_dt, log_err;
    bool any_above = false;
    for (int N : N_list) {
        ThetaConfig cfg{theta, N, 0};
        const std::vector<double> U = solve(op, U0, op.g0, cfg, T).U;
        double err = 0.0;
        for (size_t i = 0; i < U.size(); ++i) err = std::max(err, std::abs(U[i] - ref[i]));
        fit.errors.push_back(err);
        if (err > 1e-12) {
            any_above = true;
            log_dt.push_back(std::log(T / N));
            log_err.push_back(std::log(err));
        }
    }
    if (!any_above || log_dt.size() < 2) {
        fit.degenerate = true;
        return fit;
    }

    // Least-squares slope.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(log_dt.size());
    for (size_t i = 0; i < log_dt.size(); ++i) {
        sx += log_dt[i];
        sy += log_err[i];
        sxx += log_dt[i] * log_dt[i];
        sxy += log_dt[i] * log_err[i];
    }
    fit.p = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return fit;
}

}  // namespace lbc
