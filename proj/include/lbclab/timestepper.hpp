#pragma once

#include <optional>
#include <vector>

#include "lbclab/discrete_operator.hpp"

namespace lbc {

/// theta-method configuration. theta = 1/2 is Crank--Nicolson, theta = 1
/// implicit Euler. rannacher_substeps > 0 replaces the first nominal step
/// by that many implicit-Euler substeps of size dt/rannacher_substeps.
struct ThetaConfig {
    double theta = 0.5;
    int N = 1;
    int rannacher_substeps = 2;

    void validate() const;
};

struct SolveResult {
    std::vector<double> U;           ///< final vector, length m+2
    std::vector<double> norm_trace;  ///< per-step max norm (including t = 0)
    double dt = 0.0;
    int rannacher_substeps = 0;
};

/// One theta step: solves (I - theta dt M) U_n = U_{n-1}
/// + (1-theta) dt (M U_{n-1} + b_{n-1}) + theta dt b_n.
std::vector<double> theta_step(const DiscreteOperator& op, std::span<const double> U_prev,
                               std::span<const double> b_prev, std::span<const double> b_next,
                               double theta, double dt);

/// Integrate from the given initial data to t = T.
SolveResult solve(const DiscreteOperator& op, std::vector<double> initial, const DirichletFn& g0,
                  const ThetaConfig& config, double T);

struct OrderFit {
    double p = 0.0;
    bool degenerate = false;  ///< all errors below 1e-12
    std::vector<double> errors;
};

/// Empirical order in time: errors of theta-method runs over N_list against
/// a fine Crank--Nicolson reference, least-squares slope of log(error)
/// against log(dt). Initial data should be smooth for the classical order
/// to be observable.
OrderFit measure_time_order(const DiscreteOperator& op, std::span<const double> initial,
                            double theta, const std::vector<int>& N_list, double T,
                            int N_reference);

}  // namespace lbc
