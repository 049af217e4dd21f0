#pragma once

#include <vector>

#include "lbclab/discrete_operator.hpp"
#include "lbclab/grid.hpp"

namespace lbc {

/// European call with the model rate and volatility.
struct CallOption {
    double E;
    double r;
    double sigma;
};

/// Standard normal distribution function via erfc.
double norm_cdf(double x);
double norm_pdf(double x);

/// Call payoff max(0, s_j - E) sampled at s_1..s_{m+2}.
std::vector<double> payoff_vector(const Grid& grid, double E);

/// Closed-form call value; t is the remaining time argument of the formula
/// (t = 0 returns the payoff). The degenerate sigma = 0 limit prices the
/// deterministic forward max(0, s - E e^{-rt}).
double call_price(double s, double t, const CallOption& option);

/// Partial derivative of call_price with respect to t.
double call_price_time_derivative(double s, double t, const CallOption& option);

/// Third derivative of the call value in s, by fourth-order central
/// differences of the closed form.
double call_third_derivative_fd(double s, double t, const CallOption& option, double h_fd);

/// max |u_sss| over [S - h_star, S] at time t, sampled finite-difference
/// estimate with step 1e-3 * S.
double eta_estimate(const CallOption& option, double t, double S, double h_star);

struct TruncationErrors {
    std::vector<double> delta_L;  ///< interior block, size m
    std::vector<double> delta_R;  ///< boundary block, size 2
};

/// Residual of the exact call inserted into the semidiscrete system:
/// delta = u_h'(t) - M u_h(t) - b(t), split into interior and boundary blocks.
TruncationErrors truncation_errors(const DiscreteOperator& op, const CallOption& option, double t);

}  // namespace lbc
