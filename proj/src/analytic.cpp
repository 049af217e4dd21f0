#include "lbclab/analytic.hpp"

#include <cmath>
#include <stdexcept>

namespace lbc {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;
}  // namespace

double norm_cdf(double x) { return 0.5 * std::erfc(-x * kInvSqrt2); }

double norm_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

std::vector<double> payoff_vector(const Grid& grid, double E) {
    std::vector<double> v(static_cast<size_t>(grid.unknowns()));
    for (int j = 1; j <= grid.unknowns(); ++j)
        v[static_cast<size_t>(j - 1)] = std::max(0.0, grid.node(j) - E);
    return v;
}

double call_price(double s, double t, const CallOption& option) {
    if (s <= 0.0) return 0.0;
    if (t <= 0.0) return std::max(0.0, s - option.E);
    if (option.sigma == 0.0) return std::max(0.0, s - option.E * std::exp(-option.r * t));
    const double st = option.sigma * std::sqrt(t);
    const double d1 = (std::log(s / option.E) + (option.r + 0.5 * option.sigma * option.sigma) * t) / st;
    const double d2 = d1 - st;
    return s * norm_cdf(d1) - option.E * std::exp(-option.r * t) * norm_cdf(d2);
}

double call_price_time_derivative(double s, double t, const CallOption& option) {
    if (s <= 0.0) return 0.0;
    if (!(t > 0.0)) throw std::invalid_argument("call_price_time_derivative: need t > 0");
    const double disc = option.E * std::exp(-option.r * t);
    if (option.sigma == 0.0) return s > disc ? option.r * disc : 0.0;
    const double st = option.sigma * std::sqrt(t);
    const double d1 = (std::log(s / option.E) + (option.r + 0.5 * option.sigma * option.sigma) * t) / st;
    const double d2 = d1 - st;
    return 0.5 * s * norm_pdf(d1) * option.sigma / std::sqrt(t) + option.r * disc * norm_cdf(d2);
}

double call_third_derivative_fd(double s, double t, const CallOption& option, double h_fd) {
    auto f = [&](double x) { return call_price(x, t, option); };
    const double h = h_fd;
    return (-f(s - 3 * h) + 8 * f(s - 2 * h) - 13 * f(s - h) + 13 * f(s + h) - 8 * f(s + 2 * h) +
            f(s + 3 * h)) /
           (8 * h * h * h);
}

double eta_estimate(const CallOption& option, double t, double S, double h_star) {
    const double h_fd = 1e-3 * S;
    const int samples = 33;
    double mx = 0.0;
    for (int k = 0; k < samples; ++k) {
        const double xi = S - h_star + h_star * k / (samples - 1);
        mx = std::max(mx, std::abs(call_third_derivative_fd(xi, t, option, h_fd)));
    }
    return mx;
}

TruncationErrors truncation_errors(const DiscreteOperator& op, const CallOption& option, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("truncation_errors: need t > 0");
    const int n = op.size(), m = op.m();
    std::vector<double> u(static_cast<size_t>(n)), udot(static_cast<size_t>(n));
    for (int j = 1; j <= n; ++j) {
        const double s = op.grid.node(j);
        u[static_cast<size_t>(j - 1)] = call_price(s, t, option);
        udot[static_cast<size_t>(j - 1)] = call_price_time_derivative(s, t, option);
    }
    // u(0,t) = 0 for the call, so the Dirichlet closure contributes nothing.
    std::vector<double> Mu = op.apply(u, 0.0);
    TruncationErrors out;
    out.delta_L.resize(static_cast<size_t>(m));
    out.delta_R.resize(2);
    for (int i = 0; i < n; ++i) {
        const double d = udot[static_cast<size_t>(i)] - Mu[static_cast<size_t>(i)];
        if (i < m)
            out.delta_L[static_cast<size_t>(i)] = d;
        else
            out.delta_R[static_cast<size_t>(i - m)] = d;
    }
    return out;
}

}  // namespace lbc
