#include <doctest.h>

#include <cmath>
#include <vector>

#include "lbclab/analytic.hpp"
#include "lbclab/discrete_operator.hpp"
#include "lbclab/grid.hpp"
#include "lbclab/linalg.hpp"
#include "lbclab/timestepper.hpp"

using namespace lbc;

namespace {

DiscreteOperator make_op(double r, double sigma, SchemeKind scheme, int m, double S = 400.0) {
    Grid g = build_sinh_grid(100.0, 20.0, S, m);
    ModelParams p{r, sigma, S, 100.0, 5.0};
    return assemble(g, p, scheme, BoundaryTreatment::LBC1);
}

// hand-built 1-by-1 system u' = -r u for scalar sanity checks
DiscreteOperator scalar_op(double r) {
    DiscreteOperator op{};
    op.tri = Tridiagonal(1);
    op.tri.diag[0] = -r;
    return op;
}

}  // namespace

TEST_CASE("configuration validation") {
    CHECK_NOTHROW(ThetaConfig{0.5, 10, 2}.validate());
    CHECK_NOTHROW(ThetaConfig{1.0, 1, 0}.validate());
    CHECK_THROWS(ThetaConfig{0.4, 10, 2}.validate());
    CHECK_THROWS(ThetaConfig{1.1, 10, 2}.validate());
    CHECK_THROWS(ThetaConfig{0.5, 0, 2}.validate());
    CHECK_THROWS(ThetaConfig{0.5, 10, -1}.validate());
}

TEST_CASE("one theta step on the scalar decay equation") {
    const double r = 0.3, dt = 0.25;
    DiscreteOperator op = scalar_op(r);
    std::vector<double> u{1.0}, zero{0.0};
    // implicit Euler: u1 = 1/(1 + r dt)
    auto u_be = theta_step(op, u, zero, zero, 1.0, dt);
    CHECK(u_be[0] == doctest::Approx(1.0 / (1.0 + r * dt)).epsilon(1e-14));
    // trapezoidal: u1 = (1 - r dt/2)/(1 + r dt/2)
    auto u_cn = theta_step(op, u, zero, zero, 0.5, dt);
    CHECK(u_cn[0] == doctest::Approx((1.0 - r * dt / 2.0) / (1.0 + r * dt / 2.0)).epsilon(1e-14));
}

TEST_CASE("constant vector contracts by the stability function") {
    // sigma = 0 forward stencil has no weight at s_0, so M 1 = -r 1 holds
    // without any boundary source and one step multiplies 1 by phi(-r dt)
    const double r = 0.2, dt = 0.1;
    DiscreteOperator op = make_op(r, 0.0, SchemeKind::Forward, 40);
    const int n = op.size();
    std::vector<double> ones(n, 1.0), zero(n, 0.0);
    for (double theta : {0.5, 0.8, 1.0}) {
        auto u1 = theta_step(op, ones, zero, zero, theta, dt);
        double phi = (1.0 - (1.0 - theta) * r * dt) / (1.0 + theta * r * dt);
        for (double v : u1) CHECK(v == doctest::Approx(phi).epsilon(1e-12));
    }
}

TEST_CASE("node vector is a fixed point") {
    // M s = 0, so the grid coordinates are stationary for every theta
    DiscreteOperator op = make_op(0.15, 0.25, SchemeKind::CentralB, 40);
    const int n = op.size();
    std::vector<double> nodes(n), zero(n, 0.0);
    for (int i = 0; i < n; ++i) nodes[i] = op.grid.node(i + 1);
    for (double theta : {0.5, 1.0}) {
        auto u1 = theta_step(op, nodes, zero, zero, theta, 0.5);
        for (int i = 0; i < n; ++i)
            CHECK(u1[static_cast<size_t>(i)] == doctest::Approx(nodes[static_cast<size_t>(i)])
                                                    .epsilon(1e-10).scale(op.grid.S));
    }
}

TEST_CASE("theta step agrees with the stability matrix") {
    DiscreteOperator op = make_op(0.1, 0.3, SchemeKind::MixedA, 6);
    const int n = op.size();
    std::vector<double> u(n), zero(n, 0.0);
    for (int i = 0; i < n; ++i) u[static_cast<size_t>(i)] = std::sin(1.0 + i);
    for (double theta : {0.5, 1.0}) {
        const double dt = 0.2;
        auto stepped = theta_step(op, u, zero, zero, theta, dt);
        DenseMatrix Phi = theta_stability_matrix(op.tri, theta, dt);
        for (int i = 0; i < n; ++i) {
            double expected = 0.0;
            for (int j = 0; j < n; ++j) expected += Phi(i, j) * u[static_cast<size_t>(j)];
            CHECK(stepped[static_cast<size_t>(i)] == doctest::Approx(expected).epsilon(1e-10));
        }
    }
}

TEST_CASE("stepping is linear in the initial data") {
    DiscreteOperator op = make_op(0.1, 0.3, SchemeKind::CentralA, 30);
    const int n = op.size();
    std::vector<double> u(n), v(n), w(n);
    for (int i = 0; i < n; ++i) {
        u[static_cast<size_t>(i)] = std::cos(0.3 * i);
        v[static_cast<size_t>(i)] = 1.0 / (1.0 + i);
        w[static_cast<size_t>(i)] = 2.0 * u[static_cast<size_t>(i)] - 3.0 * v[static_cast<size_t>(i)];
    }
    ThetaConfig cfg{0.5, 8, 2};
    auto ru = solve(op, u, nullptr, cfg, 1.0).U;
    auto rv = solve(op, v, nullptr, cfg, 1.0).U;
    auto rw = solve(op, w, nullptr, cfg, 1.0).U;
    for (int i = 0; i < n; ++i)
        CHECK(rw[static_cast<size_t>(i)] ==
              doctest::Approx(2.0 * ru[static_cast<size_t>(i)] - 3.0 * rv[static_cast<size_t>(i)])
                  .epsilon(1e-10).scale(1.0));
}

TEST_CASE("implicit Euler on the constant solution discounts exactly") {
    const double r = 0.25, T = 2.0;
    const int N = 16;
    DiscreteOperator op = make_op(r, 0.0, SchemeKind::Forward, 40);
    std::vector<double> ones(static_cast<size_t>(op.size()), 1.0);
    ThetaConfig cfg{1.0, N, 0};  // plain implicit Euler, no startup substeps
    SolveResult res = solve(op, ones, nullptr, cfg, T);
    double expected = std::pow(1.0 + r * T / N, -N);
    for (double v : res.U) CHECK(v == doctest::Approx(expected).epsilon(1e-12));
    CHECK(res.dt == doctest::Approx(T / N).epsilon(1e-15));
    CHECK(res.norm_trace.size() == static_cast<size_t>(N) + 1);
    CHECK(res.norm_trace.front() == 1.0);
    // trace is the running max norm: monotone decay here
    for (size_t i = 1; i < res.norm_trace.size(); ++i)
        CHECK(res.norm_trace[i] <= res.norm_trace[i - 1] + 1e-14);
}

TEST_CASE("startup substeps replace the first nominal step") {
    DiscreteOperator op = make_op(0.1, 0.3, SchemeKind::CentralA, 30);
    auto initial = payoff_vector(op.grid, 100.0);
    ThetaConfig with{0.5, 10, 2}, without{0.5, 10, 0};
    SolveResult a = solve(op, initial, nullptr, with, 1.0);
    SolveResult b = solve(op, initial, nullptr, without, 1.0);
    CHECK(a.rannacher_substeps == 2);
    CHECK(b.rannacher_substeps == 0);
    // both integrate to the same horizon; the damped start differs slightly
    double diff = 0.0;
    for (size_t i = 0; i < a.U.size(); ++i) diff = std::max(diff, std::abs(a.U[i] - b.U[i]));
    CHECK(diff > 0.0);
    CHECK(diff < 1.0);
}

TEST_CASE("solver converges to the analytic call") {
    const double r = 0.1, sigma = 0.3, T = 1.0;
    DiscreteOperator op = make_op(r, sigma, SchemeKind::CentralA, 200);
    auto initial = payoff_vector(op.grid, 100.0);
    ThetaConfig cfg{0.5, 200, 2};
    SolveResult res = solve(op, initial, nullptr, cfg, T);
    CallOption opt{100.0, r, sigma};
    double err = 0.0;
    for (int i = 0; i < op.size(); ++i)
        err = std::max(err, std::abs(res.U[static_cast<size_t>(i)] -
                                     call_price(op.grid.node(i + 1), T, opt)));
    CHECK(err < 0.05);
}

TEST_CASE("empirical order in time") {
    DiscreteOperator op = make_op(0.1, 0.3, SchemeKind::Forward, 60);
    // smooth initial data: the valuation itself a little before expiry
    CallOption opt{100.0, 0.1, 0.3};
    std::vector<double> smooth(static_cast<size_t>(op.size()));
    for (int i = 0; i < op.size(); ++i)
        smooth[static_cast<size_t>(i)] = call_price(op.grid.node(i + 1), 0.1, opt);
    OrderFit be = measure_time_order(op, smooth, 1.0, {8, 16, 32, 64}, 1.0, 4096);
    CHECK_FALSE(be.degenerate);
    CHECK(be.p == doctest::Approx(1.0).epsilon(0.25));
    OrderFit cn = measure_time_order(op, smooth, 0.5, {8, 16, 32, 64}, 1.0, 4096);
    CHECK_FALSE(cn.degenerate);
    CHECK(cn.p == doctest::Approx(2.0).epsilon(0.25));
}

TEST_CASE("degenerate order fit is flagged") {
    // zero initial data stays exactly zero, so every error vanishes and no
    // slope can be fitted
    DiscreteOperator op = make_op(0.1, 0.3, SchemeKind::Forward, 40);
    std::vector<double> zero(static_cast<size_t>(op.size()), 0.0);
    OrderFit fit = measure_time_order(op, zero, 1.0, {4, 8, 16}, 1.0, 256);
    CHECK(fit.degenerate);
    // the stationary node vector is preserved up to roundoff: errors exist
    // but sit far below any truncation-error scale
    std::vector<double> nodes(static_cast<size_t>(op.size()));
    for (int i = 0; i < op.size(); ++i) nodes[static_cast<size_t>(i)] = op.grid.node(i + 1);
    OrderFit near_fixed = measure_time_order(op, nodes, 1.0, {4, 8, 16}, 1.0, 256);
    for (double e : near_fixed.errors) CHECK(e < 1e-8 * op.grid.S);
}
