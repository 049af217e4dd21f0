#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "lbclab/linalg.hpp"

using namespace lbc;

namespace {

DenseMatrix random_matrix(int n, std::mt19937& rng, double scale) {
    std::uniform_real_distribution<double> dist(-scale, scale);
    DenseMatrix X(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) X(i, j) = dist(rng);
    return X;
}

double max_abs_diff(const DenseMatrix& X, const DenseMatrix& Y) {
    double worst = 0.0;
    for (int i = 0; i < X.rows(); ++i)
        for (int j = 0; j < X.cols(); ++j) worst = std::max(worst, std::abs(X(i, j) - Y(i, j)));
    return worst;
}

}  // namespace

TEST_CASE("infinity norms") {
    DenseMatrix I = DenseMatrix::identity(5);
    CHECK(norm_inf(I) == 1.0);
    DenseMatrix X(2, 2);
    X(0, 0) = 1.0; X(0, 1) = -2.0;
    X(1, 0) = 3.0; X(1, 1) = 4.0;
    CHECK(norm_inf(X) == 7.0);
    std::vector<double> v{0.0, -3.0, 2.0};
    CHECK(norm_inf(v) == 3.0);
}

TEST_CASE("logarithmic max norm") {
    CHECK(log_norm_inf(DenseMatrix::identity(4)) == 1.0);
    CHECK(log_norm_inf(DenseMatrix(3, 3)) == 0.0);
    DenseMatrix X(2, 2);
    X(0, 0) = -2.0; X(0, 1) = 1.0;
    X(1, 0) = 1.0;  X(1, 1) = -2.0;
    CHECK(log_norm_inf(X) == -1.0);
}

TEST_CASE("logarithmic norm controls the exponential growth") {
    // mu[X] <= w iff ||e^{tX}|| <= e^{tw}; check both directions on samples
    std::mt19937 rng(7);
    for (int trial = 0; trial < 8; ++trial) {
        DenseMatrix X = random_matrix(6, rng, 1.0);
        double mu = log_norm_inf(X);
        for (double t : {0.1, 0.5, 1.0, 2.0}) {
            DenseMatrix E = expm(X.scaled(t));
            CHECK(norm_inf(E) <= std::exp(t * mu) * (1.0 + 1e-10));
        }
    }
}

TEST_CASE("tridiagonal solve on simple systems") {
    Tridiagonal I(3);
    I.diag = {1.0, 1.0, 1.0};
    std::vector<double> b{1.0, 2.0, 3.0};
    auto x = solve_tridiagonal(I, b);
    CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(x[1] == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(x[2] == doctest::Approx(3.0).epsilon(1e-15));

    Tridiagonal A(2);
    A.diag = {2.0, 2.0};
    A.sub = {1.0};
    A.super = {1.0};
    std::vector<double> rhs{3.0, 3.0};
    auto y = solve_tridiagonal(A, rhs);
    CHECK(y[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(y[1] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("tridiagonal solve matches the dense factorization") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int n : {5, 40, 200}) {
        for (int variant = 0; variant < 2; ++variant) {
            Tridiagonal A(n);
            for (int i = 0; i < n - 1; ++i) {
                A.sub[i] = dist(rng);
                A.super[i] = dist(rng);
            }
            for (int i = 0; i < n; ++i) {
                double off = (i > 0 ? std::abs(A.sub[i - 1]) : 0.0) +
                             (i < n - 1 ? std::abs(A.super[i]) : 0.0);
                // variant 0: strictly dominant (Thomas path);
                // variant 1: not dominant (dense fallback path)
                A.diag[i] = (variant == 0) ? off + 1.0 + std::abs(dist(rng))
                                           : 0.25 * off + 0.05;
            }
            std::vector<double> b(n);
            for (auto& v : b) v = dist(rng);
            auto x = solve_tridiagonal(A, b);
            DenseMatrix B(n, 1);
            for (int i = 0; i < n; ++i) B(i, 0) = b[i];
            DenseMatrix X = lu_solve(A.to_dense(), B);
            for (int i = 0; i < n; ++i)
                CHECK(std::abs(x[i] - X(i, 0)) <= 1e-10 * (1.0 + std::abs(X(i, 0))));
            // residual check against the norm-scaled bound
            auto Ax = A.apply(x);
            double resid = 0.0;
            for (int i = 0; i < n; ++i) resid = std::max(resid, std::abs(Ax[i] - b[i]));
            CHECK(resid <= 1e-10 * (norm_inf(A.to_dense()) * norm_inf(x) + norm_inf(b)));
        }
    }
}

TEST_CASE("singular tridiagonal system is rejected") {
    Tridiagonal Z(3);  // all zeros
    std::vector<double> b{1.0, 0.0, 0.0};
    CHECK_THROWS_AS((void)solve_tridiagonal(Z, b), std::runtime_error);
}

TEST_CASE("expm of the zero matrix is the identity") {
    DenseMatrix E = expm(DenseMatrix(4, 4));
    CHECK(max_abs_diff(E, DenseMatrix::identity(4)) == 0.0);
}

TEST_CASE("expm of a diagonal matrix") {
    DenseMatrix D(2, 2);
    D(0, 0) = -1.0;
    D(1, 1) = -2.0;
    DenseMatrix E = expm(D);
    CHECK(E(0, 0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-13));
    CHECK(E(1, 1) == doctest::Approx(std::exp(-2.0)).epsilon(1e-13));
    CHECK(std::abs(E(0, 1)) == 0.0);
    CHECK(std::abs(E(1, 0)) == 0.0);
}

TEST_CASE("expm inverse and semigroup identities") {
    std::mt19937 rng(123);
    for (int n : {3, 10, 50}) {
        DenseMatrix X = random_matrix(n, rng, 1.0);
        DenseMatrix P = expm(X) * expm(X.scaled(-1.0));
        CHECK(max_abs_diff(P, DenseMatrix::identity(n)) < 1e-8);
        DenseMatrix E1 = expm(X);
        DenseMatrix E2 = expm(X.scaled(2.0));
        CHECK(max_abs_diff(E2, E1 * E1) < 1e-8 * (1.0 + norm_inf(E2)));
    }
}

TEST_CASE("expm reproduces the 2x2 boundary-block exponential") {
    // rows of C are identical: C = [[-rS/h, r s/h], [-rS/h, r s/h]] with
    // s = S - h; closed form written out independently here
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> rd(0.02, 0.5), Sd(100.0, 2000.0), hd(0.5, 20.0);
    for (int trial = 0; trial < 20; ++trial) {
        double r = rd(rng), S = Sd(rng), h = hd(rng), s = S - h;
        DenseMatrix C(2, 2);
        C(0, 0) = -r * S / h; C(0, 1) = r * s / h;
        C(1, 0) = -r * S / h; C(1, 1) = r * s / h;
        for (double t : {0.25, 1.0, 4.0}) {
            double e = std::exp(-r * t);
            DenseMatrix expected(2, 2);
            expected(0, 0) = (S * e - s) / h;
            expected(0, 1) = s * (1.0 - e) / h;
            expected(1, 0) = S * (e - 1.0) / h;
            expected(1, 1) = (S - s * e) / h;
            DenseMatrix E = expm(C.scaled(t));
            CHECK(max_abs_diff(E, expected) < 1e-10 * norm_inf(expected));
        }
    }
}

TEST_CASE("matrix power norms") {
    auto ones = matrix_power_norms(DenseMatrix::identity(3), 10);
    REQUIRE(ones.norms.size() == 11);
    for (double v : ones.norms) CHECK(v == 1.0);
    CHECK_FALSE(ones.overflow);

    DenseMatrix H(2, 2);
    H(0, 0) = 0.5; H(1, 1) = 0.5;
    auto halves = matrix_power_norms(H, 6);
    for (int n = 0; n <= 6; ++n) CHECK(halves.norms[n] == doctest::Approx(std::pow(0.5, n)).epsilon(1e-15));

    DenseMatrix big(2, 2);
    big(0, 0) = 1e200; big(1, 1) = 1e200;
    auto overflowed = matrix_power_norms(big, 4);
    CHECK(overflowed.overflow);
}

TEST_CASE("theta stability matrix matches the dense resolvent product") {
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    const int n = 12;
    Tridiagonal A(n);
    for (int i = 0; i < n - 1; ++i) {
        A.sub[i] = dist(rng);
        A.super[i] = dist(rng);
    }
    for (int i = 0; i < n; ++i) A.diag[i] = -2.0 + dist(rng);
    for (double theta : {0.5, 0.75, 1.0}) {
        const double dt = 0.125;
        DenseMatrix phi = theta_stability_matrix(A, theta, dt);
        DenseMatrix Ad = A.to_dense();
        DenseMatrix lhs = DenseMatrix::identity(n) - Ad.scaled(theta * dt);
        DenseMatrix rhs = DenseMatrix::identity(n) + Ad.scaled((1.0 - theta) * dt);
        DenseMatrix expected = lu_solve(lhs, rhs);
        CHECK(max_abs_diff(phi, expected) < 1e-12 * (1.0 + norm_inf(expected)));
    }
}
