#include "lbclab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lbc {

DenseMatrix DenseMatrix::identity(int n) {
    DenseMatrix I(n, n);
    for (int i = 0; i < n; ++i) I(i, i) = 1.0;
    return I;
}

DenseMatrix DenseMatrix::operator*(const DenseMatrix& other) const {
    if (cols_ != other.rows_) throw std::invalid_argument("DenseMatrix: incompatible product");
    DenseMatrix c(rows_, other.cols_);
    const int n = other.cols_;
    for (int i = 0; i < rows_; ++i) {
        double* ci = c.a_.data() + static_cast<size_t>(i) * n;
        const double* ai = a_.data() + static_cast<size_t>(i) * cols_;
        for (int k = 0; k < cols_; ++k) {
            const double aik = ai[k];
            if (aik == 0.0) continue;
            const double* bk = other.a_.data() + static_cast<size_t>(k) * n;
            for (int j = 0; j < n; ++j) ci[j] += aik * bk[j];
        }
    }
    return c;
}

DenseMatrix DenseMatrix::operator+(const DenseMatrix& other) const {
    DenseMatrix c = *this;
    for (size_t i = 0; i < a_.size(); ++i) c.a_[i] += other.a_[i];
    return c;
}

DenseMatrix DenseMatrix::operator-(const DenseMatrix& other) const {
    DenseMatrix c = *this;
    for (size_t i = 0; i < a_.size(); ++i) c.a_[i] -= other.a_[i];
    return c;
}

DenseMatrix DenseMatrix::scaled(double factor) const {
    DenseMatrix c = *this;
    for (double& v : c.a_) v *= factor;
    return c;
}

std::vector<double> Tridiagonal::apply(std::span<const double> x) const {
    const int n = size();
    std::vector<double> y(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        double v = diag[i] * x[i];
        if (i > 0) v += sub[i - 1] * x[i - 1];
        if (i < n - 1) v += super[i] * x[i + 1];
        y[static_cast<size_t>(i)] = v;
    }
    return y;
}

DenseMatrix Tridiagonal::to_dense() const {
    const int n = size();
    DenseMatrix X(n, n);
    for (int i = 0; i < n; ++i) {
        X(i, i) = diag[i];
        if (i > 0) X(i, i - 1) = sub[i - 1];
        if (i < n - 1) X(i, i + 1) = super[i];
    }
    return X;
}

Tridiagonal Tridiagonal::leading_block(int k) const {
    Tridiagonal B(k);
    std::copy_n(diag.begin(), k, B.diag.begin());
    std::copy_n(sub.begin(), k - 1, B.sub.begin());
    std::copy_n(super.begin(), k - 1, B.super.begin());
    return B;
}

double norm_inf(const DenseMatrix& X) {
    double mx = 0.0;
    for (int i = 0; i < X.rows(); ++i) {
        double row = 0.0;
        for (int j = 0; j < X.cols(); ++j) row += std::abs(X(i, j));
        mx = std::max(mx, row);
    }
    return mx;
}

double norm_inf(std::span<const double> v) {
    double mx = 0.0;
    for (double x : v) mx = std::max(mx, std::abs(x));
    return mx;
}

double log_norm_inf(const DenseMatrix& X) {
    if (X.rows() != X.cols()) throw std::invalid_argument("log_norm_inf: matrix must be square");
    double mx = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < X.rows(); ++i) {
        double row = X(i, i);
        for (int j = 0; j < X.cols(); ++j)
            if (j != i) row += std::abs(X(i, j));
        mx = std::max(mx, row);
    }
    return mx;
}

DenseMatrix lu_solve(DenseMatrix A, DenseMatrix B) {
    const int n = A.rows();
    if (A.cols() != n || B.rows() != n) throw std::invalid_argument("lu_solve: dimension mismatch");
    std::vector<int> piv(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) {
        int p = k;
        for (int i = k + 1; i < n; ++i)
            if (std::abs(A(i, k)) > std::abs(A(p, k))) p = i;
        if (A(p, k) == 0.0) throw std::runtime_error("lu_solve: singular matrix");
        piv[static_cast<size_t>(k)] = p;
        if (p != k) {
            for (int j = 0; j < n; ++j) std::swap(A(k, j), A(p, j));
            for (int j = 0; j < B.cols(); ++j) std::swap(B(k, j), B(p, j));
        }
        const double inv = 1.0 / A(k, k);
        for (int i = k + 1; i < n; ++i) {
            const double l = A(i, k) * inv;
            if (l == 0.0) continue;
            A(i, k) = l;
            for (int j = k + 1; j < n; ++j) A(i, j) -= l * A(k, j);
            for (int j = 0; j < B.cols(); ++j) B(i, j) -= l * B(k, j);
        }
    }
    for (int k = n - 1; k >= 0; --k) {
        const double inv = 1.0 / A(k, k);
        for (int j = 0; j < B.cols(); ++j) {
            double v = B(k, j);
            for (int i = k + 1; i < n; ++i) v -= A(k, i) * B(i, j);
            B(k, j) = v * inv;
        }
    }
    return B;
}

std::vector<double> solve_tridiagonal(const Tridiagonal& A, std::span<const double> b) {
    const int n = A.size();
    if (n < 1 || static_cast<int>(b.size()) != n)
        throw std::invalid_argument("solve_tridiagonal: dimension mismatch");

    bool dominant = true;
    for (int i = 0; i < n && dominant; ++i) {
        double off = (i > 0 ? std::abs(A.sub[i - 1]) : 0.0) + (i < n - 1 ? std::abs(A.super[i]) : 0.0);
        dominant = std::abs(A.diag[i]) > off;
    }

    if (!dominant) {
        DenseMatrix rhs(n, 1);
        for (int i = 0; i < n; ++i) rhs(i, 0) = b[i];
        DenseMatrix x = lu_solve(A.to_dense(), std::move(rhs));
        std::vector<double> out(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) out[static_cast<size_t>(i)] = x(i, 0);
        return out;
    }

    // Thomas elimination, valid without pivoting for dominant rows.
    std::vector<double> c(static_cast<size_t>(n)), d(static_cast<size_t>(n));
    c[0] = (n > 1 ? A.super[0] : 0.0) / A.diag[0];
    d[0] = b[0] / A.diag[0];
    for (int i = 1; i < n; ++i) {
        const double denom = A.diag[i] - A.sub[i - 1] * c[i - 1];
        c[static_cast<size_t>(i)] = (i < n - 1 ? A.super[i] : 0.0) / denom;
        d[static_cast<size_t>(i)] = (b[i] - A.sub[i - 1] * d[i - 1]) / denom;
    }
    for (int i = n - 2; i >= 0; --i) d[static_cast<size_t>(i)] -= c[static_cast<size_t>(i)] * d[i + 1];
    return d;
}

namespace {

DenseMatrix pade_eval(const DenseMatrix& A, std::span<const double> b) {
    // U + V with U odd and V even in A; returns r = (V-U)^{-1}(V+U).
    const int n = A.rows();
    const DenseMatrix I = DenseMatrix::identity(n);
    const DenseMatrix A2 = A * A;

    DenseMatrix U, V;
    if (b.size() == 14) {  // degree 13
        const DenseMatrix A4 = A2 * A2;
        const DenseMatrix A6 = A2 * A4;
        DenseMatrix W = A6.scaled(b[13]) + A4.scaled(b[11]) + A2.scaled(b[9]);
        U = A * (A6 * W + A6.scaled(b[7]) + A4.scaled(b[5]) + A2.scaled(b[3]) + I.scaled(b[1]));
        DenseMatrix Z = A6.scaled(b[12]) + A4.scaled(b[10]) + A2.scaled(b[8]);
        V = A6 * Z + A6.scaled(b[6]) + A4.scaled(b[4]) + A2.scaled(b[2]) + I.scaled(b[0]);
    } else {
        DenseMatrix Apow = I;  // A^0
        DenseMatrix Usum(n, n), Vsum(n, n);
        Vsum = I.scaled(b[0]);
        Usum = I.scaled(b[1]);
        for (size_t k = 2; k < b.size(); k += 2) {
            Apow = Apow * A2;
            Vsum = Vsum + Apow.scaled(b[k]);
            if (k + 1 < b.size()) Usum = Usum + Apow.scaled(b[k + 1]);
        }
        U = A * Usum;
        V = Vsum;
    }
    return lu_solve(V - U, V + U);
}

}  // namespace

DenseMatrix expm(const DenseMatrix& X) {
    if (X.rows() != X.cols()) throw std::invalid_argument("expm: matrix must be square");
    static const double theta3 = 1.495585217958292e-2;
    static const double theta5 = 2.539398330063230e-1;
    static const double theta7 = 9.504178996162932e-1;
    static const double theta9 = 2.097847961257068;
    static const double theta13 = 5.371920351148152;
    static const double b3[] = {120, 60, 12, 1};
    static const double b5[] = {30240, 15120, 3360, 420, 30, 1};
    static const double b7[] = {17297280, 8648640, 1995840, 277200, 25200, 1512, 56, 1};
    static const double b9[] = {17643225600, 8821612800, 2075673600, 302702400,
                                30270240,    2162160,    110880,     3960,
                                90,          1};
    static const double b13[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                                 1187353796428800.0,  129060195264000.0,   10559470521600.0,
                                 670442572800.0,      33522128640.0,       1323241920.0,
                                 40840800.0,          960960.0,            16380.0,
                                 182.0,               1.0};

    const double nrm = norm_inf(X);
    if (!std::isfinite(nrm)) throw std::runtime_error("expm: non-finite input");

    if (nrm <= theta3) return pade_eval(X, b3);
    if (nrm <= theta5) return pade_eval(X, b5);
    if (nrm <= theta7) return pade_eval(X, b7);
    if (nrm <= theta9) return pade_eval(X, b9);

    int s = 0;
    if (nrm > theta13) {
        s = static_cast<int>(std::ceil(std::log2(nrm / theta13)));
        if (s > 1024) throw std::runtime_error("expm: norm beyond representable scaling range");
    }
    DenseMatrix R = pade_eval(X.scaled(std::ldexp(1.0, -s)), b13);
    for (int i = 0; i < s; ++i) R = R * R;
    return R;
}

PowerNorms matrix_power_norms(const DenseMatrix& X, int n_max) {
    if (n_max < 0) throw std::invalid_argument("matrix_power_norms: n_max must be >= 0");
    PowerNorms out;
    out.norms.reserve(static_cast<size_t>(n_max) + 1);
    out.norms.push_back(1.0);
    DenseMatrix P = DenseMatrix::identity(X.rows());
    for (int n = 1; n <= n_max; ++n) {
        P = P * X;
        const double nrm = norm_inf(P);
        if (!std::isfinite(nrm) || nrm > 1e250) {
            out.overflow = true;
            break;
        }
        out.norms.push_back(nrm);
    }
    return out;
}

DenseMatrix theta_stability_matrix(const Tridiagonal& A, double theta, double dt) {
    const int n = A.size();
    Tridiagonal lhs(n);
    Tridiagonal rhs(n);
    for (int i = 0; i < n; ++i) {
        lhs.diag[i] = 1.0 - theta * dt * A.diag[i];
        rhs.diag[i] = 1.0 + (1.0 - theta) * dt * A.diag[i];
    }
    for (int i = 0; i + 1 < n; ++i) {
        lhs.sub[i] = -theta * dt * A.sub[i];
        lhs.super[i] = -theta * dt * A.super[i];
        rhs.sub[i] = (1.0 - theta) * dt * A.sub[i];
        rhs.super[i] = (1.0 - theta) * dt * A.super[i];
    }
    DenseMatrix Phi(n, n);
    std::vector<double> e(static_cast<size_t>(n), 0.0);
    for (int j = 0; j < n; ++j) {
        e[static_cast<size_t>(j)] = 1.0;
        std::vector<double> col = solve_tridiagonal(lhs, rhs.apply(e));
        e[static_cast<size_t>(j)] = 0.0;
        for (int i = 0; i < n; ++i) Phi(i, j) = col[static_cast<size_t>(i)];
    }
    return Phi;
}

}  // namespace lbc
