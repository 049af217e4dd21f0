#pragma once

#include <span>
#include <vector>

namespace lbc {

/// Row-major dense real matrix.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, 0.0) {}

    static DenseMatrix identity(int n);

    double& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }
    double* data() { return a_.data(); }
    const double* data() const { return a_.data(); }

    DenseMatrix operator*(const DenseMatrix& other) const;
    DenseMatrix operator+(const DenseMatrix& other) const;
    DenseMatrix operator-(const DenseMatrix& other) const;
    DenseMatrix scaled(double factor) const;

private:
    int rows_ = 0, cols_ = 0;
    std::vector<double> a_;
};

/// Tridiagonal matrix stored by diagonals; sub/super have size n-1.
struct Tridiagonal {
    std::vector<double> sub, diag, super;

    explicit Tridiagonal(int n = 0)
        : sub(n > 0 ? static_cast<size_t>(n - 1) : 0, 0.0),
          diag(static_cast<size_t>(n), 0.0),
          super(n > 0 ? static_cast<size_t>(n - 1) : 0, 0.0) {}

    int size() const { return static_cast<int>(diag.size()); }
    std::vector<double> apply(std::span<const double> x) const;
    DenseMatrix to_dense() const;
    /// Principal leading k-by-k block.
    Tridiagonal leading_block(int k) const;
};

double norm_inf(const DenseMatrix& X);
double norm_inf(std::span<const double> v);

/// Logarithmic maximum norm: max over rows of x_ii + sum_{j != i} |x_ij|.
double log_norm_inf(const DenseMatrix& X);

/// Solve A x = b for tridiagonal A. Uses the Thomas elimination when every
/// row is strictly diagonally dominant; otherwise falls back to a dense
/// partial-pivot factorization. Throws std::runtime_error on a singular
/// system.
std::vector<double> solve_tridiagonal(const Tridiagonal& A, std::span<const double> b);

/// Solve A X = B with dense partial-pivot LU.
DenseMatrix lu_solve(DenseMatrix A, DenseMatrix B);

/// Matrix exponential by scaling-and-squaring with diagonal Pade
/// approximants (degrees 3/5/7/9/13 selected by the norm of the input).
DenseMatrix expm(const DenseMatrix& X);

struct PowerNorms {
    std::vector<double> norms;  ///< ||X^n||_inf for n = 0..n_max (may stop early)
    bool overflow = false;      ///< set when the powers left the representable range
};

/// Norms of successive powers, computed by iterated multiplication.
PowerNorms matrix_power_norms(const DenseMatrix& X, int n_max);

/// phi(dt*A) = (I - theta*dt*A)^{-1} (I + (1-theta)*dt*A) for tridiagonal A,
/// assembled densely column by column through the tridiagonal solver.
DenseMatrix theta_stability_matrix(const Tridiagonal& A, double theta, double dt);

}  // namespace lbc
