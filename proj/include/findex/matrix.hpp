#pragma once

#include <cstddef>
#include <vector>

namespace findex {

// Dense row-major matrix of doubles. Only the operations the toolkit needs.
class Matrix {
  public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(size_t rows, size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), a_(rows * cols, fill) {}

    static Matrix identity(size_t n);

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }

    double& operator()(size_t i, size_t j) { return a_[i * cols_ + j]; }
    double operator()(size_t i, size_t j) const { return a_[i * cols_ + j]; }

    const std::vector<double>& data() const { return a_; }

    Matrix multiply(const Matrix& other) const;
    Matrix transpose() const;

    bool operator==(const Matrix&) const = default;

  private:
    size_t rows_, cols_;
    std::vector<double> a_;
};

// Eigensystem of a real symmetric matrix. values ascending; column k of
// `vectors` pairs with values[k]; each column's largest-magnitude component
// is non-negative (first such component on ties) so results are deterministic
// for simple spectra.
struct EigenSystem {
    std::vector<double> values;
    Matrix vectors;
    size_t rotations = 0;      // Jacobi rotations applied
    double offdiag_max = 0.0;  // largest |off-diagonal| at exit
};

// Cyclic Jacobi eigensolver. Sweeps the upper triangle until the Frobenius
// norm of the off-diagonal part drops below `tol` (absolute), capped at
// 100·n² rotations. Throws numeric_error if the cap is hit while the largest
// off-diagonal entry still exceeds 1e-8 (residual reported in the message).
EigenSystem jacobi_eigen(const Matrix& sym, double tol = 1e-12);

}  // namespace findex
