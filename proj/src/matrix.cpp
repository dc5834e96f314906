#include "findex/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "findex/errors.hpp"

namespace findex {

Matrix Matrix::identity(size_t n) {
    Matrix m(n, n);
    for (size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::multiply(const Matrix& other) const {
    if (cols_ != other.rows_) throw input_error("matrix shape mismatch");
    Matrix out(rows_, other.cols_);
    for (size_t i = 0; i < rows_; ++i)
        for (size_t k = 0; k < cols_; ++k) {
            double aik = (*this)(i, k);
            if (aik == 0.0) continue;
            for (size_t j = 0; j < other.cols_; ++j) out(i, j) += aik * other(k, j);
        }
    return out;
}

Matrix Matrix::transpose() const {
    Matrix out(cols_, rows_);
    for (size_t i = 0; i < rows_; ++i)
        for (size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    return out;
}

namespace {

double offdiag_frobenius(const Matrix& a) {
    size_t n = a.rows();
    double s = 0.0;
    for (size_t p = 0; p + 1 < n; ++p)
        for (size_t q = p + 1; q < n; ++q) s += a(p, q) * a(p, q);
    return std::sqrt(2.0 * s);
}

double offdiag_max(const Matrix& a) {
    size_t n = a.rows();
    double m = 0.0;
    for (size_t p = 0; p + 1 < n; ++p)
        for (size_t q = p + 1; q < n; ++q) m = std::max(m, std::abs(a(p, q)));
    return m;
}

}  // namespace

EigenSystem jacobi_eigen(const Matrix& sym, double tol) {
    size_t n = sym.rows();
    if (n == 0 || sym.cols() != n) throw input_error("jacobi_eigen: not square");
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j)
            if (std::abs(sym(i, j) - sym(j, i)) > 1e-12)
                throw input_error("jacobi_eigen: matrix not symmetric");

    Matrix a = sym;
    Matrix v = Matrix::identity(n);
    const size_t max_rot = 100 * n * n;
    size_t rot = 0;

    while (offdiag_frobenius(a) > tol && rot < max_rot) {
        for (size_t p = 0; p + 1 < n && rot < max_rot; ++p) {
            for (size_t q = p + 1; q < n && rot < max_rot; ++q) {
                double apq = a(p, q);
                if (apq == 0.0) continue;
                double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                double tau = s / (1.0 + c);

                double app = a(p, p), aqq = a(q, q);
                a(p, p) = app - t * apq;
                a(q, q) = aqq + t * apq;
                a(p, q) = a(q, p) = 0.0;
                for (size_t i = 0; i < n; ++i) {
                    if (i != p && i != q) {
                        double aip = a(i, p), aiq = a(i, q);
                        a(i, p) = a(p, i) = aip - s * (aiq + tau * aip);
                        a(i, q) = a(q, i) = aiq + s * (aip - tau * aiq);
                    }
                    double vip = v(i, p), viq = v(i, q);
                    v(i, p) = vip - s * (viq + tau * vip);
                    v(i, q) = viq + s * (vip - tau * viq);
                }
                ++rot;
            }
        }
    }

    double residual = offdiag_max(a);
    if (residual > 1e-8)
        throw numeric_error("jacobi_eigen: no convergence after " + std::to_string(rot) +
                            " rotations, largest off-diagonal " + std::to_string(residual));

    EigenSystem es;
    es.rotations = rot;
    es.offdiag_max = residual;
    es.values.resize(n);

    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> diag(n);
    for (size_t i = 0; i < n; ++i) diag[i] = a(i, i);
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t x, size_t y) { return diag[x] < diag[y]; });

    es.vectors = Matrix(n, n);
    for (size_t k = 0; k < n; ++k) {
        size_t src = order[k];
        es.values[k] = diag[src];
        size_t arg = 0;
        double best = -1.0;
        for (size_t i = 0; i < n; ++i) {
            double mag = std::abs(v(i, src));
            if (mag > best) {
                best = mag;
                arg = i;
            }
        }
        double sign = v(arg, src) < 0.0 ? -1.0 : 1.0;
        for (size_t i = 0; i < n; ++i) es.vectors(i, k) = sign * v(i, src);
    }
    return es;
}

}  // namespace findex
