#pragma once

#include <cstddef>
#include <vector>

namespace wesma {

// Dense row-major matrix. Small enough on purpose; everything in this
// project fits comfortably in a flat vector of doubles.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0)
        : rows(r), cols(c), data(r * c, fill) {}

    double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    double* row(std::size_t i) { return data.data() + i * cols; }
    const double* row(std::size_t i) const { return data.data() + i * cols; }
};

Matrix matmul(const Matrix& a, const Matrix& b);

// X (d x n) -> (d+1 x n): a trailing row of ones (the bias slot).
Matrix augment_bias_row(const Matrix& x);

// A * A^T computed symmetrically.
Matrix scatter(const Matrix& a);

double frobenius_norm(const Matrix& m);
double max_abs(const Matrix& m);
double max_abs_diff(const Matrix& a, const Matrix& b);

// LU factorization with partial pivoting. Throws NumericError when a pivot
// falls below the relative singularity tolerance.
struct LuDecomposition {
    Matrix lu;
    std::vector<std::size_t> perm;
};

LuDecomposition lu_factor(Matrix a);
std::vector<double> lu_solve(const LuDecomposition& f, std::vector<double> rhs);

} // namespace wesma
