#include "wesma/linalg.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "wesma/errors.hpp"

namespace wesma {

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols != b.rows) {
        throw std::invalid_argument("matmul: dimension mismatch");
    }
    Matrix out(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i) {
        const double* arow = a.row(i);
        double* orow = out.row(i);
        for (std::size_t k = 0; k < a.cols; ++k) {
            const double aik = arow[k];
            if (aik == 0.0) {
                continue;
            }
            const double* brow = b.row(k);
            for (std::size_t j = 0; j < b.cols; ++j) {
                orow[j] += aik * brow[j];
            }
        }
    }
    return out;
}

Matrix augment_bias_row(const Matrix& x) {
    Matrix out(x.rows + 1, x.cols);
    for (std::size_t i = 0; i < x.rows; ++i) {
        for (std::size_t j = 0; j < x.cols; ++j) {
            out.at(i, j) = x.at(i, j);
        }
    }
    for (std::size_t j = 0; j < x.cols; ++j) {
        out.at(x.rows, j) = 1.0;
    }
    return out;
}

Matrix scatter(const Matrix& a) {
    Matrix out(a.rows, a.rows);
    for (std::size_t i = 0; i < a.rows; ++i) {
        for (std::size_t j = i; j < a.rows; ++j) {
            double sum = 0.0;
            const double* ri = a.row(i);
            const double* rj = a.row(j);
            for (std::size_t k = 0; k < a.cols; ++k) {
                sum += ri[k] * rj[k];
            }
            out.at(i, j) = sum;
            out.at(j, i) = sum;
        }
    }
    return out;
}

double frobenius_norm(const Matrix& m) {
    double sum = 0.0;
    for (double v : m.data) {
        sum += v * v;
    }
    return std::sqrt(sum);
}

double max_abs(const Matrix& m) {
    double best = 0.0;
    for (double v : m.data) {
        best = std::max(best, std::fabs(v));
    }
    return best;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
    if (a.rows != b.rows || a.cols != b.cols) {
        throw std::invalid_argument("max_abs_diff: dimension mismatch");
    }
    double best = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        best = std::max(best, std::fabs(a.data[i] - b.data[i]));
    }
    return best;
}

LuDecomposition lu_factor(Matrix a) {
    if (a.rows != a.cols) {
        throw std::invalid_argument("lu_factor: matrix not square");
    }
    const std::size_t n = a.rows;
    const double tol =
        static_cast<double>(n) * max_abs(a) * std::numeric_limits<double>::epsilon();
    LuDecomposition f;
    f.perm.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        f.perm[i] = i;
    }
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pivot_row = k;
        double pivot_mag = std::fabs(a.at(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            const double mag = std::fabs(a.at(i, k));
            if (mag > pivot_mag) {
                pivot_mag = mag;
                pivot_row = i;
            }
        }
        if (pivot_mag <= tol) {
            throw NumericError("singular matrix");
        }
        if (pivot_row != k) {
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(a.at(k, j), a.at(pivot_row, j));
            }
            std::swap(f.perm[k], f.perm[pivot_row]);
        }
        const double pivot = a.at(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double factor = a.at(i, k) / pivot;
            a.at(i, k) = factor;
            for (std::size_t j = k + 1; j < n; ++j) {
                a.at(i, j) -= factor * a.at(k, j);
            }
        }
    }
    f.lu = std::move(a);
    return f;
}

std::vector<double> lu_solve(const LuDecomposition& f, std::vector<double> rhs) {
    const std::size_t n = f.lu.rows;
    if (rhs.size() != n) {
        throw std::invalid_argument("lu_solve: rhs size mismatch");
    }
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double sum = rhs[f.perm[i]];
        for (std::size_t j = 0; j < i; ++j) {
            sum -= f.lu.at(i, j) * y[j];
        }
        y[i] = sum;
    }
    for (std::size_t ii = n; ii-- > 0;) {
        double sum = y[ii];
        for (std::size_t j = ii + 1; j < n; ++j) {
            sum -= f.lu.at(ii, j) * y[j];
        }
        y[ii] = sum / f.lu.at(ii, ii);
    }
    return y;
}

} // namespace wesma
