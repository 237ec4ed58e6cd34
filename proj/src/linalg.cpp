#include "rpfm/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "rpfm/errors.hpp"

namespace rpfm {

namespace {

constexpr double kSingularityFloor = 1e-14;

void require_same_size(const Vector& a, const Vector& b, const char* op) {
    if (a.size() != b.size()) {
        throw DimensionMismatch(std::string(op) + ": lengths " + std::to_string(a.size()) +
                                " and " + std::to_string(b.size()));
    }
}

}  // namespace

bool Vector::all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

DenseMatrix::DenseMatrix(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw DimensionMismatch("ragged matrix initializer");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

bool DenseMatrix::all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

DenseMatrix DenseMatrix::transposed() const {
    DenseMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

DenseMatrix LuFactors::lower() const {
    const std::size_t n = size();
    DenseMatrix l(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) l(i, j) = lu(i, j);
        l(i, i) = 1.0;
    }
    return l;
}

DenseMatrix LuFactors::upper() const {
    const std::size_t n = size();
    DenseMatrix u(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) u(i, j) = lu(i, j);
    return u;
}

LuFactors lu_factor(const DenseMatrix& a) {
    if (!a.is_square()) {
        throw DimensionMismatch("lu_factor: matrix is " + std::to_string(a.rows()) + "x" +
                                std::to_string(a.cols()));
    }
    const std::size_t n = a.rows();
    LuFactors f{a, std::vector<std::size_t>(n)};
    std::iota(f.perm.begin(), f.perm.end(), std::size_t{0});
    DenseMatrix& lu = f.lu;

    const double floor = kSingularityFloor * norm_inf(a);

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        double best = std::abs(lu(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            const double v = std::abs(lu(i, k));
            if (v > best) {
                best = v;
                p = i;
            }
        }
        if (!(best >= floor) || best == 0.0) throw SingularMatrix(k, best, floor);

        if (p != k) {
            std::swap_ranges(lu.row(k).begin(), lu.row(k).end(), lu.row(p).begin());
            std::swap(f.perm[k], f.perm[p]);
        }

        const double pivot = lu(k, k);
        const auto pivot_row = lu.row(k);
        for (std::size_t i = k + 1; i < n; ++i) {
            auto r = lu.row(i);
            const double l = r[k] / pivot;
            r[k] = l;
            if (l == 0.0) continue;
            for (std::size_t j = k + 1; j < n; ++j) r[j] -= l * pivot_row[j];
        }
    }
    return f;
}

Vector lu_solve(const LuFactors& f, const Vector& b) {
    const std::size_t n = f.size();
    if (b.size() != n) {
        throw DimensionMismatch("lu_solve: system of size " + std::to_string(n) +
                                " with rhs of length " + std::to_string(b.size()));
    }
    Vector x(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto r = f.lu.row(i);
        double s = b[f.perm[i]];
        for (std::size_t j = 0; j < i; ++j) s -= r[j] * x[j];
        x[i] = s;
    }
    for (std::size_t i = n; i-- > 0;) {
        const auto r = f.lu.row(i);
        double s = x[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= r[j] * x[j];
        x[i] = s / r[i];
    }
    return x;
}

Vector mat_vec(const DenseMatrix& a, const Vector& x) {
    if (a.cols() != x.size()) {
        throw DimensionMismatch("mat_vec: " + std::to_string(a.cols()) + " columns vs length " +
                                std::to_string(x.size()));
    }
    Vector y(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const auto r = a.row(i);
        double s = 0.0;
        for (std::size_t j = 0; j < r.size(); ++j) s += r[j] * x[j];
        y[i] = s;
    }
    return y;
}

DenseMatrix mat_mul(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows()) throw DimensionMismatch("mat_mul: inner dimensions differ");
    DenseMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto ci = c.row(i);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            const auto bk = b.row(k);
            for (std::size_t j = 0; j < b.cols(); ++j) ci[j] += aik * bk[j];
        }
    }
    return c;
}

double norm_inf(std::span<const double> v) noexcept {
    double m = 0.0;
    for (double e : v) m = std::max(m, std::abs(e));
    return m;
}

double norm_2(std::span<const double> v) noexcept {
    // Scaled accumulation keeps squares of large or tiny entries representable.
    const double scale = norm_inf(v);
    if (scale == 0.0 || !std::isfinite(scale)) return scale;
    double s = 0.0;
    for (double e : v) {
        const double r = e / scale;
        s += r * r;
    }
    return scale * std::sqrt(s);
}

double norm_inf(const DenseMatrix& a) noexcept {
    double m = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (double e : a.row(i)) s += std::abs(e);
        m = std::max(m, s);
    }
    return m;
}

double dot(const Vector& a, const Vector& b) {
    require_same_size(a, b, "dot");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

Vector add(const Vector& a, const Vector& b) {
    require_same_size(a, b, "add");
    Vector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

Vector sub(const Vector& a, const Vector& b) {
    require_same_size(a, b, "sub");
    Vector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

Vector axpy(double alpha, const Vector& x, const Vector& y) {
    require_same_size(x, y, "axpy");
    Vector r(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) r[i] = y[i] + alpha * x[i];
    return r;
}

Vector scaled(double alpha, const Vector& x) {
    Vector r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = alpha * x[i];
    return r;
}

Vector hadamard(const Vector& a, const Vector& b) {
    require_same_size(a, b, "hadamard");
    Vector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * b[i];
    return r;
}

bool all_positive(const Vector& v) noexcept {
    return std::all_of(v.begin(), v.end(), [](double e) { return e > 0.0; });
}

}  // namespace rpfm
