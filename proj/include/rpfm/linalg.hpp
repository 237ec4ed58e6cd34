#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace rpfm {

/// Dense real vector with value semantics.
class Vector {
public:
    Vector() = default;
    explicit Vector(std::size_t n, double fill = 0.0) : data_(n, fill) {}
    Vector(std::initializer_list<double> values) : data_(values) {}
    explicit Vector(std::vector<double> values) : data_(std::move(values)) {}

    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }

    std::span<double> span() noexcept { return data_; }
    std::span<const double> span() const noexcept { return data_; }
    const std::vector<double>& values() const noexcept { return data_; }

    auto begin() noexcept { return data_.begin(); }
    auto end() noexcept { return data_.end(); }
    auto begin() const noexcept { return data_.begin(); }
    auto end() const noexcept { return data_.end(); }

    bool all_finite() const noexcept;

    static Vector ones(std::size_t n) { return Vector(n, 1.0); }

    friend bool operator==(const Vector&, const Vector&) = default;

private:
    std::vector<double> data_;
};

/// Dense row-major real matrix.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    DenseMatrix(std::initializer_list<std::initializer_list<double>> rows);

    static DenseMatrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool is_square() const noexcept { return rows_ == cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> entries() const noexcept { return data_; }

    bool all_finite() const noexcept;
    DenseMatrix transposed() const;

    friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// LU factors of a square matrix with row pivoting: P·A = L·U.
///
/// `lu` stores the strictly lower part of L (unit diagonal implied) and U
/// together. `perm[i]` is the row of A that ended up in row i.
struct LuFactors {
    DenseMatrix lu;
    std::vector<std::size_t> perm;

    std::size_t size() const noexcept { return lu.rows(); }
    DenseMatrix lower() const;
    DenseMatrix upper() const;
};

/// Gaussian elimination with partial pivoting (largest magnitude in column).
/// Throws SingularMatrix when |pivot| < 1e-14·‖A‖∞.
LuFactors lu_factor(const DenseMatrix& a);
Vector lu_solve(const LuFactors& f, const Vector& b);

Vector mat_vec(const DenseMatrix& a, const Vector& x);
DenseMatrix mat_mul(const DenseMatrix& a, const DenseMatrix& b);

double norm_inf(std::span<const double> v) noexcept;
double norm_2(std::span<const double> v) noexcept;
inline double norm_inf(const Vector& v) noexcept { return norm_inf(v.span()); }
inline double norm_2(const Vector& v) noexcept { return norm_2(v.span()); }

/// Induced ∞-norm (max absolute row sum).
double norm_inf(const DenseMatrix& a) noexcept;

double dot(const Vector& a, const Vector& b);

// Elementwise helpers used throughout the solvers.
Vector add(const Vector& a, const Vector& b);
Vector sub(const Vector& a, const Vector& b);
Vector axpy(double alpha, const Vector& x, const Vector& y);  // y + alpha·x
Vector scaled(double alpha, const Vector& x);
Vector hadamard(const Vector& a, const Vector& b);
bool all_positive(const Vector& v) noexcept;

}  // namespace rpfm
