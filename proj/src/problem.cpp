#include "rpfm/problem.hpp"

#include <string>
#include <vector>

#include "rpfm/errors.hpp"

namespace rpfm {

void LcpProblem::validate() const {
    if (!m.is_square()) throw DimensionMismatch("LCP matrix must be square");
    if (m.rows() == 0) throw InvalidArgument("LCP must have n >= 1");
    if (q.size() != m.rows()) {
        throw DimensionMismatch("q has length " + std::to_string(q.size()) + ", expected " +
                                std::to_string(m.rows()));
    }
    if (!m.all_finite() || !q.all_finite()) throw InvalidArgument("LCP data contains NaN or Inf");
    if (designed_solution) {
        if (designed_solution->x.size() != q.size() || designed_solution->y.size() != q.size()) {
            throw DimensionMismatch("designed solution length differs from n");
        }
    }
}

UniformStream::UniformStream(std::uint64_t seed) : engine_(seed) {}

double UniformStream::next() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

DenseMatrix fix_zero_rows_cols(const DenseMatrix& a, double eps) {
    if (!(eps > 0.0)) throw InvalidArgument("fix_zero_rows_cols: eps must be positive");
    DenseMatrix out = a;
    for (std::size_t i = 0; i < out.rows(); ++i) {
        bool zero = true;
        for (double v : out.row(i)) zero = zero && v == 0.0;
        if (zero) out(i, 0) += eps;
    }
    // Columns are inspected after the row pass so a shared (0,0) entry is bumped once.
    for (std::size_t j = 0; j < out.cols(); ++j) {
        bool zero = true;
        for (std::size_t i = 0; i < out.rows() && zero; ++i) zero = out(i, j) == 0.0;
        if (zero) out(0, j) += eps;
    }
    return out;
}

DenseMatrix build_skew_embedding(const DenseMatrix& a) {
    const std::size_t ma = a.rows();
    const std::size_t na = a.cols();
    DenseMatrix m(ma + na, ma + na);
    for (std::size_t i = 0; i < ma; ++i) {
        for (std::size_t j = 0; j < na; ++j) {
            const double v = a(i, j);
            m(na + i, j) = v;
            m(j, na + i) = v == 0.0 ? 0.0 : -v;
        }
    }
    return m;
}

ComplementaryPair designed_solution(std::size_t n) {
    if (n == 0) throw InvalidArgument("designed_solution: n must be >= 1");
    ComplementaryPair s{Vector(n), Vector(n)};
    for (std::size_t i = 0; i < n; ++i) {
        (i % 2 == 0 ? s.x : s.y)[i] = 1.0;
    }
    return s;
}

Vector build_q(const DenseMatrix& m, const Vector& x, const Vector& y) {
    if (m.rows() != y.size()) throw DimensionMismatch("build_q: y length differs from rows of M");
    return sub(y, mat_vec(m, x));
}

DenseMatrix perturb_dense(const DenseMatrix& a, double eps, std::uint64_t seed) {
    if (!(eps >= 0.0)) throw InvalidArgument("perturb_dense: eps must be nonnegative");
    if (eps == 0.0) return a;
    DenseMatrix out = a;
    UniformStream rng(seed);
    for (std::size_t i = 0; i < out.rows(); ++i)
        for (double& v : out.row(i)) v += rng.next() * eps;
    return out;
}

DenseMatrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    DenseMatrix out(rows, cols);
    UniformStream rng(seed);
    for (std::size_t i = 0; i < rows; ++i)
        for (double& v : out.row(i)) v = 2.0 * rng.next() - 1.0;
    return out;
}

LcpProblem generate_problem(const GeneratorSpec& spec) {
    if (spec.a.rows() == 0 || spec.a.cols() == 0) throw InvalidArgument("generator matrix is empty");
    DenseMatrix a = spec.zero_fix_epsilon > 0.0 ? fix_zero_rows_cols(spec.a, spec.zero_fix_epsilon) : spec.a;
    a = perturb_dense(a, spec.perturb_epsilon, spec.seed);

    LcpProblem p;
    p.m = build_skew_embedding(a);
    auto sol = designed_solution(p.m.rows());
    p.q = build_q(p.m, sol.x, sol.y);
    p.designed_solution = std::move(sol);
    p.name = spec.name;
    p.seed = spec.seed;
    return p;
}

Vector feasibility_residual(const DenseMatrix& m, const Vector& q, const Vector& x, const Vector& y) {
    Vector r = mat_vec(m, x);
    if (r.size() != q.size() || y.size() != q.size()) throw DimensionMismatch("feasibility_residual");
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = y[i] - (r[i] + q[i]);
    return r;
}

TerminationResidual termination_residual(const LcpProblem& p, const Vector& x, const Vector& y) {
    if (x.size() != p.size() || y.size() != p.size()) throw DimensionMismatch("termination_residual");
    return {norm_inf(feasibility_residual(p.m, p.q, x, y)), norm_inf(hadamard(x, y))};
}

}  // namespace rpfm
