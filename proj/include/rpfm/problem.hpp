#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>

#include "rpfm/linalg.hpp"

namespace rpfm {

/// A complementarity pair (x, y) with x ≥ 0, y ≥ 0 and xᵢyᵢ = 0.
struct ComplementaryPair {
    Vector x;
    Vector y;
};

/// Find x ≥ 0, y ≥ 0 with y = M·x + q and xᵢ·yᵢ = 0.
struct LcpProblem {
    DenseMatrix m;
    Vector q;
    std::optional<ComplementaryPair> designed_solution;
    std::string name;
    std::uint64_t seed = 0;

    std::size_t size() const noexcept { return q.size(); }

    /// Throws DimensionMismatch / InvalidArgument when the instance is malformed.
    void validate() const;
};

/// Inputs of the NETLIB-style generation pipeline.
struct GeneratorSpec {
    DenseMatrix a;                  // LP constraint matrix, m_A × n_A
    double perturb_epsilon = 0.0;   // 0 keeps A sparse
    double zero_fix_epsilon = 1e-6;
    std::uint64_t seed = 0;
    std::string name;
};

/// Portable uniform [0,1) stream: raw std::mt19937_64 output, top 53 bits.
class UniformStream {
public:
    explicit UniformStream(std::uint64_t seed);
    double next();

private:
    std::mt19937_64 engine_;
};

DenseMatrix fix_zero_rows_cols(const DenseMatrix& a, double eps);

/// M = [[0, −Aᵀ], [A, 0]], skew-symmetric of order m_A + n_A.
DenseMatrix build_skew_embedding(const DenseMatrix& a);

/// x = (1,0,1,0,…), y = (0,1,0,1,…), truncated at n.
ComplementaryPair designed_solution(std::size_t n);

/// q = y − M·x.
Vector build_q(const DenseMatrix& m, const Vector& x, const Vector& y);

/// A + eps·R with R uniform [0,1) drawn row-major from UniformStream(seed).
DenseMatrix perturb_dense(const DenseMatrix& a, double eps, std::uint64_t seed);

/// Entries uniform in [−1, 1), drawn row-major from UniformStream(seed).
DenseMatrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed);

/// Full pipeline: zero-row fix, optional perturbation, embedding, designed solution, q.
LcpProblem generate_problem(const GeneratorSpec& spec);

struct TerminationResidual {
    double feas_inf = 0.0;  // ‖y − (M·x + q)‖∞
    double comp_inf = 0.0;  // ‖x∘y‖∞

    double terr() const noexcept { return feas_inf > comp_inf ? feas_inf : comp_inf; }
};

/// Residuals against the problem's own (unregularized) M.
TerminationResidual termination_residual(const LcpProblem& p, const Vector& x, const Vector& y);

/// y − (M·x + q) for an arbitrary matrix (the solver uses the regularized one).
Vector feasibility_residual(const DenseMatrix& m, const Vector& q, const Vector& x,
                            const Vector& y);

// Problem bundle: a directory holding M.mtx, q.mtx, optional xstar.mtx /
// ystar.mtx, and meta.txt with key=value lines (name, n, seed).
void save_bundle(const LcpProblem& p, const std::filesystem::path& dir);
LcpProblem load_bundle(const std::filesystem::path& dir);

}  // namespace rpfm
