#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "rpfm/linalg.hpp"
#include "rpfm/problem.hpp"

namespace rpfm {

/// Parameters of the residual-regularization path-following method with
/// trust-region time-step control. Defaults are the published settings.
struct SolverConfig {
    double eta_a = 1e-6;     // acceptance threshold on rho
    double eta_1 = 0.25;     // keep-step threshold
    double eta_2 = 0.75;     // enlarge-step threshold
    double epsilon = 1e-6;   // termination tolerance on Resk
    double delta_t0 = 1e-2;  // initial time step
    double big_m_fac = 10.0; // x0 = big_m_fac·e
    double upsilon = 1e-3;   // regularization M + upsilon·I while mu >= upsilon
    double sigma_0 = 0.5;
    std::size_t maxit = 600;
    double sigma_large = 0.5;
    double sigma_small = 0.1;
    double step_threshold = 0.1;  // ‖x⁺ − x‖∞ above this selects sigma_large

    /// Throws InvalidArgument when an ordering constraint is violated.
    void validate() const;
};

struct NewtonStep {
    Vector dx;
    Vector dy;
};

enum class SolveStatus { Converged, MaxIterations, LinearSolveFailure, LineSearchStall };

std::string_view to_string(SolveStatus s) noexcept;

/// One trial of the main loop (accepted or not).
struct IterationRecord {
    std::size_t k = 0;
    std::size_t itc = 0;
    double mu = 0.0;
    double sigma = 0.0;
    double delta_t = 0.0;  // step used for this trial
    double alpha = 0.0;
    double rho = 0.0;
    double merit = 0.0;  // phi at the base point, regularized matrix
    double resk = 0.0;
    bool accepted = false;
    std::size_t backtracks = 0;  // line-search baseline only
};

struct SolveReport {
    SolveStatus status = SolveStatus::MaxIterations;
    std::size_t iterations = 0;   // itc: successful-step counter
    std::size_t total_loops = 0;  // k: all trials including rejections
    double terr = 0.0;
    double feas_inf = 0.0;
    double comp_inf = 0.0;
    double time_ms = 0.0;
    std::size_t backtracks = 0;
    std::optional<std::size_t> deregularized_at;  // itc at which M_upsilon was reset to M
    Vector x;
    Vector y;
    std::vector<IterationRecord> trace;
};

/// Solver state between trials.
struct SolverState {
    Vector x;
    Vector y;
    double delta_t = 0.0;
    double sigma = 0.0;
    double mu = 0.0;
    Vector r_q;
    std::optional<NewtonStep> cached_step;
    bool regularized = true;
    std::size_t itc = 0;
    std::size_t k = 0;
    bool trial_success = true;
};

/// Everything an observer needs to re-derive the per-trial identities.
/// References are valid only for the duration of the callback.
struct TrialView {
    std::size_t k;
    std::size_t itc;
    const DenseMatrix& step_matrix;  // matrix used for r_q and the Newton step
    const Vector& x;
    const Vector& y;
    const Vector& r_q;
    const NewtonStep& step;
    double alpha;
    double sigma;
    double mu;
    double delta_t;
    double next_delta_t;
    double rho;
    const Vector& x_trial;
    const Vector& y_trial;
    bool accepted;
    bool deregularized;  // M_upsilon was reset to M after this accepted trial
};

using TrialObserver = std::function<void(const TrialView&)>;

/// x0 = big_m_fac·e; y0ᵢ = (M·x0 + q)ᵢ when positive, else 1e-3.
ComplementaryPair initial_point(const LcpProblem& p, const SolverConfig& cfg);

/// M + upsilon·I.
DenseMatrix regularize(const DenseMatrix& m, double upsilon);

/// mu = (xᵀy + ‖r_q‖₂) / (2n).
double compute_mu(const Vector& x, const Vector& y, const Vector& r_q);

/// phi = xᵀy + ‖r_q‖₂.
double merit(const Vector& x, const Vector& y, const Vector& r_q);

/// Solves −M·dx + dy = −r_q, Y·dx + X·dy = −r_c through the reduced system
/// (M + X⁻¹Y)·dx = r_q − X⁻¹r_c, dy = M·dx − r_q. Requires x > 0.
/// Throws SingularMatrix from the factorization.
NewtonStep solve_newton_system(const DenseMatrix& m, const Vector& x, const Vector& y,
                               const Vector& r_q, const Vector& r_c);

/// Continuation Newton step with r_c = x∘y − sigma_mu·e.
NewtonStep newton_step(const DenseMatrix& m_upsilon, const Vector& x, const Vector& y,
                       const Vector& r_q, double sigma_mu);

/// Pred = alpha·(‖r_q‖₂ − yᵀdx − xᵀdy).
double predicted_reduction(double alpha, const Vector& x, const Vector& y, const NewtonStep& step,
                           const Vector& r_q);

/// Ared/Pred in closed form: 1 − alpha·dxᵀdy / (‖r_q‖₂ − yᵀdx − xᵀdy).
/// Throws DegenerateRatio when the denominator is below 1e-300 in magnitude.
double rho(double alpha, const Vector& x, const Vector& y, const NewtonStep& step, const Vector& r_q);

double update_time_step(double delta_t, double rho, bool positive, const SolverConfig& cfg);

double update_sigma(double sigma, double step_inf, const SolverConfig& cfg);

/// Runs the method to completion. The observer, when given, sees every trial.
SolveReport solve(const LcpProblem& p, const SolverConfig& cfg = {}, const TrialObserver& observer = {});

}  // namespace rpfm
