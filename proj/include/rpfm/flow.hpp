#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

#include "rpfm/linalg.hpp"
#include "rpfm/problem.hpp"
#include "rpfm/rpfmtr.hpp"

namespace rpfm {

// Continuous Newton flow with nonnegativity:
//   −M·ẋ + ẏ = −r_q(x, y),   Y·ẋ + X·ẏ = −(x∘y − mu(t)·e).
// Along exact trajectories r_q decays like e^{−t} and, when
// 0 ≤ mu(t) ≤ sigma·minᵢ xᵢyᵢ, each product xᵢyᵢ stays inside
// [xᵢ⁰yᵢ⁰e^{−t}, xᵢ⁰yᵢ⁰e^{−(1−sigma)t}].

enum class MuSchedule { Proportional, Zero };

struct FlowConfig {
    double sigma = 0.5;
    double h = 1e-4;
    double t_end = 1.0;
    MuSchedule mu_schedule = MuSchedule::Proportional;

    void validate() const;
};

struct FlowSample {
    double t = 0.0;
    Vector x;
    Vector y;
    double norm_rq = 0.0;
    double min_xy = 0.0;
    double max_xy = 0.0;
};

enum class FlowHalt { Completed, BoundaryApproach, LinearSolveFailure };

struct FlowTrajectory {
    std::vector<FlowSample> samples;
    FlowHalt halt = FlowHalt::Completed;
};

struct FlowDerivative {
    Vector dx;
    Vector dy;
};

/// mu(t) for the configured schedule at (x, y).
double flow_mu(const Vector& x, const Vector& y, const FlowConfig& cfg);

/// Solves [−M, I; Y, X]·(dx, dy) = −(r_q, x∘y − mu_t·e). Throws SingularMatrix.
FlowDerivative flow_rhs(const DenseMatrix& m, const Vector& q, const Vector& x, const Vector& y, double mu_t);

/// Fixed-step classical Runge–Kutta (RK4); one sample per step, starting at t = 0.
/// Stops early (keeping the samples so far) when any component falls below 1e-12
/// or the Jacobian becomes singular.
FlowTrajectory integrate(const LcpProblem& p, const Vector& x0, const Vector& y0, const FlowConfig& cfg);

struct DecayReport {
    double residual_law_max_dev = 0.0;  // max |‖r_q(t)‖ − ‖r_q(0)‖e^{−t}| / ‖r_q(0)‖e^{−t}
    bool residual_law_relative = true;  // false when ‖r_q(0)‖ ≤ 1e-10 and deviation is absolute
    double envelope_max_violation = 0.0;  // worst relative excursion outside the bounds
    std::size_t envelope_violations = 0;
    std::size_t samples = 0;

    bool passes(double tol) const noexcept {
        return residual_law_max_dev <= tol && envelope_violations == 0;
    }
};

/// Compares the trajectory with the analytic residual law and the product
/// envelope. Products outside the envelope by more than `tol` relative are
/// counted as violations.
DecayReport check_decay(const FlowTrajectory& traj, double sigma, double tol = 1e-3);

/// CSV with columns t,norm_rq,min_xy,max_xy.
void write_trajectory_csv(std::ostream& out, const FlowTrajectory& traj);

/// Line-search damped Newton baseline: same Newton direction with fixed
/// centering sigma_0, alpha tried from 1 and halved until the merit decreases
/// and the point stays strictly positive. Uses the unregularized M.
struct DampedNewtonConfig {
    SolverConfig base;  // epsilon, sigma_0, maxit and big_m_fac are used
    std::size_t max_backtracks = 50;
    std::optional<ComplementaryPair> start;  // defaults to initial_point()
};

SolveReport damped_newton_solve(const LcpProblem& p, const DampedNewtonConfig& cfg = {});

}  // namespace rpfm
