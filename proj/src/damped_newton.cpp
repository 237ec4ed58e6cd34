#include <chrono>
#include <utility>

#include "rpfm/errors.hpp"
#include "rpfm/flow.hpp"

namespace rpfm {

SolveReport damped_newton_solve(const LcpProblem& p, const DampedNewtonConfig& cfg) {
    cfg.base.validate();
    p.validate();
    const auto started = std::chrono::steady_clock::now();

    SolveReport report;
    ComplementaryPair z = cfg.start ? *cfg.start : initial_point(p, cfg.base);
    if (z.x.size() != p.size() || z.y.size() != p.size()) throw DimensionMismatch("damped Newton start point");

    std::size_t newton_steps = 0;
    std::size_t trials = 0;
    try {
        for (;;) {
            const Vector r_q = feasibility_residual(p.m, p.q, z.x, z.y);
            const double resk = termination_residual(p, z.x, z.y).terr();
            if (resk < cfg.base.epsilon) {
                report.status = SolveStatus::Converged;
                break;
            }
            if (newton_steps >= cfg.base.maxit) {
                report.status = SolveStatus::MaxIterations;
                break;
            }
            const double mu = compute_mu(z.x, z.y, r_q);
            const double phi = merit(z.x, z.y, r_q);
            const NewtonStep step = newton_step(p.m, z.x, z.y, r_q, cfg.base.sigma_0 * mu);

            double alpha = 1.0;
            bool found = false;
            std::size_t backtracks = 0;
            for (; backtracks <= cfg.max_backtracks; ++backtracks) {
                ++trials;
                Vector x_trial = axpy(alpha, step.dx, z.x);
                Vector y_trial = axpy(alpha, step.dy, z.y);
                if (all_positive(x_trial) && all_positive(y_trial) &&
                    merit(x_trial, y_trial, feasibility_residual(p.m, p.q, x_trial, y_trial)) < phi) {
                    z.x = std::move(x_trial);
                    z.y = std::move(y_trial);
                    found = true;
                    break;
                }
                alpha *= 0.5;
            }
            ++newton_steps;
            report.backtracks += backtracks;
            report.trace.push_back({.k = newton_steps - 1,
                                    .itc = newton_steps,
                                    .mu = mu,
                                    .sigma = cfg.base.sigma_0,
                                    .delta_t = 0.0,
                                    .alpha = found ? alpha : 0.0,
                                    .rho = 0.0,
                                    .merit = phi,
                                    .resk = resk,
                                    .accepted = found,
                                    .backtracks = backtracks});
            if (!found) {
                report.status = SolveStatus::LineSearchStall;
                break;
            }
        }
    } catch (const SingularMatrix&) {
        report.status = SolveStatus::LinearSolveFailure;
    }

    const auto res = termination_residual(p, z.x, z.y);
    report.iterations = newton_steps;
    report.total_loops = trials;
    report.feas_inf = res.feas_inf;
    report.comp_inf = res.comp_inf;
    report.terr = res.terr();
    report.x = std::move(z.x);
    report.y = std::move(z.y);
    report.time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    return report;
}

}  // namespace rpfm
