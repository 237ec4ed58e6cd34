#include "rpfm/rpfmtr.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>
#include <utility>

#include "rpfm/errors.hpp"

namespace rpfm {

namespace {

constexpr double kInitialFloor = 1e-3;
constexpr double kDegenerateFloor = 1e-300;

// ‖r_q‖₂ − yᵀdx − xᵀdy, the per-unit-alpha predicted reduction.
double linear_decrease(const Vector& x, const Vector& y, const NewtonStep& step, const Vector& r_q) {
    return norm_2(r_q) - dot(y, step.dx) - dot(x, step.dy);
}

}  // namespace

void SolverConfig::validate() const {
    auto fail = [](const std::string& what) { throw InvalidArgument("SolverConfig: " + what); };
    if (!(0.0 < eta_a && eta_a < eta_1 && eta_1 < eta_2 && eta_2 < 1.0)) fail("need 0 < eta_a < eta_1 < eta_2 < 1");
    if (!(epsilon > 0.0)) fail("epsilon must be positive");
    if (!(delta_t0 > 0.0)) fail("delta_t0 must be positive");
    if (!(big_m_fac > 0.0)) fail("big_m_fac must be positive");
    if (!(0.0 < sigma_small && sigma_small <= sigma_large && sigma_large < 1.0)) {
        fail("need 0 < sigma_small <= sigma_large < 1");
    }
    if (!(sigma_0 > 0.0 && sigma_0 < 1.0)) fail("sigma_0 must lie in (0, 1)");
    if (maxit < 1) fail("maxit must be at least 1");
    if (!(upsilon >= 0.0)) fail("upsilon must be nonnegative");
    if (!(step_threshold >= 0.0)) fail("step_threshold must be nonnegative");
}

std::string_view to_string(SolveStatus s) noexcept {
    switch (s) {
        case SolveStatus::Converged: return "Converged";
        case SolveStatus::MaxIterations: return "MaxIterations";
        case SolveStatus::LinearSolveFailure: return "LinearSolveFailure";
        case SolveStatus::LineSearchStall: return "LineSearchStall";
    }
    return "Unknown";
}

ComplementaryPair initial_point(const LcpProblem& p, const SolverConfig& cfg) {
    const std::size_t n = p.size();
    Vector x(n, cfg.big_m_fac);
    Vector v = mat_vec(p.m, x);
    Vector y(n);
    for (std::size_t i = 0; i < n; ++i) {
        v[i] += p.q[i];
        y[i] = v[i] > 0.0 ? v[i] : kInitialFloor;
    }
    return {std::move(x), std::move(y)};
}

DenseMatrix regularize(const DenseMatrix& m, double upsilon) {
    if (!m.is_square()) throw DimensionMismatch("regularize: matrix must be square");
    DenseMatrix out = m;
    if (upsilon != 0.0) {
        for (std::size_t i = 0; i < out.rows(); ++i) out(i, i) += upsilon;
    }
    return out;
}

double merit(const Vector& x, const Vector& y, const Vector& r_q) {
    return dot(x, y) + norm_2(r_q);
}

double compute_mu(const Vector& x, const Vector& y, const Vector& r_q) {
    if (x.empty()) throw InvalidArgument("compute_mu: empty vectors");
    if (r_q.size() != x.size()) throw DimensionMismatch("compute_mu: r_q length");
    return merit(x, y, r_q) / (2.0 * static_cast<double>(x.size()));
}

NewtonStep solve_newton_system(const DenseMatrix& m, const Vector& x, const Vector& y, const Vector& r_q,
                               const Vector& r_c) {
    const std::size_t n = x.size();
    if (m.rows() != n || m.cols() != n || y.size() != n || r_q.size() != n || r_c.size() != n) {
        throw DimensionMismatch("newton system: inconsistent sizes");
    }
    DenseMatrix k = m;
    Vector rhs(n);
    for (std::size_t i = 0; i < n; ++i) {
        k(i, i) += y[i] / x[i];
        rhs[i] = r_q[i] - r_c[i] / x[i];
    }
    // Near the solution y/x spans many decades; scaling each row by a power of
    // two (exact in floating point) keeps pivoting meaningful.
    for (std::size_t i = 0; i < n; ++i) {
        const double big = norm_inf(k.row(i));
        if (!(big > 0.0) || !std::isfinite(big)) continue;
        const double s = std::ldexp(1.0, -std::ilogb(big));
        for (double& v : k.row(i)) v *= s;
        rhs[i] *= s;
    }
    NewtonStep step;
    step.dx = lu_solve(lu_factor(k), rhs);
    step.dy = sub(mat_vec(m, step.dx), r_q);
    return step;
}

NewtonStep newton_step(const DenseMatrix& m_upsilon, const Vector& x, const Vector& y, const Vector& r_q,
                       double sigma_mu) {
    if (!all_positive(x)) throw InvalidArgument("newton_step: x must be strictly positive");
    Vector r_c = hadamard(x, y);
    for (double& v : r_c) v -= sigma_mu;
    return solve_newton_system(m_upsilon, x, y, r_q, r_c);
}

double predicted_reduction(double alpha, const Vector& x, const Vector& y, const NewtonStep& step,
                           const Vector& r_q) {
    return alpha * linear_decrease(x, y, step, r_q);
}

double rho(double alpha, const Vector& x, const Vector& y, const NewtonStep& step, const Vector& r_q) {
    const double denom = linear_decrease(x, y, step, r_q);
    if (!(std::abs(denom) >= kDegenerateFloor)) {
        throw DegenerateRatio("predicted reduction vanished (" + std::to_string(denom) + ")");
    }
    return 1.0 - alpha * dot(step.dx, step.dy) / denom;
}

double update_time_step(double delta_t, double rho, bool positive, const SolverConfig& cfg) {
    if (positive && rho >= cfg.eta_2) return 2.0 * delta_t;
    if (positive && rho >= cfg.eta_1) return delta_t;
    return 0.5 * delta_t;
}

double update_sigma([[maybe_unused]] double sigma, double step_inf, const SolverConfig& cfg) {
    return step_inf > cfg.step_threshold ? cfg.sigma_large : cfg.sigma_small;
}

SolveReport solve(const LcpProblem& p, const SolverConfig& cfg, const TrialObserver& observer) {
    cfg.validate();
    p.validate();
    const auto started = std::chrono::steady_clock::now();

    SolveReport report;
    SolverState s;
    {
        auto start = initial_point(p, cfg);
        s.x = std::move(start.x);
        s.y = std::move(start.y);
    }
    s.delta_t = cfg.delta_t0;
    s.sigma = cfg.sigma_0;
    s.regularized = cfg.upsilon > 0.0;
    DenseMatrix m_step = regularize(p.m, cfg.upsilon);

    double phi = 0.0;
    double resk = 0.0;
    bool converged = false;

    try {
        while (s.itc < cfg.maxit) {
            if (s.trial_success) {
                ++s.itc;
                s.r_q = feasibility_residual(m_step, p.q, s.x, s.y);
                s.mu = compute_mu(s.x, s.y, s.r_q);
                phi = merit(s.x, s.y, s.r_q);
                resk = termination_residual(p, s.x, s.y).terr();
                if (resk < cfg.epsilon) {
                    converged = true;
                    break;
                }
                s.sigma = std::min(s.sigma, s.mu);
                s.cached_step = newton_step(m_step, s.x, s.y, s.r_q, s.sigma * s.mu);
            }
            const NewtonStep& step = *s.cached_step;

            const double alpha = s.delta_t / (1.0 + s.delta_t);
            Vector x_trial = axpy(alpha, step.dx, s.x);
            Vector y_trial = axpy(alpha, step.dy, s.y);
            const bool positive = all_positive(x_trial) && all_positive(y_trial);
            const double ratio = rho(alpha, s.x, s.y, step, s.r_q);
            const double next_dt = update_time_step(s.delta_t, ratio, positive, cfg);
            const bool accepted = ratio >= cfg.eta_a && positive;
            const bool deregularize = accepted && s.regularized && s.mu < cfg.upsilon;

            report.trace.push_back({.k = s.k,
                                    .itc = s.itc,
                                    .mu = s.mu,
                                    .sigma = s.sigma,
                                    .delta_t = s.delta_t,
                                    .alpha = alpha,
                                    .rho = ratio,
                                    .merit = phi,
                                    .resk = resk,
                                    .accepted = accepted});

            if (observer) {
                observer(TrialView{s.k, s.itc, m_step, s.x, s.y, s.r_q, step, alpha, s.sigma, s.mu, s.delta_t,
                                   next_dt, ratio, x_trial, y_trial, accepted, deregularize});
            }

            if (accepted) {
                const double step_inf = norm_inf(sub(x_trial, s.x));
                s.sigma = update_sigma(s.sigma, step_inf, cfg);
                if (deregularize) {
                    m_step = p.m;
                    s.regularized = false;
                    report.deregularized_at = s.itc;
                }
                s.x = std::move(x_trial);
                s.y = std::move(y_trial);
                s.trial_success = true;
            } else {
                s.trial_success = false;
            }
            s.delta_t = next_dt;
            ++s.k;
        }
        report.status = converged ? SolveStatus::Converged : SolveStatus::MaxIterations;
    } catch (const SingularMatrix&) {
        report.status = SolveStatus::LinearSolveFailure;
    }

    const auto res = termination_residual(p, s.x, s.y);
    report.iterations = s.itc;
    report.total_loops = s.k;
    report.feas_inf = res.feas_inf;
    report.comp_inf = res.comp_inf;
    report.terr = res.terr();
    report.x = std::move(s.x);
    report.y = std::move(s.y);
    report.time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    return report;
}

}  // namespace rpfm
