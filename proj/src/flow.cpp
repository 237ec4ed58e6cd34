#include "rpfm/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "rpfm/errors.hpp"

namespace rpfm {

namespace {

constexpr double kBoundaryGuard = 1e-12;
// An initial residual this small is rounding noise; compare absolutely.
constexpr double kZeroResidual = 1e-10;

bool above_guard(const Vector& v) {
    return std::all_of(v.begin(), v.end(), [](double e) { return e >= kBoundaryGuard; });
}

FlowSample make_sample(const LcpProblem& p, double t, Vector x, Vector y) {
    FlowSample s;
    s.t = t;
    s.norm_rq = norm_2(feasibility_residual(p.m, p.q, x, y));
    const Vector xy = hadamard(x, y);
    const auto [lo, hi] = std::minmax_element(xy.begin(), xy.end());
    s.min_xy = *lo;
    s.max_xy = *hi;
    s.x = std::move(x);
    s.y = std::move(y);
    return s;
}

}  // namespace

void FlowConfig::validate() const {
    if (!(sigma > 0.0 && sigma < 1.0)) throw InvalidArgument("FlowConfig: sigma must lie in (0, 1)");
    if (!(h > 0.0)) throw InvalidArgument("FlowConfig: h must be positive");
    if (!(t_end > 0.0)) throw InvalidArgument("FlowConfig: t_end must be positive");
}

double flow_mu(const Vector& x, const Vector& y, const FlowConfig& cfg) {
    if (cfg.mu_schedule == MuSchedule::Zero) return 0.0;
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < x.size(); ++i) m = std::min(m, x[i] * y[i]);
    return cfg.sigma * m;
}

FlowDerivative flow_rhs(const DenseMatrix& m, const Vector& q, const Vector& x, const Vector& y, double mu_t) {
    const Vector r_q = feasibility_residual(m, q, x, y);
    Vector r_c = hadamard(x, y);
    for (double& v : r_c) v -= mu_t;
    NewtonStep s = solve_newton_system(m, x, y, r_q, r_c);
    return {std::move(s.dx), std::move(s.dy)};
}

FlowTrajectory integrate(const LcpProblem& p, const Vector& x0, const Vector& y0, const FlowConfig& cfg) {
    cfg.validate();
    p.validate();
    if (x0.size() != p.size() || y0.size() != p.size()) throw DimensionMismatch("integrate: start point size");
    if (!all_positive(x0) || !all_positive(y0)) throw InvalidArgument("integrate: start point must be positive");

    const auto steps = static_cast<std::size_t>(std::max(1.0, std::round(cfg.t_end / cfg.h)));
    const double h = cfg.t_end / static_cast<double>(steps);

    FlowTrajectory traj;
    traj.samples.reserve(steps + 1);
    traj.samples.push_back(make_sample(p, 0.0, x0, y0));

    auto eval = [&](const Vector& x, const Vector& y) {
        return flow_rhs(p.m, p.q, x, y, flow_mu(x, y, cfg));
    };

    Vector x = x0;
    Vector y = y0;
    try {
        for (std::size_t i = 1; i <= steps; ++i) {
            const FlowDerivative k1 = eval(x, y);
            const Vector x2 = axpy(0.5 * h, k1.dx, x), y2 = axpy(0.5 * h, k1.dy, y);
            if (!above_guard(x2) || !above_guard(y2)) {
                traj.halt = FlowHalt::BoundaryApproach;
                break;
            }
            const FlowDerivative k2 = eval(x2, y2);
            const Vector x3 = axpy(0.5 * h, k2.dx, x), y3 = axpy(0.5 * h, k2.dy, y);
            if (!above_guard(x3) || !above_guard(y3)) {
                traj.halt = FlowHalt::BoundaryApproach;
                break;
            }
            const FlowDerivative k3 = eval(x3, y3);
            const Vector x4 = axpy(h, k3.dx, x), y4 = axpy(h, k3.dy, y);
            if (!above_guard(x4) || !above_guard(y4)) {
                traj.halt = FlowHalt::BoundaryApproach;
                break;
            }
            const FlowDerivative k4 = eval(x4, y4);

            for (std::size_t j = 0; j < x.size(); ++j) {
                x[j] += h / 6.0 * (k1.dx[j] + 2.0 * k2.dx[j] + 2.0 * k3.dx[j] + k4.dx[j]);
                y[j] += h / 6.0 * (k1.dy[j] + 2.0 * k2.dy[j] + 2.0 * k3.dy[j] + k4.dy[j]);
            }
            if (!above_guard(x) || !above_guard(y)) {
                traj.halt = FlowHalt::BoundaryApproach;
                break;
            }
            traj.samples.push_back(make_sample(p, (i == steps) ? cfg.t_end : h * static_cast<double>(i), x, y));
        }
    } catch (const SingularMatrix&) {
        traj.halt = FlowHalt::LinearSolveFailure;
    }
    return traj;
}

DecayReport check_decay(const FlowTrajectory& traj, double sigma, double tol) {
    DecayReport r;
    r.samples = traj.samples.size();
    if (traj.samples.empty()) return r;

    const FlowSample& s0 = traj.samples.front();
    const double rq0 = s0.norm_rq;
    r.residual_law_relative = rq0 > kZeroResidual;
    const Vector p0 = hadamard(s0.x, s0.y);

    for (const FlowSample& s : traj.samples) {
        const double expected = rq0 * std::exp(-s.t);
        const double dev = r.residual_law_relative ? std::abs(s.norm_rq - expected) / expected : s.norm_rq;
        r.residual_law_max_dev = std::max(r.residual_law_max_dev, dev);

        const double lo_f = std::exp(-s.t);
        const double hi_f = std::exp(-(1.0 - sigma) * s.t);
        bool violated = false;
        for (std::size_t i = 0; i < p0.size(); ++i) {
            const double prod = s.x[i] * s.y[i];
            const double lo = p0[i] * lo_f;
            const double hi = p0[i] * hi_f;
            double excess = 0.0;
            if (prod < lo) excess = (lo - prod) / lo;
            if (prod > hi) excess = (prod - hi) / hi;
            r.envelope_max_violation = std::max(r.envelope_max_violation, excess);
            violated = violated || excess > tol;
        }
        r.envelope_violations += violated;
    }
    return r;
}

void write_trajectory_csv(std::ostream& out, const FlowTrajectory& traj) {
    out << "t,norm_rq,min_xy,max_xy\n";
    const auto old = out.precision(17);
    for (const FlowSample& s : traj.samples) {
        out << s.t << ',' << s.norm_rq << ',' << s.min_xy << ',' << s.max_xy << '\n';
    }
    out.precision(old);
}

}  // namespace rpfm
