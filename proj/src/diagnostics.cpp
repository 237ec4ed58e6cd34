#include "rpfm/diagnostics.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <cmath>
#include <ostream>

#include "rpfm/errors.hpp"

namespace rpfm {

namespace {

constexpr double kOrderingSlack = 1e-12;
constexpr double kAuxFeasTol = 1e-10;
constexpr double kMeritSlack = 1e-12;  // relative rounding allowance on the direct merit difference

double aux_scale(const DenseMatrix& m, const Vector& q, const Vector& u, const Vector& v) {
    return std::max({1.0, norm_inf(m) * norm_inf(u), norm_inf(q), norm_inf(v)});
}

bool bit_equal(const Vector& a, const Vector& b) {
    return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](double l, double r) {
               return std::bit_cast<std::uint64_t>(l) == std::bit_cast<std::uint64_t>(r);
           });
}

}  // namespace

double gamma_default(const Vector& x0, const Vector& y0, double mu0) {
    if (!(mu0 > 0.0)) throw InvalidArgument("gamma_default: mu0 must be positive");
    double min_xy = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < x0.size(); ++i) min_xy = std::min(min_xy, x0[i] * y0[i]);
    if (!(min_xy > 0.0)) throw InvalidArgument("gamma_default: start point must be positive");
    return std::min(0.5 * mu0 / min_xy, 1e-3);
}

std::vector<std::size_t> centrality_check(const Vector& x, const Vector& y, double mu, double gamma) {
    std::vector<std::size_t> bad;
    const double bound = gamma * mu;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] * y[i] < bound) bad.push_back(i);
    }
    return bad;
}

std::pair<Vector, Vector> aux_update(const Vector& u, const Vector& v, const Vector& x, const Vector& y,
                                     const NewtonStep& step, double alpha) {
    const std::size_t n = u.size();
    if (v.size() != n || x.size() != n || y.size() != n || step.dx.size() != n || step.dy.size() != n) {
        throw DimensionMismatch("aux_update: inconsistent sizes");
    }
    Vector un(n), vn(n);
    for (std::size_t i = 0; i < n; ++i) {
        un[i] = u[i] + alpha * (x[i] + step.dx[i] - u[i]);
        vn[i] = v[i] + alpha * (y[i] + step.dy[i] - v[i]);
    }
    return {std::move(un), std::move(vn)};
}

AuxInvariants aux_invariants(const DenseMatrix& m, const Vector& q, const Vector& u, const Vector& v,
                             const Vector& x, const Vector& y) {
    AuxInvariants r;
    r.feas_err = norm_inf(feasibility_residual(m, q, u, v));
    for (std::size_t i = 0; i < u.size(); ++i) {
        r.ordering_ok = r.ordering_ok && x[i] - u[i] >= -kOrderingSlack && y[i] - v[i] >= -kOrderingSlack;
    }
    return r;
}

IdentityErrors identity_checks(const TrialView& t, const Vector& q) {
    const double n = static_cast<double>(t.x.size());
    const double pred = predicted_reduction(t.alpha, t.x, t.y, t.step, t.r_q);
    const double pred_identity = t.alpha * (2.0 - t.sigma) * n * t.mu;

    const double phi_before = merit(t.x, t.y, t.r_q);
    const double phi_after = merit(t.x_trial, t.y_trial, feasibility_residual(t.step_matrix, q, t.x_trial, t.y_trial));
    const double ared_direct = phi_before - phi_after;
    const double ared_closed = pred - t.alpha * t.alpha * dot(t.step.dx, t.step.dy);

    return {std::abs(pred - pred_identity) / std::max(1.0, std::abs(pred)),
            std::abs(ared_closed - ared_direct) / std::max(1.0, std::abs(ared_direct))};
}

TheoryMonitor::TheoryMonitor(const LcpProblem& p, TheoryMonitorConfig cfg) : problem_(&p), cfg_(std::move(cfg)) {
    if (cfg_.gamma && !(*cfg_.gamma > 0.0 && *cfg_.gamma < 1.0)) {
        throw InvalidArgument("TheoryMonitor: gamma must lie in (0, 1)");
    }
}

TrialObserver TheoryMonitor::observer() {
    return [this](const TrialView& t) { observe(t); };
}

void TheoryMonitor::start(const TrialView& t) {
    started_ = true;
    report_.gamma = cfg_.gamma ? *cfg_.gamma : gamma_default(t.x, t.y, t.mu);

    if (!cfg_.aux_enabled) {
        report_.aux_note = "disabled";
        return;
    }
    if (!cfg_.u0 || !cfg_.v0) {
        report_.aux_note = "disabled: no (u0, v0) seeds supplied";
        return;
    }
    if (cfg_.u0->size() != t.x.size() || cfg_.v0->size() != t.x.size()) {
        report_.aux_note = "disabled: seed length differs from n";
        return;
    }
    const AuxInvariants inv = aux_invariants(t.step_matrix, problem_->q, *cfg_.u0, *cfg_.v0, t.x, t.y);
    const double scale = aux_scale(t.step_matrix, problem_->q, *cfg_.u0, *cfg_.v0);
    if (inv.feas_err > kAuxFeasTol * scale) {
        report_.aux_note = "disabled: seeds are not feasible for the step matrix";
        return;
    }
    if (!inv.ordering_ok) {
        report_.aux_note = "disabled: seeds violate u0 <= x0, v0 <= y0";
        return;
    }
    u_ = *cfg_.u0;
    v_ = *cfg_.v0;
    report_.aux_active = true;
    report_.aux_feasibility_max = inv.feas_err / scale;
    aux_feasibility_tracked_ = true;
}

void TheoryMonitor::observe(const TrialView& t) {
    if (!started_) start(t);
    const std::size_t n = t.x.size();

    // Rejected trials must leave everything but the time step untouched.
    if (rejected_) {
        const Snapshot& s = *rejected_;
        const bool same = bit_equal(s.x, t.x) && bit_equal(s.y, t.y) && bit_equal(s.r_q, t.r_q) &&
                          bit_equal(s.dx, t.step.dx) && bit_equal(s.dy, t.step.dy) &&
                          std::bit_cast<std::uint64_t>(s.mu) == std::bit_cast<std::uint64_t>(t.mu) &&
                          std::bit_cast<std::uint64_t>(s.sigma) == std::bit_cast<std::uint64_t>(t.sigma);
        report_.rejection_state_violations += !same;
        rejected_.reset();
    }

    if (prev_next_dt_ && *prev_next_dt_ != t.delta_t) ++report_.dt_ratio_violations;
    const double ratio = t.next_delta_t / t.delta_t;
    if (ratio != 2.0 && ratio != 1.0 && ratio != 0.5) ++report_.dt_ratio_violations;
    prev_next_dt_ = t.next_delta_t;

    if (t.itc != last_checked_itc_) {
        last_checked_itc_ = t.itc;
        for (std::size_t i : centrality_check(t.x, t.y, t.mu, report_.gamma)) {
            report_.centrality_violations.push_back({t.k, i, t.x[i] * t.y[i], report_.gamma * t.mu});
        }
        if (!all_positive(t.x) || !all_positive(t.y)) ++report_.positivity_violations;
    }

    if (!t.accepted) {
        ++report_.rejected;
        rejected_ = Snapshot{t.x, t.y, t.r_q, t.step.dx, t.step.dy, t.mu, t.sigma};
        return;
    }
    ++report_.accepted;

    if (!all_positive(t.x_trial) || !all_positive(t.y_trial)) ++report_.positivity_violations;

    const IdentityErrors ie = identity_checks(t, problem_->q);
    report_.pred_identity_max_err = std::max(report_.pred_identity_max_err, ie.pred_err);
    report_.ared_closed_form_max_err = std::max(report_.ared_closed_form_max_err, ie.ared_err);

    // Residual contraction and monotonicity are measured with the step's own matrix.
    const Vector rq_next = feasibility_residual(t.step_matrix, problem_->q, t.x_trial, t.y_trial);
    double contraction = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        contraction = std::max(contraction, std::abs(rq_next[i] - (1.0 - t.alpha) * t.r_q[i]));
    }
    // Scale by the operands of y − (M·x + q): the residual itself may be far
    // below their rounding level late in the run.
    const double rq_scale = std::max({1.0, norm_inf(t.y_trial), norm_inf(t.step_matrix) * norm_inf(t.x_trial),
                                      norm_inf(problem_->q)});
    report_.rq_contraction_max_err = std::max(report_.rq_contraction_max_err, contraction / rq_scale);

    const double phi_before = merit(t.x, t.y, t.r_q);
    const double phi_after = merit(t.x_trial, t.y_trial, rq_next);
    const double pred = predicted_reduction(t.alpha, t.x, t.y, t.step, t.r_q);
    if (phi_after > phi_before - cfg_.eta_a * pred + kMeritSlack * phi_before) ++report_.merit_monotone_violations;
    if (compute_mu(t.x_trial, t.y_trial, rq_next) > t.mu) ++report_.mu_monotone_violations;

    if (report_.aux_active) {
        auto [un, vn] = aux_update(u_, v_, t.x, t.y, t.step, t.alpha);
        double gap_err = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double ex = (1.0 - t.alpha) * (t.x[i] - u_[i]);
            const double ey = (1.0 - t.alpha) * (t.y[i] - v_[i]);
            gap_err = std::max(gap_err, std::abs((t.x_trial[i] - un[i]) - ex) / std::max(1.0, std::abs(ex)));
            gap_err = std::max(gap_err, std::abs((t.y_trial[i] - vn[i]) - ey) / std::max(1.0, std::abs(ey)));
        }
        report_.aux_gap_contraction_max_err = std::max(report_.aux_gap_contraction_max_err, gap_err);

        const AuxInvariants inv = aux_invariants(t.step_matrix, problem_->q, un, vn, t.x_trial, t.y_trial);
        report_.ordering_ok = report_.ordering_ok && inv.ordering_ok;
        if (aux_feasibility_tracked_) {
            const double scale = aux_scale(t.step_matrix, problem_->q, un, vn);
            report_.aux_feasibility_max = std::max(report_.aux_feasibility_max, inv.feas_err / scale);
            if (t.deregularized) {
                aux_feasibility_tracked_ = false;
                report_.aux_note = "feasibility tracking stopped at itc " + std::to_string(t.itc) +
                                   ": step matrix changed from M + upsilon*I to M";
            }
        }
        u_ = std::move(un);
        v_ = std::move(vn);
    }
}

void write_monitor_report(std::ostream& out, const MonitorReport& r) {
    const auto old = out.precision(6);
    out << std::scientific;
    out << "# monitor gamma=" << r.gamma << '\n';
    out << "# monitor accepted=" << r.accepted << " rejected=" << r.rejected << '\n';
    out << "# monitor centrality_violations=" << r.centrality_violations.size() << '\n';
    for (const auto& v : r.centrality_violations) {
        out << "# monitor centrality k=" << v.k << " i=" << v.i << " xy=" << v.xy << " gamma_mu=" << v.gamma_mu
            << '\n';
    }
    out << "# monitor pred_identity_max_err=" << r.pred_identity_max_err << '\n';
    out << "# monitor ared_closed_form_max_err=" << r.ared_closed_form_max_err << '\n';
    out << "# monitor rq_contraction_max_err=" << r.rq_contraction_max_err << '\n';
    out << "# monitor merit_monotone_violations=" << r.merit_monotone_violations << '\n';
    out << "# monitor mu_monotone_violations=" << r.mu_monotone_violations << '\n';
    out << "# monitor dt_ratio_violations=" << r.dt_ratio_violations << '\n';
    out << "# monitor positivity_violations=" << r.positivity_violations << '\n';
    out << "# monitor rejection_state_violations=" << r.rejection_state_violations << '\n';
    out << "# monitor aux_active=" << (r.aux_active ? "true" : "false") << '\n';
    if (!r.aux_note.empty()) out << "# monitor aux_note=" << r.aux_note << '\n';
    if (r.aux_active) {
        out << "# monitor aux_feasibility_max=" << r.aux_feasibility_max << '\n';
        out << "# monitor aux_gap_contraction_max_err=" << r.aux_gap_contraction_max_err << '\n';
        out << "# monitor ordering_ok=" << (r.ordering_ok ? "true" : "false") << '\n';
    }
    out << std::defaultfloat;
    out.precision(old);
}

}  // namespace rpfm
