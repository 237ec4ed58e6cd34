#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rpfm/linalg.hpp"
#include "rpfm/problem.hpp"
#include "rpfm/rpfmtr.hpp"

namespace rpfm {

// Observers for the quantities used in the global convergence analysis.
// They never influence the solver: attach TheoryMonitor::observer() to
// solve() and read the report afterwards.

struct TheoryMonitorConfig {
    std::optional<double> gamma;  // defaults to gamma_default() at the start point
    bool aux_enabled = false;
    std::optional<Vector> u0;
    std::optional<Vector> v0;
    double eta_a = 1e-6;  // acceptance threshold the merit decrease is checked against
};

struct CentralityViolation {
    std::size_t k;
    std::size_t i;
    double xy;
    double gamma_mu;
};

struct MonitorReport {
    double gamma = 0.0;
    std::vector<CentralityViolation> centrality_violations;

    std::size_t accepted = 0;
    std::size_t rejected = 0;
    double pred_identity_max_err = 0.0;
    double ared_closed_form_max_err = 0.0;
    double rq_contraction_max_err = 0.0;
    std::size_t merit_monotone_violations = 0;
    std::size_t mu_monotone_violations = 0;
    std::size_t dt_ratio_violations = 0;
    std::size_t positivity_violations = 0;
    std::size_t rejection_state_violations = 0;

    bool aux_active = false;
    std::string aux_note;  // why aux monitoring is off or was cut short
    double aux_feasibility_max = 0.0;
    double aux_gap_contraction_max_err = 0.0;
    bool ordering_ok = true;
};

/// min(μ₀ / (2·minᵢ xᵢ⁰yᵢ⁰), 1e-3); any value in (0, μ₀/minᵢ xᵢ⁰yᵢ⁰] is admissible.
double gamma_default(const Vector& x0, const Vector& y0, double mu0);

/// Indices with xᵢyᵢ < gamma·mu.
std::vector<std::size_t> centrality_check(const Vector& x, const Vector& y, double mu, double gamma);

/// u⁺ = u + alpha(x + dx − u), v⁺ = v + alpha(y + dy − v).
std::pair<Vector, Vector> aux_update(const Vector& u, const Vector& v, const Vector& x, const Vector& y,
                                     const NewtonStep& step, double alpha);

struct AuxInvariants {
    double feas_err = 0.0;  // ‖v − (M·u + q)‖∞
    bool ordering_ok = true;  // x ≥ u and y ≥ v with −1e-12 slack
};

AuxInvariants aux_invariants(const DenseMatrix& m, const Vector& q, const Vector& u, const Vector& v,
                             const Vector& x, const Vector& y);

struct IdentityErrors {
    double pred_err = 0.0;  // |Pred − alpha(2 − sigma)n·mu| / max(1, |Pred|)
    double ared_err = 0.0;  // |closed-form Ared − direct merit difference| / max(1, |direct|)
};

IdentityErrors identity_checks(const TrialView& t, const Vector& q);

class TheoryMonitor {
public:
    TheoryMonitor(const LcpProblem& p, TheoryMonitorConfig cfg);

    void observe(const TrialView& t);
    TrialObserver observer();

    const MonitorReport& report() const noexcept { return report_; }

private:
    struct Snapshot {
        Vector x, y, r_q, dx, dy;
        double mu, sigma;
    };

    void start(const TrialView& t);

    const LcpProblem* problem_;
    TheoryMonitorConfig cfg_;
    MonitorReport report_;
    bool started_ = false;
    std::size_t last_checked_itc_ = 0;
    std::optional<double> prev_next_dt_;
    std::optional<Snapshot> rejected_;
    Vector u_, v_;
    bool aux_feasibility_tracked_ = false;
};

/// Appends "# monitor key=value" lines (for the end of a trace CSV).
void write_monitor_report(std::ostream& out, const MonitorReport& r);

}  // namespace rpfm
