#include "rpfm/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "rpfm/diagnostics.hpp"
#include "rpfm/errors.hpp"
#include "rpfm/flow.hpp"
#include "rpfm/matrix_market.hpp"
#include "rpfm/problem.hpp"
#include "rpfm/report.hpp"
#include "rpfm/rpfmtr.hpp"

namespace rpfm::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

/// Thrown for bad flags, missing files and malformed inputs (exit code 3).
class UsageError : public Error {
public:
    using Error::Error;
};

struct SolverFlags {
    std::optional<std::size_t> maxit;
    std::optional<double> eps;
    std::optional<double> upsilon;
    std::optional<double> sigma0;
    std::optional<double> dt0;

    void attach(CLI::App& app) {
        app.add_option("--maxit", maxit, "Iteration budget (successful steps)");
        app.add_option("--eps", eps, "Termination tolerance on max(|x.y|, |y-(Mx+q)|)");
        app.add_option("--upsilon", upsilon, "Regularization M + upsilon*I while mu >= upsilon");
        app.add_option("--sigma0", sigma0, "Initial centering parameter");
        app.add_option("--dt0", dt0, "Initial time step");
    }

    void apply(SolverConfig& cfg) const {
        if (maxit) cfg.maxit = *maxit;
        if (eps) cfg.epsilon = *eps;
        if (upsilon) cfg.upsilon = *upsilon;
        if (sigma0) cfg.sigma_0 = *sigma0;
        if (dt0) cfg.delta_t0 = *dt0;
    }
};

void apply_json_config(const json& j, SolverConfig& cfg) {
    if (!j.is_object()) throw UsageError("manifest 'config' must be an object");
    for (const auto& [key, value] : j.items()) {
        if (key == "maxit") {
            cfg.maxit = value.get<std::size_t>();
        } else if (key == "eps") {
            cfg.epsilon = value.get<double>();
        } else if (key == "upsilon") {
            cfg.upsilon = value.get<double>();
        } else if (key == "sigma0") {
            cfg.sigma_0 = value.get<double>();
        } else if (key == "dt0") {
            cfg.delta_t0 = value.get<double>();
        } else {
            throw UsageError("unknown manifest config key '" + key + "'");
        }
    }
}

bool known_solver(const std::string& s) { return s == "rpfmtr" || s == "damped_newton"; }

SolveReport run_solver(const std::string& solver, const LcpProblem& p, const SolverConfig& cfg,
                       const TrialObserver& observer = {}) {
    if (solver == "rpfmtr") return solve(p, cfg, observer);
    return damped_newton_solve(p, DampedNewtonConfig{cfg, 50, std::nullopt});
}

std::ofstream open_out(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream f(path);
    if (!f) throw IoError("cannot write '" + path.string() + "'");
    return f;
}

// ---------------------------------------------------------------- generate

struct GenerateArgs {
    std::string a_path;
    std::vector<std::size_t> synthetic;
    std::string out;
    double dense_eps = 0.0;
    double zero_eps = 1e-6;
    std::uint64_t seed = 0;
    std::string name;
};

LcpProblem build_problem(const GenerateArgs& g) {
    GeneratorSpec spec;
    if (!g.a_path.empty()) {
        spec.a = load_matrix_market(g.a_path);
        spec.name = fs::path(g.a_path).stem().string();
    } else {
        // The synthetic matrix and the perturbation draw from different streams.
        spec.a = random_matrix(g.synthetic[0], g.synthetic[1], g.seed + 1);
        spec.name = "synthetic_" + std::to_string(g.synthetic[0]) + "x" + std::to_string(g.synthetic[1]);
    }
    if (g.dense_eps > 0.0) spec.name += "_dense";
    if (!g.name.empty()) spec.name = g.name;
    spec.perturb_epsilon = g.dense_eps;
    spec.zero_fix_epsilon = g.zero_eps;
    spec.seed = g.seed;
    return generate_problem(spec);
}

int cmd_generate(const GenerateArgs& g, std::ostream& out) {
    if (g.a_path.empty() == g.synthetic.empty()) throw UsageError("generate: give exactly one of --a or --synthetic");
    if (!g.synthetic.empty() && (g.synthetic[0] == 0 || g.synthetic[1] == 0)) {
        throw UsageError("generate: --synthetic sizes must be positive");
    }
    if (g.dense_eps < 0.0) throw UsageError("generate: --dense-eps must be nonnegative");
    const LcpProblem p = build_problem(g);
    save_bundle(p, g.out);
    out << "wrote " << g.out << " name=" << p.name << " n=" << p.size() << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------- solve

struct SolveArgs {
    std::string bundle;
    std::string solver = "rpfmtr";
    SolverFlags flags;
    std::string trace;
    std::string record;
    std::optional<double> monitor_gamma;
    bool monitor = false;
    std::string aux_u0;
    std::string aux_v0;
};

int cmd_solve(const SolveArgs& a, std::ostream& out) {
    if (!known_solver(a.solver)) throw UsageError("unknown solver '" + a.solver + "'");
    if (a.aux_u0.empty() != a.aux_v0.empty()) throw UsageError("--aux-u0 and --aux-v0 go together");

    const LcpProblem p = load_bundle(a.bundle);
    SolverConfig cfg;
    a.flags.apply(cfg);
    try {
        cfg.validate();
    } catch (const InvalidArgument& e) {
        throw UsageError(e.what());
    }

    const bool monitoring = a.solver == "rpfmtr" && (a.monitor || a.monitor_gamma || !a.aux_u0.empty());
    std::optional<TheoryMonitor> monitor;
    if (monitoring) {
        TheoryMonitorConfig mc;
        mc.gamma = a.monitor_gamma;
        mc.eta_a = cfg.eta_a;
        if (!a.aux_u0.empty()) {
            mc.aux_enabled = true;
            mc.u0 = load_vector(a.aux_u0);
            mc.v0 = load_vector(a.aux_v0);
        }
        monitor.emplace(p, std::move(mc));
    }

    const SolveReport r = run_solver(a.solver, p, cfg, monitor ? monitor->observer() : TrialObserver{});
    const BenchRecord rec = make_bench_record(p.name, p.size(), a.solver, r);

    write_bench_csv(out, {rec});
    if (a.solver == "damped_newton") out << "# backtracks=" << r.backtracks << '\n';
    if (monitor) write_monitor_report(out, monitor->report());

    if (!a.trace.empty()) {
        auto f = open_out(a.trace);
        write_trace_csv(f, r.trace);
        if (monitor) write_monitor_report(f, monitor->report());
    }
    if (!a.record.empty()) {
        auto f = open_out(a.record);
        write_bench_csv(f, {rec});
    }
    return r.status == SolveStatus::Converged ? kExitOk : kExitNumeric;
}

// ---------------------------------------------------------------- bench

struct BenchEntry {
    std::string label;
    std::function<LcpProblem()> load;
};

struct Manifest {
    SolverConfig config;
    std::vector<BenchEntry> problems;
    std::vector<std::string> solvers{"rpfmtr"};
    std::string csv;
    std::string markdown;
};

Manifest read_manifest(const fs::path& path, const SolverFlags& flags) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open manifest '" + path.string() + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw UsageError("manifest '" + path.string() + "': " + e.what());
    }
    const fs::path base = path.parent_path();
    auto resolve = [&](const std::string& s) { return fs::path(s).is_absolute() ? fs::path(s) : base / s; };

    Manifest m;
    try {
        if (j.contains("config")) apply_json_config(j["config"], m.config);
        flags.apply(m.config);
        const std::uint64_t seed = j.value("seed", std::uint64_t{0});

        if (j.contains("solvers")) m.solvers = j["solvers"].get<std::vector<std::string>>();
        for (const auto& s : m.solvers) {
            if (!known_solver(s)) throw UsageError("unknown solver '" + s + "' in manifest");
        }

        for (const auto& e : j.value("problems", json::array())) {
            if (e.is_string()) {
                const fs::path dir = resolve(e.get<std::string>());
                m.problems.push_back({dir.filename().string(), [dir] { return load_bundle(dir); }});
                continue;
            }
            GenerateArgs g;
            g.seed = e.value("seed", seed);
            g.dense_eps = e.value("dense_eps", 0.0);
            g.zero_eps = e.value("zero_eps", 1e-6);
            g.name = e.value("name", std::string{});
            std::string label;
            if (e.contains("bundle")) {
                const fs::path dir = resolve(e["bundle"].get<std::string>());
                m.problems.push_back({g.name.empty() ? dir.filename().string() : g.name,
                                      [dir] { return load_bundle(dir); }});
                continue;
            }
            if (e.contains("a")) {
                g.a_path = resolve(e["a"].get<std::string>()).string();
                label = fs::path(g.a_path).stem().string();
            } else if (e.contains("synthetic")) {
                g.synthetic = e["synthetic"].get<std::vector<std::size_t>>();
                if (g.synthetic.size() != 2) throw UsageError("'synthetic' needs [rows, cols]");
                label = "synthetic";
            } else {
                throw UsageError("manifest problem entry needs 'bundle', 'a' or 'synthetic'");
            }
            if (!g.name.empty()) label = g.name;
            m.problems.push_back({label, [g] { return build_problem(g); }});
        }
        if (j.contains("output")) {
            m.csv = j["output"].value("csv", std::string{});
            m.markdown = j["output"].value("markdown", std::string{});
            if (!m.csv.empty()) m.csv = resolve(m.csv).string();
            if (!m.markdown.empty()) m.markdown = resolve(m.markdown).string();
        }
    } catch (const json::exception& e) {
        throw UsageError("manifest '" + path.string() + "': " + e.what());
    }
    m.config.validate();
    return m;
}

std::vector<BenchRecord> run_bench(const Manifest& m, std::size_t jobs) {
    struct Task {
        std::size_t problem;
        std::string solver;
    };
    std::vector<Task> tasks;
    for (std::size_t i = 0; i < m.problems.size(); ++i)
        for (const auto& s : m.solvers) tasks.push_back({i, s});

    std::vector<BenchRecord> rows(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t t = next++; t < tasks.size(); t = next++) {
            const BenchEntry& entry = m.problems[tasks[t].problem];
            try {
                const LcpProblem p = entry.load();
                const std::string name = p.name.empty() ? entry.label : p.name;
                rows[t] = make_bench_record(name, p.size(), tasks[t].solver, run_solver(tasks[t].solver, p, m.config));
            } catch (const std::exception& e) {
                rows[t] = BenchRecord{entry.label, 0, tasks[t].solver, 0, 0, 0.0,
                                      std::numeric_limits<double>::quiet_NaN(), std::string("Failed: ") + e.what()};
            }
        }
    };

    const std::size_t workers = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(1, tasks.size()));
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    return rows;
}

struct BenchArgs {
    std::string manifest;
    std::size_t jobs = 1;
    std::string csv;
    std::string markdown;
    SolverFlags flags;
};

int cmd_bench(const BenchArgs& a, std::ostream& out) {
    if (a.jobs == 0) throw UsageError("--jobs must be at least 1");
    const Manifest m = read_manifest(a.manifest, a.flags);
    const std::vector<BenchRecord> rows = run_bench(m, a.jobs);

    const std::string csv = a.csv.empty() ? m.csv : a.csv;
    const std::string md = a.markdown.empty() ? m.markdown : a.markdown;
    if (!csv.empty()) {
        auto f = open_out(csv);
        write_bench_csv(f, rows);
    }
    if (!md.empty()) {
        auto f = open_out(md);
        write_bench_markdown(f, rows);
    }
    write_bench_markdown(out, rows);
    const bool all_ok = std::all_of(rows.begin(), rows.end(), [](const BenchRecord& r) { return r.converged(); });
    return all_ok ? kExitOk : kExitNumeric;
}

// ---------------------------------------------------------------- flow-check

struct FlowArgs {
    std::string bundle;
    double sigma = 0.5;
    double h = 1e-4;
    double t_end = 1.0;
    std::string schedule = "proportional";
    double tol = 1e-3;
    std::string csv;
};

int cmd_flow_check(const FlowArgs& a, std::ostream& out) {
    FlowConfig cfg;
    cfg.sigma = a.sigma;
    cfg.h = a.h;
    cfg.t_end = a.t_end;
    if (a.schedule == "proportional") {
        cfg.mu_schedule = MuSchedule::Proportional;
    } else if (a.schedule == "zero") {
        cfg.mu_schedule = MuSchedule::Zero;
    } else {
        throw UsageError("--schedule must be 'proportional' or 'zero'");
    }
    try {
        cfg.validate();
    } catch (const InvalidArgument& e) {
        throw UsageError(e.what());
    }

    const LcpProblem p = load_bundle(a.bundle);
    const ComplementaryPair z0 = initial_point(p, SolverConfig{});
    const FlowTrajectory traj = integrate(p, z0.x, z0.y, cfg);
    const DecayReport d = check_decay(traj, cfg.sigma, a.tol);

    if (!a.csv.empty()) {
        auto f = open_out(a.csv);
        write_trajectory_csv(f, traj);
    }

    const bool completed = traj.halt == FlowHalt::Completed;
    const bool ok = completed && d.passes(a.tol);
    out << "samples=" << d.samples << " halt="
        << (traj.halt == FlowHalt::Completed          ? "completed"
            : traj.halt == FlowHalt::BoundaryApproach ? "boundary_approach"
                                                       : "linear_solve_failure")
        << '\n';
    out << "residual_law_max_dev=" << d.residual_law_max_dev << (d.residual_law_relative ? " (relative)" : " (absolute)")
        << '\n';
    out << "envelope_max_violation=" << d.envelope_max_violation << " envelope_violations=" << d.envelope_violations
        << '\n';
    out << (ok ? "PASS" : "FAIL") << " tol=" << a.tol << '\n';
    return ok ? kExitOk : kExitNumeric;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Path-following LCP solver with trust-region time stepping"};
    app.name("rpfm");
    app.require_subcommand(1);

    GenerateArgs gen;
    auto* generate = app.add_subcommand("generate", "Build a skew-embedded LCP bundle from an LP matrix");
    generate->add_option("--a", gen.a_path, "LP constraint matrix (Matrix Market)")->check(CLI::ExistingFile);
    generate->add_option("--synthetic", gen.synthetic, "Random A with ROWS COLS")->expected(2);
    generate->add_option("--out", gen.out, "Output bundle directory")->required();
    generate->add_option("--dense-eps", gen.dense_eps, "Uniform [0,1) perturbation scale for A");
    generate->add_option("--zero-eps", gen.zero_eps, "Value added to all-zero rows/columns of A");
    generate->add_option("--seed", gen.seed, "Generator seed");
    generate->add_option("--name", gen.name, "Problem name stored in meta.txt");

    SolveArgs sol;
    auto* solve_cmd = app.add_subcommand("solve", "Solve a problem bundle");
    solve_cmd->add_option("bundle", sol.bundle, "Problem bundle directory")->required();
    solve_cmd->add_option("--solver", sol.solver, "rpfmtr | damped_newton");
    sol.flags.attach(*solve_cmd);
    solve_cmd->add_option("--trace", sol.trace, "Write the per-trial trace CSV here");
    solve_cmd->add_option("--record", sol.record, "Write the bench CSV row here");
    solve_cmd->add_flag("--monitor", sol.monitor, "Attach the theory monitors");
    solve_cmd->add_option("--monitor-gamma", sol.monitor_gamma, "Centrality constant gamma for the monitor");
    solve_cmd->add_option("--aux-u0", sol.aux_u0, "Feasible seed u0 (Matrix Market vector)");
    solve_cmd->add_option("--aux-v0", sol.aux_v0, "Feasible seed v0 (Matrix Market vector)");

    BenchArgs bench;
    auto* bench_cmd = app.add_subcommand("bench", "Run a JSON manifest of problems and solvers");
    bench_cmd->add_option("manifest", bench.manifest, "Manifest file")->required();
    bench_cmd->add_option("--jobs", bench.jobs, "Concurrent solves");
    bench_cmd->add_option("--csv", bench.csv, "Bench CSV output");
    bench_cmd->add_option("--markdown", bench.markdown, "Markdown table output");
    bench.flags.attach(*bench_cmd);

    FlowArgs flow;
    auto* flow_cmd = app.add_subcommand("flow-check", "Integrate the continuous Newton flow and check decay laws");
    flow_cmd->add_option("bundle", flow.bundle, "Problem bundle directory")->required();
    flow_cmd->add_option("--sigma", flow.sigma, "Centering fraction for mu(t)");
    flow_cmd->set_help_flag("--help", "Print this help message and exit");
    flow_cmd->add_option("--h", flow.h, "RK4 step size");
    flow_cmd->add_option("--t-end", flow.t_end, "Final time");
    flow_cmd->add_option("--schedule", flow.schedule, "proportional | zero");
    flow_cmd->add_option("--tol", flow.tol, "Relative tolerance for law and envelope");
    flow_cmd->add_option("--csv", flow.csv, "Write trajectory CSV here");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(std::move(reversed));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*generate) return cmd_generate(gen, out);
        if (*solve_cmd) return cmd_solve(sol, out);
        if (*bench_cmd) return cmd_bench(bench, out);
        if (*flow_cmd) return cmd_flow_check(flow, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const UnsupportedFormat& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DimensionMismatch& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitNumeric;
    }
    return kExitUsage;
}

}  // namespace rpfm::cli
