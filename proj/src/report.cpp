#include "rpfm/report.hpp"

#include <cstdio>
#include <ostream>

namespace rpfm {

namespace {

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

}  // namespace

BenchRecord make_bench_record(const std::string& name, std::size_t n, const std::string& solver,
                              const SolveReport& r) {
    return {name, n, solver, r.iterations, r.total_loops, r.time_ms, r.terr, std::string(to_string(r.status))};
}

void write_trace_csv(std::ostream& out, const std::vector<IterationRecord>& trace) {
    out << kTraceCsvHeader << '\n';
    for (const auto& t : trace) {
        out << t.k << ',' << t.itc << ',' << fmt("%.17g", t.mu) << ',' << fmt("%.17g", t.sigma) << ','
            << fmt("%.17g", t.delta_t) << ',' << fmt("%.17g", t.rho) << ',' << fmt("%.17g", t.merit) << ','
            << fmt("%.17g", t.resk) << ',' << (t.accepted ? 1 : 0) << '\n';
    }
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRecord>& rows) {
    out << kBenchCsvHeader << '\n';
    for (const auto& r : rows) {
        out << csv_field(r.name) << ',' << r.n << ',' << r.solver << ',' << r.steps << ',' << r.loops << ','
            << fmt("%.3f", r.time_ms) << ',' << fmt("%.6e", r.terr) << ',' << csv_field(r.status) << '\n';
    }
}

void write_bench_markdown(std::ostream& out, const std::vector<BenchRecord>& rows) {
    out << "| Problem (n) | Solver | steps (time s) | Terr | Status |\n";
    out << "|---|---|---|---|---|\n";
    for (const auto& r : rows) {
        out << "| " << r.name << " (n = " << r.n << ") | " << r.solver << " | " << r.steps << " ("
            << fmt("%.2f", r.time_ms / 1000.0) << ") | " << fmt("%.2e", r.terr) << " | "
            << (r.converged() ? "solved" : r.status) << " |\n";
    }
}

}  // namespace rpfm
