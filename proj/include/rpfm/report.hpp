#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "rpfm/rpfmtr.hpp"

namespace rpfm {

inline constexpr const char* kTraceCsvHeader = "k,itc,mu,sigma,delta_t,rho,merit,resk,accepted";
inline constexpr const char* kBenchCsvHeader = "name,n,solver,steps,loops,time_ms,terr,status";

/// One row of a benchmark table.
struct BenchRecord {
    std::string name;
    std::size_t n = 0;
    std::string solver;  // "rpfmtr" or "damped_newton"
    std::size_t steps = 0;
    std::size_t loops = 0;
    double time_ms = 0.0;
    double terr = 0.0;
    std::string status;  // SolveStatus name, or "Failed: <reason>"

    bool converged() const noexcept { return status == "Converged"; }
};

BenchRecord make_bench_record(const std::string& name, std::size_t n, const std::string& solver,
                              const SolveReport& r);

void write_trace_csv(std::ostream& out, const std::vector<IterationRecord>& trace);
void write_bench_csv(std::ostream& out, const std::vector<BenchRecord>& rows);

/// Table laid out like published LCP benchmark tables: steps (time) and Terr.
void write_bench_markdown(std::ostream& out, const std::vector<BenchRecord>& rows);

}  // namespace rpfm
