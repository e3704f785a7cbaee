// Timing comparison of the serial and OpenMP sweep paths on the standard
// figure workloads, with a bitwise check that both produce the same rows.

#include <chrono>
#include <cstdio>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "pulsepair/sweep.hpp"

using namespace pulsepair;
namespace chrono = std::chrono;

namespace {

double run_ms(const PhysicalParams& p, const SweepSpec& spec, Execution exec,
              std::string* csv = nullptr) {
    const auto t0 = chrono::steady_clock::now();
    const auto res = run_sweep(p, spec, {}, exec);
    const auto t1 = chrono::steady_clock::now();
    if (csv) {
        std::ostringstream os;
        write_csv(os, res);
        *csv = os.str();
    }
    return chrono::duration<double, std::milli>(t1 - t0).count();
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads = %d\n", omp_get_max_threads());
#else
    std::printf("built without OpenMP; both paths run serially\n");
#endif

    struct Case {
        const char* name;
        SweepParameter param;
        SchedulePolicy policy;
        double from, to;
        int steps;
    };
    const Case cases[] = {
        {"second-pulse ratio scan", SweepParameter::T2MinusTRatio, SchedulePolicy::Fig3, 0.2, 2.0, 4001},
        {"pulse-separation scan", SweepParameter::TMinusT1, SchedulePolicy::Fig4, 0.3e-3, 12e-3, 2001},
        {"first-pulse scan", SweepParameter::T1, SchedulePolicy::Fig5, 2e-6, 46e-6, 4001},
    };

    const PhysicalParams p = reference_params(angular(6.4e3));
    std::printf("%-26s %10s %10s %9s %6s\n", "workload", "serial ms", "openmp ms", "speedup",
                "match");
    for (const auto& c : cases) {
        SweepSpec spec;
        spec.parameter = c.param;
        spec.policy = c.policy;
        spec.from = c.from;
        spec.to = c.to;
        spec.steps = c.steps;
        std::string csv_s, csv_p;
        // warm-up pass so page faults and lazy init don't skew the numbers
        run_ms(p, spec, Execution::Parallel);
        const double ms_s = run_ms(p, spec, Execution::Serial, &csv_s);
        const double ms_p = run_ms(p, spec, Execution::Parallel, &csv_p);
        std::printf("%-26s %10.1f %10.1f %8.2fx %6s\n", c.name, ms_s, ms_p, ms_s / ms_p,
                    csv_s == csv_p ? "yes" : "NO");
        if (csv_s != csv_p) return 1;
    }
    return 0;
}
