#pragma once

#include <iosfwd>

#include "pulsepair/pipeline.hpp"

namespace pulsepair {

enum class SweepParameter { T1, TMinusT1, T2MinusTRatio, Kappa, KappaH, Omega1, Eta };
enum class SchedulePolicy { Fig3, Fig4, Fig5, Custom };

struct SweepSpec {
    SweepParameter parameter = SweepParameter::T2MinusTRatio;
    double from = 0.0;
    double to = 0.0;
    int steps = 2;             // >= 2 grid points including both ends
    SchedulePolicy policy = SchedulePolicy::Custom;
    ScheduleSpec base;         // schedule knobs not owned by the policy
    void validate() const;
};

struct SweepRow {
    double value = 0.0;        // swept parameter value
    bool ok = false;           // evaluation succeeded
    bool physical = true;      // moment physicality held
    double E_N = 0.0, eta_minus = 0.0, xi_epr = 0.0;
    double nbar1 = 0.0, nbar2 = 0.0;
    double alpha = 0.0, dt2_opt = 0.0;
    int warnings = 0;
    std::string error;         // set when ok is false
};

struct SweepResult {
    SweepSpec spec;
    std::vector<SweepRow> rows;
};

enum class Execution { Serial, Parallel };

// Evaluate the grid.  Rows are independent; the parallel path distributes
// them over OpenMP threads and the assembled result is identical to the
// serial one row for row.
SweepResult run_sweep(const PhysicalParams& p, const SweepSpec& spec,
                      const RunFlags& flags = {},
                      Execution exec = Execution::Parallel);

// Plot-ready serialization: '#'-prefixed header comments, fixed column
// order, 12 significant digits.
void write_csv(std::ostream& os, const SweepResult& r);
void write_json(std::ostream& os, const SweepResult& r);

struct FigureCurve {
    double kappa = 0.0;
    bool noiseless = false;
    SweepResult sweep;
};

struct FigureData {
    int which = 3;
    std::vector<FigureCurve> curves;
};

// Regenerate the data behind one of the three reference figures over the
// standard cavity-decay list plus the noiseless comparison curve.
FigureData reproduce_figure(int which, const PhysicalParams& base,
                            const std::vector<double>& kappas = {},
                            int steps = 101, const RunFlags& flags = {},
                            Execution exec = Execution::Parallel);

std::vector<double> default_kappa_list();  // 2 pi x {16, 11, 6.4, 0.8} kHz

}  // namespace pulsepair
