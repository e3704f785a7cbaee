#pragma once

#include <string>
#include <vector>

#include "pulsepair/entanglement.hpp"
#include "pulsepair/output.hpp"

namespace pulsepair {

// How the three timing knobs are filled in for a run.
struct ScheduleSpec {
    double t1 = 40e-6;            // first-pulse duration
    double gap = -1.0;            // dark interval; < 0 means 2/(kappa+kappa_L)
    double ratio = 1.0;           // (t2 - t) expressed in units of the optimal
                                  // transfer time
    double dt2_absolute = -1.0;   // absolute second-pulse duration; overrides
                                  // ratio when >= 0
    double tm = -1.0;             // measurement window; < 0 selects the alpha
                                  // maximizer (clamped to the dark interval)
};

struct RunFlags {
    ChiMode chi_mode = ChiMode::Exact;
    bool noiseless = false;
    IntegralMethod integrals = IntegralMethod::ClosedForm;
};

struct PointResult {
    DerivedRates rates;
    RegimeReport regime;
    PulseSchedule schedule;
    double dt2_opt = 0.0;
    MomentSet at_t1, at_t;
    TwoTimeSet two_time;
    CovMatrix4 V = CovMatrix4::Zero();
    CovMatrix4 V_out = CovMatrix4::Zero();
    OutputWindow window;   // tm actually used, its overlap, and the maximizer
    double alpha = 0.0;
    double v_mix = 0.0;
    EntanglementReport ent;
    bool physical = true;          // moment-set physicality at T1 and T
    std::vector<std::string> warnings;
};

// Evaluate the full protocol at one parameter point.  Physicality problems
// are reported, not thrown; genuine contract violations (bad schedule,
// overdamped second pulse with ratio scheduling) throw.
PointResult run_point(const PhysicalParams& p, const ScheduleSpec& spec,
                      const RunFlags& flags = {});

}  // namespace pulsepair
