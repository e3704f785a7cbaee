#pragma once

#include "pulsepair/covariance.hpp"
#include "pulsepair/stages.hpp"

namespace pulsepair {

// Closed set of second moments of the cavity mode a and the motional mode b
// at one instant of the protocol (normally ordered; first moments vanish for
// a vacuum-seeded linear system with zero-mean noise).
struct MomentSet {
    double n_a = 0.0;      // <a^dag a>
    double n_b = 0.0;      // <b^dag b>
    complexd c_ab{0.0};    // <a b>, the two-mode-squeezing correlator
    complexd aa{0.0};      // <a a>; zero through pulse 1 from vacuum
    double stage_time = 0.0;

    // Smallest symplectic eigenvalue of the implied (a,b) covariance; < 1/2
    // signals that the perturbative moment equations have left the physical
    // domain.
    double symplectic_min() const;
    bool physical(double tol = 1e-9) const { return symplectic_min() >= 0.5 - tol; }
};

// State at the end of pulse 1 from vacuum initial conditions.
MomentSet moments_after_pulse1(const DerivedRates& r, double t1,
                               IntegralMethod method = IntegralMethod::ClosedForm);

// Free decay/heating over the dark interval dt.
MomentSet propagate_dark(const MomentSet& m, double dt, const DerivedRates& r);

// Correlators linking the cavity field at the two readout instants.
struct TwoTimeSet {
    complexd a1a2{0.0};        // <a(T1) a(T2)>
    complexd a1a2dag{0.0};     // <a(T1) a^dag(T2)>
    complexd a2a2dagdag{0.0};  // <a^dag(T2) a^dag(T2)>
    double n_a_T2 = 0.0;       // <a^dag(T2) a(T2)>
};

// Assemble the two-time set from the moments at T (dark-propagated) and at
// T1, for a second pulse of duration t2 - t.
TwoTimeSet correlators_after_pulse2(const MomentSet& at_t, const MomentSet& at_t1,
                                    const DerivedRates& r, const PulseSchedule& s,
                                    IntegralMethod method = IntegralMethod::ClosedForm);

// 4x4 intracavity correlation matrix of the quadratures at T1 and T2.  The
// cross-time entries use symmetrized products, which replaces the n_a + 1 in
// a1a2dag by n_a + 1/2; with that convention a vacuum protocol maps to the
// vacuum matrix exactly.
CovMatrix4 intracavity_cov(const TwoTimeSet& tt, double n_a_T1);

}  // namespace pulsepair
