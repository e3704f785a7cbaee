#pragma once

#include "pulsepair/moments.hpp"

namespace pulsepair {

// Measurement window of the integrated output modes.
struct OutputWindow {
    double tm = 0.0;          // window length
    double alpha = 0.0;       // intracavity-to-output overlap, in (0,1)
    double tm_optimal = 0.0;  // maximizer of alpha
};

// alpha(Tm) = sqrt(2 kappa / Tm) (1 - e^{-(kappa+kappa_L) Tm})/(kappa+kappa_L).
double alpha_factor(double tm, const DerivedRates& r);

// Root of the transcendental stationarity condition 2x e^{-x} = 1 - e^{-x},
// x* = 1.25643...; the optimal window is x*/(kappa+kappa_L).
double alpha_maximizer_x();
double optimal_tm(const DerivedRates& r);

// Vacuum admixed by the finite collection window: (1 - alpha^2)/2 * I.
CovMatrix4 v_in_matrix(double alpha);

// Correlation between the leftover intracavity field and the noise collected
// in the first window; identical value at entries (1,3),(3,1),(2,4),(4,2),
// zero at the optimal transfer point where g_minus vanishes.
double v_mix_scalar(const PulseSchedule& s, const DerivedRates& r, double tm);

// V_out = alpha^2 V + V_in + V_mix.  Throws std::invalid_argument when
// tm > t - t1 (the two windows would overlap and the modes no longer
// commute).
CovMatrix4 output_cov(const CovMatrix4& V, const PulseSchedule& s,
                      const DerivedRates& r, double tm);

}  // namespace pulsepair
