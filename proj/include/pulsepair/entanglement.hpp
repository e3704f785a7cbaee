#pragma once

#include "pulsepair/covariance.hpp"

namespace pulsepair {

struct EntanglementReport {
    double eta_minus = 0.5;   // smallest symplectic eigenvalue of the PT matrix
    double E_N = 0.0;         // logarithmic negativity, natural log
    bool entangled = false;   // eta_minus < 1/2 (strict, with guard band)
    double simon_lhs = 0.0;   // 4 det V
    double simon_rhs = 0.0;   // Sigma - 1/4
    bool entangled_by_simon = false;
    double xi_epr = 0.0;      // [Var(X1-X2) + Var(P1+P2)] / 2
    double nbar_pulse1 = 0.0;
    double nbar_pulse2 = 0.0;
};

double eta_minus(const CovMatrix4& V);

// E_N = max(0, -ln 2 eta_minus); logarithms are natural throughout.
double log_negativity(const CovMatrix4& V);

struct SimonResult {
    double lhs = 0.0, rhs = 0.0;
    bool entangled = false;
};
// Separability test 4 det V < Sigma - 1/4; agrees with eta_minus < 1/2 on
// physical matrices.
SimonResult simon_check(const CovMatrix4& V);

double epr_variance(const CovMatrix4& V);

EntanglementReport entanglement_report(const CovMatrix4& V, double nbar1 = 0.0,
                                       double nbar2 = 0.0);

}  // namespace pulsepair
