#include "pulsepair/entanglement.hpp"

#include <cmath>

namespace pulsepair {

double eta_minus(const CovMatrix4& V) {
    return symplectic_eigenvalues(V, true).minus;
}

double log_negativity(const CovMatrix4& V) {
    const double em = eta_minus(V);
    if (em <= 0.0) return 0.0;  // clamped degenerate discriminant
    return std::max(0.0, -std::log(2.0 * em));
}

SimonResult simon_check(const CovMatrix4& V) {
    SimonResult s;
    s.lhs = 4.0 * V.determinant();
    s.rhs = sigma_invariant(V, -1.0) - 0.25;
    s.entangled = s.lhs < s.rhs;
    return s;
}

double epr_variance(const CovMatrix4& V) {
    const double var_xm = V(0, 0) + V(2, 2) - 2.0 * V(0, 2);
    const double var_pp = V(1, 1) + V(3, 3) + 2.0 * V(1, 3);
    return 0.5 * (var_xm + var_pp);
}

EntanglementReport entanglement_report(const CovMatrix4& V, double nbar1, double nbar2) {
    EntanglementReport rep;
    rep.eta_minus = eta_minus(V);
    rep.E_N = log_negativity(V);
    rep.entangled = rep.eta_minus < 0.5 - 1e-12;  // guard band at the boundary
    const SimonResult s = simon_check(V);
    rep.simon_lhs = s.lhs;
    rep.simon_rhs = s.rhs;
    rep.entangled_by_simon = s.entangled;
    rep.xi_epr = epr_variance(V);
    rep.nbar_pulse1 = nbar1;
    rep.nbar_pulse2 = nbar2;
    return rep;
}

}  // namespace pulsepair
