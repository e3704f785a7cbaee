#pragma once

#include <string>
#include <vector>

#include "pulsepair/params.hpp"

namespace pulsepair {

enum class ChiMode { Exact, Leading };

// Effective couplings, loss rates, noise amplitudes and Stark shifts of the
// adiabatically eliminated atom-cavity system.  All angular (rad/s).
struct DerivedRates {
    // Raman couplings cavity <-> motion, with and without the resonance
    // denominators' linewidth and sideband corrections.
    complexd chi1_exact, chi1_leading;
    complexd chi2_exact, chi2_leading;
    ChiMode chi_mode = ChiMode::Exact;

    double kappa_L = 0.0;   // cavity photon scattering loss
    complexd kbar_L;        // amplitude of the associated input noise

    // Incoherent vibrational (de-)excitation rates and noise amplitudes for
    // each pulse; p = quantum gained, m = quantum lost.
    double kappa_b_p1 = 0.0, kappa_b_m1 = 0.0;
    double kappa_b_p2 = 0.0, kappa_b_m2 = 0.0;
    complexd kbar_b_p1, kbar_b_m1, kbar_b_p2, kbar_b_m2;

    double delta_prime = 0.0;  // cavity-mode Stark shift
    double delta_nu = 0.0;     // trap-frequency shift (first order, bare nu)
    double nu_prime = 0.0;     // effective sideband frequency nu + delta_nu
    double delta_1b = 0.0;     // motional shift during pulse 1
    double delta_2b = 0.0;     // motional shift during pulse 2

    // Damped-oscillation parameters of the closed-form stage solutions.
    double kappa_1S = 0.0, kappa_1D = 0.0;
    double theta_1 = 0.0;      // sqrt(|chi1|^2 + kappa_1D^2), real
    double kappa_2S = 0.0, kappa_2D = 0.0;
    complexd theta_2;          // sqrt(|chi2|^2 - kappa_2D^2), may be imaginary

    // Copies of the inputs the downstream stages keep needing.
    double kappa = 0.0, kappa_b = 0.0, kappa_h = 0.0;

    complexd chi1() const { return chi_mode == ChiMode::Exact ? chi1_exact : chi1_leading; }
    complexd chi2() const { return chi_mode == ChiMode::Exact ? chi2_exact : chi2_leading; }
    double cavity_decay() const { return kappa + kappa_L; }  // total field decay
    double motion_decay_1() const { return kappa_b + kappa_b_p1 - kappa_b_m1; }
    double motion_decay_2() const { return kappa_b + kappa_b_p2 - kappa_b_m2; }
};

// Populate every derived quantity from the laboratory inputs.  `noiseless`
// zeroes kappa_L, kappa_b_{pm j}, kappa_h (and their noise amplitudes) after
// evaluation, for the comparison curves.
DerivedRates derive_rates(const PhysicalParams& p, ChiMode mode = ChiMode::Exact,
                          bool noiseless = false);

// Laser-cavity detunings at which the two effective resonances hold:
// pulse 1 at delta' + nu + delta_nu, pulse 2 at delta' - nu - delta_2b.
struct ResonanceFrequencies {
    double delta1_cavity = 0.0;
    double delta2_cavity = 0.0;
};
ResonanceFrequencies resonance_frequencies(const PhysicalParams& p, const DerivedRates& r);

enum class CheckStatus { Pass, Warn, Fail };

struct RegimeCheck {
    std::string name;
    CheckStatus status = CheckStatus::Pass;
    double ratio = 0.0;  // the dimensionless margin the verdict is based on
    std::string detail;
};

struct RegimeReport {
    std::vector<RegimeCheck> checks;
    bool all_pass() const;
    bool any_fail() const;
};

// Diagnostics for the assumptions behind the effective equations: far
// detuning, resolved sidebands, Lamb-Dicke confinement, small trap shift and
// the recoil inequality Omega cos(theta_L) >> g_c sqrt(n) cos(theta_c).
// `photon_estimate` supplies the n entering the last check.
RegimeReport validate_regime(const PhysicalParams& p, const DerivedRates& r,
                             double photon_estimate = 1.0);

}  // namespace pulsepair
