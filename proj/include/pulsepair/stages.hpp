#pragma once

#include "pulsepair/rates.hpp"

namespace pulsepair {

enum class Stage { Pulse1, Dark, Pulse2 };

// Decay/coupling coefficients of one protocol stage.  theta is carried as a
// complex number: pulse 1 is hyperbolic (theta real), pulse 2 trigonometric
// (theta imaginary in the underdamped case), and every returned function
// value is real either way.
struct StageCoefficients {
    Stage stage = Stage::Pulse1;
    double kappa_S = 0.0;
    double kappa_D = 0.0;
    complexd theta;         // hyperbolic rate: theta^2 = |chi|^2 + kappa_D^2
                            // (pulse 1) or kappa_D^2 - |chi|^2 (pulse 2)
    complexd chi;
    double cavity_decay = 0.0;   // kappa + kappa_L
    double motion_decay = 0.0;   // kappa_b (+ kappa_b_p - kappa_b_m in pulses)
    double motion_phase = 0.0;   // residual frame rotation in the dark stage
};

StageCoefficients pulse1_coefficients(const DerivedRates& r);
StageCoefficients pulse2_coefficients(const DerivedRates& r);
StageCoefficients dark_coefficients(const DerivedRates& r);

// The closed-form propagator entries
//   g±(t) = e^{-kS t} [cosh(theta t) ± (kD/theta) sinh(theta t)]
//   f(t)  = e^{-kS t} sinh(theta t) / theta
// with series fallbacks near theta t -> 0.
double g_plus(double t, const StageCoefficients& c);
double g_minus(double t, const StageCoefficients& c);
double f_of(double t, const StageCoefficients& c);

// Named per-pulse entry points; sign = +1 or -1 selects g±.
double g_pulse1(double t, int sign, const StageCoefficients& c);
double f_pulse1(double t, const StageCoefficients& c);
double g_pulse2(double t, int sign, const StageCoefficients& c);
double f_pulse2(double t, const StageCoefficients& c);

// First positive root of g_minus for pulse 2: the duration at which the
// motional state has been handed over to the cavity mode as completely as
// the damping allows.  Throws std::domain_error in the overdamped case
// |chi2| < kappa_2D, where g_minus never crosses zero.
double optimal_transfer_time(const StageCoefficients& pulse2);

struct DarkFactors {
    double cavity = 1.0;    // e^{-(kappa+kappa_L) dt}
    complexd motion{1.0};   // e^{(i delta_1b - kappa_b) dt}
};
DarkFactors dark_decay_factors(double dt, const StageCoefficients& dark);

// Time integrals of propagator products over [0, T], needed by the
// second-moment formulas:
//   ff = int f^2, fg = int f g+, gf = int g- f, gg = int g+^2,
//   gpgm = int g+ g-.
struct NoiseIntegrals {
    double ff = 0.0, fg = 0.0, gf = 0.0, gg = 0.0, gpgm = 0.0;
};

enum class IntegralMethod { ClosedForm, Quadrature };

NoiseIntegrals noise_integrals(const StageCoefficients& c, double T,
                               IntegralMethod method = IntegralMethod::ClosedForm);

}  // namespace pulsepair
