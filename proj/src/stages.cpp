#include "pulsepair/stages.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

namespace pulsepair {

StageCoefficients pulse1_coefficients(const DerivedRates& r) {
    StageCoefficients c;
    c.stage = Stage::Pulse1;
    c.kappa_S = r.kappa_1S;
    c.kappa_D = r.kappa_1D;
    c.chi = r.chi1();
    // Hyperbolic branch: theta^2 = |chi|^2 + kappa_D^2 >= 0 always.
    c.theta = std::sqrt(complexd(std::norm(c.chi) + c.kappa_D * c.kappa_D, 0.0));
    c.cavity_decay = r.cavity_decay();
    c.motion_decay = r.motion_decay_1();
    return c;
}

StageCoefficients pulse2_coefficients(const DerivedRates& r) {
    StageCoefficients c;
    c.stage = Stage::Pulse2;
    c.kappa_S = r.kappa_2S;
    c.kappa_D = r.kappa_2D;
    c.chi = r.chi2();
    // Trigonometric branch, written as hyperbolic of i theta_2:
    // theta_h^2 = kappa_D^2 - |chi|^2, imaginary when underdamped.
    c.theta = std::sqrt(complexd(c.kappa_D * c.kappa_D - std::norm(c.chi), 0.0));
    c.cavity_decay = r.cavity_decay();
    c.motion_decay = r.motion_decay_2();
    return c;
}

StageCoefficients dark_coefficients(const DerivedRates& r) {
    StageCoefficients c;
    c.stage = Stage::Dark;
    c.kappa_S = 0.5 * (r.cavity_decay() + r.kappa_b);
    c.kappa_D = 0.5 * (r.cavity_decay() - r.kappa_b);
    c.chi = 0.0;
    c.theta = c.kappa_D;
    c.cavity_decay = r.cavity_decay();
    c.motion_decay = r.kappa_b;
    c.motion_phase = r.delta_1b;
    return c;
}

namespace {

// cosh(x) and sinh(x)/x for complex x, stable near zero.
complexd cosh_c(complexd x) { return std::cosh(x); }

complexd sinhc_c(complexd x) {
    if (std::abs(x) < 1e-6) {
        const complexd x2 = x * x;
        return 1.0 + x2 / 6.0 * (1.0 + x2 / 20.0);
    }
    return std::sinh(x) / x;
}

}  // namespace

double g_plus(double t, const StageCoefficients& c) {
    const complexd x = c.theta * t;
    const complexd v = cosh_c(x) + c.kappa_D * t * sinhc_c(x);
    return std::exp(-c.kappa_S * t) * v.real();
}

double g_minus(double t, const StageCoefficients& c) {
    const complexd x = c.theta * t;
    const complexd v = cosh_c(x) - c.kappa_D * t * sinhc_c(x);
    return std::exp(-c.kappa_S * t) * v.real();
}

double f_of(double t, const StageCoefficients& c) {
    const complexd v = t * sinhc_c(c.theta * t);
    return std::exp(-c.kappa_S * t) * v.real();
}

double g_pulse1(double t, int sign, const StageCoefficients& c) {
    return sign >= 0 ? g_plus(t, c) : g_minus(t, c);
}
double f_pulse1(double t, const StageCoefficients& c) { return f_of(t, c); }
double g_pulse2(double t, int sign, const StageCoefficients& c) {
    return sign >= 0 ? g_plus(t, c) : g_minus(t, c);
}
double f_pulse2(double t, const StageCoefficients& c) { return f_of(t, c); }

double optimal_transfer_time(const StageCoefficients& pulse2) {
    // g_minus(t) = e^{-kS t}[cos(th2 t) - (kD/th2) sin(th2 t)] vanishes first
    // at tan(th2 t) = th2/kD.  pulse2.theta stores i*th2.
    const double th2_sq = std::norm(pulse2.chi) - pulse2.kappa_D * pulse2.kappa_D;
    if (th2_sq <= 0.0)
        throw std::domain_error(
            "no transfer optimum; pulse-2 coupling below damping");
    const double th = std::sqrt(th2_sq);
    const double kD = pulse2.kappa_D;
    if (kD == 0.0) return std::numbers::pi / (2.0 * th);
    const double x = th / kD;
    if (kD > 0.0 && std::abs(x) < 1e-8) return (1.0 - x * x / 3.0) / kD;  // atan(x)/x series
    double t = std::atan(x) / th;
    if (kD < 0.0) t += std::numbers::pi / th;  // shift into the first positive root
    return t;
}

DarkFactors dark_decay_factors(double dt, const StageCoefficients& dark) {
    if (dt < 0.0) throw std::invalid_argument("dark interval must be >= 0");
    DarkFactors f;
    f.cavity = std::exp(-dark.cavity_decay * dt);
    f.motion = std::exp(complexd(-dark.motion_decay * dt, dark.motion_phase * dt));
    return f;
}

namespace {

// int_0^T e^{z s} ds, entire in z (series near zero kills the 1/z pole).
complexd exp_integral(complexd z, double T) {
    const complexd x = z * T;
    if (std::abs(x) < 1e-4) {
        return T * (1.0 + x / 2.0 * (1.0 + x / 3.0 * (1.0 + x / 4.0)));
    }
    return (std::exp(x) - 1.0) / z;
}

// Adaptive Simpson on [a,b] to relative tolerance tol.
double simpson_rec(const std::function<double(double)>& f, double a, double b,
                   double fa, double fm, double fb, double whole, double tol,
                   int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
         + simpson_rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol_rel) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double scale = std::max({std::abs(whole), (b - a) * std::abs(fm), 1e-300});
    return simpson_rec(f, a, b, fa, fm, fb, whole, tol_rel * scale, 48);
}

}  // namespace

NoiseIntegrals noise_integrals(const StageCoefficients& c, double T,
                               IntegralMethod method) {
    NoiseIntegrals I;
    if (T <= 0.0) return I;

    if (method == IntegralMethod::Quadrature) {
        const double tol = 1e-11;
        I.ff = adaptive_simpson([&](double s) { double v = f_of(s, c); return v * v; }, 0.0, T, tol);
        I.fg = adaptive_simpson([&](double s) { return f_of(s, c) * g_plus(s, c); }, 0.0, T, tol);
        I.gf = adaptive_simpson([&](double s) { return g_minus(s, c) * f_of(s, c); }, 0.0, T, tol);
        I.gg = adaptive_simpson([&](double s) { double v = g_plus(s, c); return v * v; }, 0.0, T, tol);
        I.gpgm = adaptive_simpson([&](double s) { return g_plus(s, c) * g_minus(s, c); }, 0.0, T, tol);
        return I;
    }

    // Closed forms: every product of e^{-kS s} hyperbolics decomposes into
    // exp integrals at z = -2 kS, -2 kS ± 2 theta.
    const complexd th = c.theta;
    const double kD = c.kappa_D;
    const complexd a{-2.0 * c.kappa_S, 0.0};
    const complexd Pp = exp_integral(a + 2.0 * th, T);
    const complexd Pm = exp_integral(a - 2.0 * th, T);
    const complexd P0 = exp_integral(a, T);

    const complexd sum = Pp + Pm - 2.0 * P0;   // 4 int E sinh^2
    const complexd sump = Pp + Pm + 2.0 * P0;  // 4 int E cosh^2
    const complexd dif = Pp - Pm;              // 4 int E sinh cosh

    // The sinh^2/theta^2 combinations lose precision once |theta T| is small
    // (triple cancellation among the exp integrals); that corner falls back
    // to quadrature.
    if (std::abs(th) * T < 1e-2) return noise_integrals(c, T, IntegralMethod::Quadrature);

    const complexd th2 = th * th;
    I.ff = (sum / (4.0 * th2)).real();
    I.fg = (dif / (4.0 * th) + kD * sum / (4.0 * th2)).real();
    I.gf = (dif / (4.0 * th) - kD * sum / (4.0 * th2)).real();
    I.gg = (sump / 4.0 + 2.0 * kD * dif / (4.0 * th) + kD * kD * sum / (4.0 * th2)).real();
    I.gpgm = (sump / 4.0 - kD * kD * sum / (4.0 * th2)).real();
    return I;
}

}  // namespace pulsepair
