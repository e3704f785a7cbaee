#include "pulsepair/moments.hpp"

#include <cmath>

namespace pulsepair {

double MomentSet::symplectic_min() const {
    // Covariance of (Xa, Pa, Xb, Pb) implied by the moment set.
    CovMatrix4 V = CovMatrix4::Zero();
    const double A = n_a + 0.5 + aa.real();
    const double Ap = n_a + 0.5 - aa.real();
    V(0, 0) = A;
    V(1, 1) = Ap;
    V(0, 1) = V(1, 0) = aa.imag();
    V(2, 2) = V(3, 3) = n_b + 0.5;
    // <a b> correlates X-X with +Re c and P-P with -Re c (same pattern as a
    // two-mode squeezer), X-P with the imaginary part.
    V(0, 2) = V(2, 0) = c_ab.real();
    V(1, 3) = V(3, 1) = -c_ab.real();
    V(0, 3) = V(3, 0) = c_ab.imag();
    V(1, 2) = V(2, 1) = c_ab.imag();
    return symplectic_eigenvalues(V, false).minus;
}

MomentSet moments_after_pulse1(const DerivedRates& r, double t1, IntegralMethod method) {
    MomentSet m;
    m.stage_time = t1;
    if (t1 <= 0.0) return m;

    const StageCoefficients c = pulse1_coefficients(r);
    const double gm = g_minus(t1, c);
    const double f = f_of(t1, c);
    const NoiseIntegrals I = noise_integrals(c, t1, method);

    const complexd chi = r.chi1();
    const double chi_sq = std::norm(chi);
    const double kh = r.kappa_h;
    const double kb = r.kappa_b;
    const double kap = r.kappa;
    const double kL = r.kappa_L;
    const complexd kbm = r.kbar_b_m1;
    const complexd kbL = r.kbar_L;

    // Photons: the anomalous coupling pairs the motional bath anti-normally,
    // which is where the + 2 kappa_b on top of kappa_h comes from.
    m.n_a = chi_sq * (f * f + (kh + 2.0 * kb + 2.0 * r.kappa_b_p1) * I.ff);

    // Phonons: heating, cavity-noise backaction, and the spontaneous-emission
    // channel shared between the field and the motion.
    m.n_b = chi_sq * f * f + kh * I.gg + 2.0 * kap * chi_sq * I.ff
          + 2.0 * (r.kappa_b_m1 * I.gg
                   - 2.0 * std::real(std::conj(kbm) * chi * kbL) * I.fg
                   + kL * chi_sq * I.ff);

    // <a b>: coherent two-mode squeezing plus every noise channel that feeds
    // both modes.  The I.gpgm term exists only because the same
    // spontaneous-emission noise enters both equations.
    m.c_ab = gm * chi * f + chi * kh * I.fg + 2.0 * kap * chi * I.gf
           + 2.0 * (r.kappa_b_m1 * chi * I.fg
                    - std::conj(kbm) * kbL * chi * chi * I.ff
                    - std::conj(kbL) * kbm * I.gpgm
                    + kL * chi * I.gf);

    m.aa = 0.0;  // vacuum start; the resonant terms never source it
    return m;
}

namespace {

// (1 - e^{-x})/x, series for small x so the kappa_b -> 0 limit is exact.
double phi1m(double x) {
    if (std::abs(x) < 1e-6) return 1.0 - x / 2.0 + x * x / 6.0;
    return (1.0 - std::exp(-x)) / x;
}

}  // namespace

MomentSet propagate_dark(const MomentSet& m, double dt, const DerivedRates& r) {
    if (dt < 0.0) throw std::invalid_argument("dark interval must be >= 0");
    const double G = r.cavity_decay();
    MomentSet out = m;
    out.stage_time = m.stage_time + dt;
    out.n_a = m.n_a * std::exp(-2.0 * G * dt);
    out.aa = m.aa * std::exp(-2.0 * G * dt);
    // Heating written in the kappa_b-safe form kappa_h dt (1-e^-x)/x.
    const double x = 2.0 * r.kappa_b * dt;
    out.n_b = m.n_b * std::exp(-x) + r.kappa_h * dt * phi1m(x);
    out.c_ab = m.c_ab * std::exp(-G * dt)
             * std::exp(complexd(-r.kappa_b * dt, r.delta_1b * dt));
    return out;
}

TwoTimeSet correlators_after_pulse2(const MomentSet& at_t, const MomentSet& at_t1,
                                    const DerivedRates& r, const PulseSchedule& s,
                                    IntegralMethod method) {
    if (!(s.t1 < s.t && s.t <= s.t2))
        throw std::invalid_argument("schedule must satisfy t1 < t <= t2");
    const double dT = s.dark_interval();
    const double dt2 = s.pulse2_duration();
    const StageCoefficients c2 = pulse2_coefficients(r);
    const double gm = g_minus(dt2, c2);
    const double f2 = f_of(dt2, c2);
    const complexd chi2 = r.chi2();
    const double G = r.cavity_decay();

    TwoTimeSet tt;
    tt.n_a_T2 = gm * gm * at_t.n_a + std::norm(chi2) * f2 * f2 * at_t.n_b
              + std::norm(chi2) * (r.kappa_h + 2.0 * r.kappa_b_m2)
                    * noise_integrals(c2, dt2, method).ff;

    const complexd dark_b = std::exp(complexd(-r.kappa_b * dT, r.delta_1b * dT));
    tt.a1a2 = chi2 * f2 * dark_b * at_t1.c_ab;
    tt.a1a2dag = gm * std::exp(-G * dT) * (at_t1.n_a + 1.0);
    tt.a2a2dagdag = 2.0 * std::conj(chi2) * f2 * gm
                  * std::exp(complexd(-(r.kappa_b + G) * dT, -r.delta_1b * dT))
                  * std::conj(at_t1.c_ab);
    return tt;
}

CovMatrix4 intracavity_cov(const TwoTimeSet& tt, double n_a_T1) {
    CovMatrix4 V = CovMatrix4::Zero();
    V(0, 0) = V(1, 1) = n_a_T1 + 0.5;
    V(2, 2) = tt.n_a_T2 + tt.a2a2dagdag.real() + 0.5;
    V(3, 3) = tt.n_a_T2 - tt.a2a2dagdag.real() + 0.5;
    V(2, 3) = V(3, 2) = -tt.a2a2dagdag.imag();

    // Symmetrized cross-time correlator: the ordered <a(T1) a^dag(T2)>
    // carries n+1; the half-commutator is removed so that the symmetrized
    // entries are used, which carries n+1/2.
    const complexd s = tt.a1a2;
    const complexd msym = tt.a1a2dag * (n_a_T1 + 0.5) / (n_a_T1 + 1.0);
    V(0, 2) = V(2, 0) = s.real() + msym.real();
    V(1, 3) = V(3, 1) = msym.real() - s.real();
    V(0, 3) = V(3, 0) = s.imag() - msym.imag();
    V(1, 2) = V(2, 1) = s.imag() + msym.imag();
    return V;
}

}  // namespace pulsepair
