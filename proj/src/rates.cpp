#include "pulsepair/rates.hpp"

#include <cmath>
#include <stdexcept>

namespace pulsepair {

void PhysicalParams::validate() const {
    if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be > 0");
    if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be > 0");
    if (!(nu > 0.0)) throw std::invalid_argument("nu must be > 0");
    if (kappa_b() < 0.0) throw std::invalid_argument("kappa_b must be >= 0");
    if (kappa_h < 0.0) throw std::invalid_argument("kappa_h must be >= 0");
    if (!(eta > 0.0 && eta < 1.0))
        throw std::invalid_argument("eta must lie in (0,1)");
    for (double a : {theta_L, theta_c, phi_c})
        if (!std::isfinite(a)) throw std::invalid_argument("angles must be finite");
}

void PulseSchedule::validate() const {
    if (!(0.0 < t1 && t1 < t && t < t2))
        throw std::invalid_argument("schedule must satisfy 0 < t1 < t < t2");
    if (!(tm > 0.0 && tm <= t - t1 + 1e-15 * t))
        throw std::invalid_argument("measurement window must satisfy 0 < tm <= t - t1");
}

PhysicalParams reference_params(double kappa) {
    PhysicalParams p;
    p.gamma = angular(5e6);
    p.kappa = kappa;
    p.kappa_h = angular(20.0);
    p.nu = angular(1e6);
    p.eta = 0.1;
    p.g_c = angular(1e6);
    p.omega1 = angular(10e6);
    p.omega2 = angular(10e6);
    p.delta1 = -angular(120e6);
    p.theta_L = 0.0;
    p.theta_c = std::numbers::pi / 2.0;
    p.phi_c = 0.0;
    return p;
}

namespace {

// Trap-frequency shift evaluated at a given sideband frequency; used once
// with the bare nu (first-order self-consistency) and once per pulse with
// nu' for the residual motional shifts.
double motional_shift(double delta, double omega_sq, double eta, double cos_thL,
                      double gamma, double nu_eval) {
    const double g24 = gamma * gamma / 4.0;
    const double A = g24 + delta * delta - nu_eval * nu_eval;
    const double e2o2 = eta * eta * omega_sq * cos_thL * cos_thL;
    return 2.0 * delta * e2o2 * A / (A * A + nu_eval * nu_eval * gamma * gamma)
         - 2.0 * e2o2 * delta / (delta * delta + g24);
}

}  // namespace

DerivedRates derive_rates(const PhysicalParams& p, ChiMode mode, bool noiseless) {
    p.validate();
    const double d1 = p.delta1;
    const double d2 = p.delta2();
    if (d1 == 0.0 || d2 == 0.0)
        throw std::invalid_argument("zero detuning: effective rates undefined");

    DerivedRates r;
    r.chi_mode = mode;
    r.kappa = p.kappa;
    r.kappa_h = p.kappa_h;
    r.kappa_b = p.kappa_b();

    const double gamma = p.gamma;
    const double g24 = gamma * gamma / 4.0;
    const double cL = std::cos(p.theta_L);
    const double cc = std::cos(p.theta_c);
    const double cp = std::cos(p.phi_c);
    const double tp = std::tan(p.phi_c);
    const double om1_sq = std::norm(p.omega1);
    const double om2_sq = std::norm(p.omega2);
    const complexd i{0.0, 1.0};

    r.delta_nu = motional_shift(d1, om1_sq, p.eta, cL, gamma, p.nu);
    r.nu_prime = p.nu + r.delta_nu;
    const double nup = r.nu_prime;

    r.delta_1b = motional_shift(d1, om1_sq, p.eta, cL, gamma, nup);
    r.delta_2b = motional_shift(d2, om2_sq, p.eta, cL, gamma, nup);

    const double dm = d1 - nup;  // pulse-1 two-photon denominator
    r.delta_prime = dm * std::norm(p.g_c) * cp * cp / (g24 + dm * dm);

    // Raman couplings; the leading form drops gamma and the sideband shift
    // from the denominators.
    const complexd geom = cL + i * tp * cc;
    r.chi1_exact = p.eta * p.omega1 * std::conj(p.g_c) * cp
                 * (cL / complexd(dm, gamma / 2.0) + i * tp * cc / complexd(d1, gamma / 2.0));
    r.chi1_leading = p.eta * p.omega1 * std::conj(p.g_c) * cp * geom / d1;
    r.chi2_exact = p.eta * p.omega2 * std::conj(p.g_c) * cp
                 * (cL / complexd(d2 + nup, gamma / 2.0) + i * tp * cc / complexd(d2, gamma / 2.0));
    r.chi2_leading = p.eta * p.omega2 * std::conj(p.g_c) * cp * geom / d2;

    // Cavity-photon scattering into free space and its input-noise amplitude.
    r.kappa_L = 0.5 * gamma * std::norm(p.g_c) * cp * cp / (g24 + dm * dm);
    r.kbar_L = -std::sqrt(gamma / 2.0) * p.g_c * cp / complexd(gamma / 2.0, dm);

    // Incoherent vibrational excitation / de-excitation by laser scattering.
    auto kb_rate = [&](double delta, double om_sq, double side) {
        const double d = delta + side * nup;
        return p.eta * p.eta * 0.5 * gamma * om_sq * cL * cL / (g24 + d * d);
    };
    r.kappa_b_p1 = kb_rate(d1, om1_sq, +1.0);
    r.kappa_b_m1 = kb_rate(d1, om1_sq, -1.0);
    r.kappa_b_p2 = kb_rate(d2, om2_sq, +1.0);
    r.kappa_b_m2 = kb_rate(d2, om2_sq, -1.0);
    const double sg2 = std::sqrt(gamma / 2.0);
    r.kbar_b_p1 = i * p.eta * sg2 * p.omega1 * cL / complexd(gamma / 2.0, -(d1 + nup));
    r.kbar_b_m1 = -i * p.eta * sg2 * p.omega1 * cL / complexd(gamma / 2.0, d1 - nup);
    r.kbar_b_p2 = i * p.eta * sg2 * std::conj(p.omega2) * cL / complexd(gamma / 2.0, -(d2 + nup));
    r.kbar_b_m2 = -i * p.eta * sg2 * p.omega2 * cL / complexd(gamma / 2.0, d2 - nup);

    if (noiseless) {
        r.kappa_L = 0.0;
        r.kbar_L = 0.0;
        r.kappa_b_p1 = r.kappa_b_m1 = r.kappa_b_p2 = r.kappa_b_m2 = 0.0;
        r.kbar_b_p1 = r.kbar_b_m1 = r.kbar_b_p2 = r.kbar_b_m2 = 0.0;
        r.kappa_h = 0.0;
        r.kappa_b = 0.0;
    }

    const double k_tot = r.kappa + r.kappa_L;
    r.kappa_1S = 0.5 * (k_tot + r.kappa_b + r.kappa_b_p1 - r.kappa_b_m1);
    r.kappa_1D = 0.5 * (k_tot - r.kappa_b - r.kappa_b_p1 + r.kappa_b_m1);
    r.theta_1 = std::sqrt(std::norm(r.chi1()) + r.kappa_1D * r.kappa_1D);
    r.kappa_2S = 0.5 * (k_tot + r.kappa_b + r.kappa_b_p2 - r.kappa_b_m2);
    r.kappa_2D = 0.5 * (k_tot - r.kappa_b - r.kappa_b_p2 + r.kappa_b_m2);
    r.theta_2 = std::sqrt(complexd(std::norm(r.chi2()) - r.kappa_2D * r.kappa_2D, 0.0));
    return r;
}

ResonanceFrequencies resonance_frequencies(const PhysicalParams& p, const DerivedRates& r) {
    (void)p;
    ResonanceFrequencies f;
    f.delta1_cavity = r.delta_prime + r.nu_prime;        // = delta' + nu + delta_nu
    f.delta2_cavity = r.delta_prime - p.nu - r.delta_2b;
    return f;
}

bool RegimeReport::all_pass() const {
    for (const auto& c : checks)
        if (c.status != CheckStatus::Pass) return false;
    return true;
}

bool RegimeReport::any_fail() const {
    for (const auto& c : checks)
        if (c.status == CheckStatus::Fail) return true;
    return false;
}

namespace {

RegimeCheck ratio_check(const std::string& name, double ratio, double pass_at,
                        double warn_at, const std::string& detail) {
    RegimeCheck c;
    c.name = name;
    c.ratio = ratio;
    c.detail = detail;
    c.status = ratio >= pass_at ? CheckStatus::Pass
             : ratio >= warn_at ? CheckStatus::Warn
                                : CheckStatus::Fail;
    return c;
}

}  // namespace

RegimeReport validate_regime(const PhysicalParams& p, const DerivedRates& r,
                             double photon_estimate) {
    RegimeReport rep;
    const double ad1 = std::abs(p.delta1);
    const double ad2 = std::abs(p.delta2());

    // Far detuning from the dipole: |Delta_j| >> Omega_j, |g_c|, gamma.
    // Ratio >= 10 passes, >= 3 warns (the reference set sits at 12).
    auto far = [&](const std::string& tag, double ad, double scale) {
        return ratio_check("far_detuning_" + tag, scale > 0.0 ? ad / scale : 1e300,
                           10.0, 3.0, "|Delta|/max(Omega,g,gamma)");
    };
    const double s1 = std::max({std::abs(p.omega1), std::abs(p.g_c), p.gamma});
    const double s2 = std::max({std::abs(p.omega2), std::abs(p.g_c), p.gamma});
    rep.checks.push_back(far("pulse1", ad1, s1));
    rep.checks.push_back(far("pulse2", ad2, s2));

    // Resolved sidebands: nu >> kappa, kappa_b.
    const double broad = std::max(p.kappa, p.kappa_b());
    rep.checks.push_back(ratio_check("resolved_sidebands",
                                     broad > 0.0 ? p.nu / broad : 1e300, 10.0, 3.0,
                                     "nu/max(kappa,kappa_b)"));

    // Lamb-Dicke confinement.
    rep.checks.push_back(ratio_check("lamb_dicke", 1.0 / p.eta, 5.0, 2.0, "1/eta"));

    // Trap-shift smallness |delta_nu| << nu.
    const double adnu = std::abs(r.delta_nu);
    rep.checks.push_back(ratio_check("small_trap_shift",
                                     adnu > 0.0 ? p.nu / adnu : 1e300, 100.0, 10.0,
                                     "nu/|delta_nu|"));

    // Laser recoil must dominate cavity recoil so the nonlinear scattering
    // terms stay negligible: Omega cos(theta_L) >> g sqrt(n) cos(theta_c).
    const double lhs = std::abs(p.omega1) * std::abs(std::cos(p.theta_L));
    const double rhs = std::abs(p.g_c) * std::sqrt(std::max(photon_estimate, 0.0))
                     * std::abs(std::cos(p.theta_c));
    rep.checks.push_back(ratio_check("laser_recoil_dominance",
                                     rhs > 0.0 ? lhs / rhs : 1e300, 10.0, 3.0,
                                     "Omega cos(theta_L) / g sqrt(n) cos(theta_c)"));
    return rep;
}

}  // namespace pulsepair
