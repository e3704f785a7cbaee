#include <doctest.h>

#include <cmath>

#include <random>

#include "pulsepair/oracle.hpp"
#include "pulsepair/pipeline.hpp"

using namespace pulsepair;

namespace {
PhysicalParams sec4(double kappa_khz = 0.8) { return reference_params(angular(kappa_khz * 1e3)); }

PulseSchedule reference_schedule(const DerivedRates& r, double ratio = 1.0,
                                 double t1 = 40e-6) {
    PulseSchedule s;
    s.t1 = t1;
    s.t = t1 + 2.0 / r.cavity_decay();
    s.t2 = s.t + ratio * optimal_transfer_time(pulse2_coefficients(r));
    s.tm = std::min(optimal_tm(r), s.dark_interval());
    return s;
}
}

TEST_CASE("stage generators expose the closed-form spectra") {
    const auto r = derive_rates(sec4());
    SUBCASE("dark drift is diagonal decay plus the frame phase") {
        const auto g = build_generator(Stage::Dark, r);
        CHECK(g.drift(0, 0) == complexd(-r.cavity_decay()));
        CHECK(g.drift(1, 1) == complexd(-r.kappa_b, r.delta_1b));
        CHECK(g.drift.cwiseAbs().sum()
              == doctest::Approx(std::abs(g.drift(0, 0)) * 2.0
                                 + std::abs(g.drift(1, 1)) * 2.0).epsilon(1e-12));
        // only the heating channel remains in the feeds beyond cavity vacuum
        CHECK(g.diffusion(3, 1).real() == doctest::Approx(r.kappa_h).epsilon(1e-12));
        CHECK(g.diffusion(0, 1) == complexd(0.0));
    }
    SUBCASE("pulse-1 eigenvalues are -kappa_1S +- theta_1") {
        const auto g = build_generator(Stage::Pulse1, r);
        Eigen::ComplexEigenSolver<Matrix4cd> es(g.drift, false);
        double best_lo = 1e18, best_hi = -1e18;
        for (int i = 0; i < 4; ++i) {
            best_lo = std::min(best_lo, es.eigenvalues()(i).real());
            best_hi = std::max(best_hi, es.eigenvalues()(i).real());
        }
        CHECK(best_hi == doctest::Approx(-r.kappa_1S + r.theta_1).epsilon(1e-10));
        CHECK(best_lo == doctest::Approx(-r.kappa_1S - r.theta_1).epsilon(1e-10));
    }
    SUBCASE("coupling-free pulse 1 has eigenvalues +-|chi1|") {
        PhysicalParams p = sec4();
        p.kappa = 1e-6;
        const auto r0 = derive_rates(p, ChiMode::Exact, true);
        const auto g = build_generator(Stage::Pulse1, r0);
        Eigen::ComplexEigenSolver<Matrix4cd> es(g.drift, false);
        double hi = -1e18;
        for (int i = 0; i < 4; ++i) hi = std::max(hi, es.eigenvalues()(i).real());
        CHECK(hi == doctest::Approx(std::abs(r0.chi1())).epsilon(1e-8));
    }
    SUBCASE("pulse-2 eigenvalues are -kappa_2S +- i theta_2") {
        const auto g = build_generator(Stage::Pulse2, r);
        Eigen::ComplexEigenSolver<Matrix4cd> es(g.drift, false);
        double re = 0.0, im = 0.0;
        for (int i = 0; i < 4; ++i) {
            re += es.eigenvalues()(i).real() / 4.0;
            im = std::max(im, es.eigenvalues()(i).imag());
        }
        CHECK(re == doctest::Approx(-r.kappa_2S).epsilon(1e-10));
        CHECK(im == doctest::Approx(r.theta_2.real()).epsilon(1e-10));
    }
}

TEST_CASE("moment integration") {
    SUBCASE("zero generator is the identity map") {
        StageGenerator g;
        MomentSet m;
        m.n_a = 2.0;
        m.n_b = 0.5;
        m.c_ab = complexd(0.3, -0.1);
        const auto out = integrate_moments(g, m, 1e-3);
        CHECK(out.n_a == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(out.n_b == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(std::abs(out.c_ab - m.c_ab) < 1e-12);
    }
    SUBCASE("coherent pulse 1 amplifies like a squeezer") {
        PhysicalParams p = sec4();
        p.kappa = 1e-6;
        const auto r0 = derive_rates(p, ChiMode::Exact, true);
        const auto g = build_generator(Stage::Pulse1, r0);
        const double t = 1.0 / std::abs(r0.chi1());
        const auto out = integrate_moments(g, MomentSet{}, t);
        CHECK(out.n_a == doctest::Approx(std::sinh(1.0) * std::sinh(1.0)).epsilon(1e-8));
    }
    SUBCASE("reference pulse 1 matches the closed forms") {
        const auto r = derive_rates(sec4());
        const auto g = build_generator(Stage::Pulse1, r);
        const auto ode = integrate_moments(g, MomentSet{}, 40e-6);
        const auto cf = moments_after_pulse1(r, 40e-6);
        CHECK(ode.n_a == doctest::Approx(cf.n_a).epsilon(1e-6));
        CHECK(ode.n_b == doctest::Approx(cf.n_b).epsilon(1e-6));
        CHECK(std::abs(ode.c_ab - cf.c_ab) < 1e-6 * std::abs(cf.c_ab));
        CHECK(std::abs(ode.aa) < 1e-10);
    }
}

TEST_CASE("dropping the shared emission channel breaks only the correlator") {
    // The same spontaneous-emission mode drives both equations; leaving that
    // correlation out still reproduces the occupations but not <a b>.
    const auto r = derive_rates(sec4());
    const auto full = build_generator(Stage::Pulse1, r, true);
    const auto cut = build_generator(Stage::Pulse1, r, false);
    const auto m_full = integrate_moments(full, MomentSet{}, 40e-6);
    const auto m_cut = integrate_moments(cut, MomentSet{}, 40e-6);
    const auto cf = moments_after_pulse1(r, 40e-6);
    CHECK(m_cut.n_a == doctest::Approx(cf.n_a).epsilon(1e-8));
    // n_b carries a small piece of the correlation; the correlator carries
    // orders of magnitude more
    const double nb_shift = std::abs(m_cut.n_b - cf.n_b) / cf.n_b;
    const double c_shift = std::abs(m_cut.c_ab - cf.c_ab) / std::abs(cf.c_ab);
    CHECK(nb_shift < 2e-3);
    CHECK(c_shift > 1e-3);
    CHECK(c_shift > 5.0 * nb_shift);
    CHECK(std::abs(m_full.c_ab - cf.c_ab) < 1e-9 * std::abs(cf.c_ab));
}

TEST_CASE("corrupted drift is caught by the comparison") {
    const auto r = derive_rates(sec4());
    StageGenerator g = build_generator(Stage::Pulse1, r);
    g.drift(0, 3) = -g.drift(0, 3);  // flip one coupling sign
    const auto bad = integrate_moments(g, MomentSet{}, 40e-6);
    const auto cf = moments_after_pulse1(r, 40e-6);
    CHECK(std::abs(bad.c_ab - cf.c_ab) > 0.1 * std::abs(cf.c_ab));
}

TEST_CASE("regression route for the two-time set") {
    const auto r = derive_rates(sec4());
    const auto g1 = build_generator(Stage::Pulse1, r);
    const Matrix4cd S1 = integrate_state(g1, vacuum_state_matrix(), 40e-6);

    SUBCASE("zero-length second pulse leaves pure decay") {
        auto s = reference_schedule(r);
        s.t2 = s.t;
        const auto tt = regress_two_time(r, S1, s);
        const double na1 = S1(2, 0).real();
        CHECK(tt.a1a2dag.real()
              == doctest::Approx(std::exp(-r.cavity_decay() * s.dark_interval())
                                 * (na1 + 1.0)).epsilon(1e-8));
        CHECK(std::abs(tt.a1a2) < 1e-8);
    }
    SUBCASE("reference schedule matches the analytic correlators") {
        for (double ratio : {1.0, 0.6}) {
            const auto s = reference_schedule(r, ratio);
            const auto tt = regress_two_time(r, S1, s);
            const auto m1 = moments_after_pulse1(r, s.t1);
            const auto mt = propagate_dark(m1, s.dark_interval(), r);
            const auto cf = correlators_after_pulse2(mt, m1, r, s);
            CHECK(std::abs(tt.a1a2 - cf.a1a2) < 1e-6 * std::abs(cf.a1a2));
            CHECK(tt.n_a_T2 == doctest::Approx(cf.n_a_T2).epsilon(1e-6));
            if (ratio != 1.0) {
                CHECK(std::abs(cf.a2a2dagdag) > 1e-2);
                CHECK(std::abs(tt.a2a2dagdag - cf.a2a2dagdag)
                      < 1e-6 * std::abs(cf.a2a2dagdag));
                CHECK(std::abs(tt.a1a2dag - cf.a1a2dag) < 1e-6 * std::abs(cf.a1a2dag));
            } else {
                CHECK(std::abs(tt.a2a2dagdag) < 1e-7);
            }
        }
    }
    SUBCASE("conjugation pairing of the regression vectors") {
        const auto s = reference_schedule(r, 0.7);
        const auto gd = build_generator(Stage::Dark, r);
        const auto g2 = build_generator(Stage::Pulse2, r);
        // canonical-closure initial legs, as used by regress_two_time
        Vector4cd u, w;
        u << S1(0, 0), S1(0, 1), S1(2, 0) + 1.0, std::conj(S1(2, 1));
        w << S1(2, 0), S1(2, 1), std::conj(S1(0, 0)), std::conj(S1(0, 1));
        u = integrate_vector(g2, integrate_vector(gd, u, s.dark_interval()), s.pulse2_duration());
        w = integrate_vector(g2, integrate_vector(gd, w, s.dark_interval()), s.pulse2_duration());
        // <a^dag(T1) a^dag(T2)> = <a(T1) a(T2)>* holds exactly
        CHECK(std::abs(w(2) - std::conj(u(0))) < 1e-8 * std::abs(u(0)));
        // <a(T1) a^dag(T2)> and <a^dag(T1) a(T2)>* differ by exactly the
        // drift-propagated commutator
        const auto c2 = pulse2_coefficients(r);
        const double comm = g_minus(s.pulse2_duration(), c2)
                          * std::exp(-r.cavity_decay() * s.dark_interval());
        CHECK(std::abs(u(2) - std::conj(w(0)) - comm) < 1e-8 * std::abs(u(2)));
    }
}

TEST_CASE("commutator bookkeeping balances feeds against damping") {
    for (double k : {0.8e3, 6.4e3, 11e3, 16e3}) {
        const auto r = derive_rates(sec4(k / 1e3));
        const auto s = reference_schedule(r);
        const auto d = commutator_drift(r, s);
        INFO("kappa = ", k);
        CHECK(d.max_err_a < 1e-9);
        CHECK(d.max_err_b < 1e-9);
    }
}

TEST_CASE("end-to-end pipeline comparison") {
    SUBCASE("vacuum protocol gives vacuum on both routes") {
        PhysicalParams p = sec4();
        p.omega1 = p.omega2 = 0.0;
        const auto r = derive_rates(p);
        PulseSchedule s;
        s.t1 = 40e-6;
        s.t = s.t1 + 2.0 / r.cavity_decay();
        s.t2 = s.t + 20e-6;
        s.tm = std::min(optimal_tm(r), s.dark_interval());
        const auto res = oracle_pipeline(p, s, s.tm);
        CHECK(res.max_rel_err < 1e-9);
        CHECK((res.V_out - vacuum_cov()).cwiseAbs().maxCoeff() < 1e-9);
    }
    SUBCASE("reference points agree to well under 1e-6") {
        for (double k : {0.8e3, 16e3}) {
            const PhysicalParams p = sec4(k / 1e3);
            const auto r = derive_rates(p);
            for (double ratio : {1.0, 0.5}) {
                const auto s = reference_schedule(r, ratio);
                const auto res = oracle_pipeline(p, s, s.tm);
                INFO("kappa = ", k, " ratio = ", ratio);
                CHECK(res.max_rel_err < 1e-7);
                CHECK(res.aa_drift_pulse1 < 1e-10);
            }
        }
    }
    SUBCASE("ordering asymmetry diagnostic sits at the truncation scale") {
        // The effective equations conserve cross-mode commutators only up to
        // the shared-emission cross-diffusion; the residual is small but
        // genuinely nonzero and is reported, not hidden.
        const PhysicalParams p = sec4();
        const auto r = derive_rates(p);
        const auto s = reference_schedule(r);
        const auto res = oracle_pipeline(p, s, s.tm);
        CHECK(res.cross_order_residual > 0.01);
        CHECK(res.cross_order_residual < 0.2);
    }
    SUBCASE("moment sets at the stage boundaries are exposed") {
        const PhysicalParams p = sec4();
        const auto r = derive_rates(p);
        const auto s = reference_schedule(r);
        const auto res = oracle_pipeline(p, s, s.tm);
        const auto cf = moments_after_pulse1(r, s.t1);
        CHECK(res.at_t1.n_a == doctest::Approx(cf.n_a).epsilon(1e-8));
        CHECK(res.at_t.n_b
              == doctest::Approx(propagate_dark(cf, s.dark_interval(), r).n_b).epsilon(1e-8));
    }
}

TEST_CASE("both routes agree over general geometry and drive phases") {
    // Complex couplings, tilted laser and cavity axes, either detuning sign:
    // the closed forms and the ODE route must stay interchangeable away from
    // the reference configuration too.
    std::mt19937_64 rng(99);
    auto logu = [&](double lo, double hi) {
        std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
        return std::exp(u(rng));
    };
    std::uniform_real_distribution<double> ang(-1.3, 1.3), ur(0.3, 1.7), uph(0.0, 6.28);
    int ran = 0;
    for (int i = 0; i < 200 && ran < 40; ++i) {
        PhysicalParams p;
        p.gamma = angular(logu(1e6, 10e6));
        p.kappa = angular(logu(0.5e3, 20e3));
        p.nu = angular(logu(0.5e6, 2e6));
        p.eta = logu(0.03, 0.15);
        p.g_c = std::polar(angular(logu(0.3e6, 3e6)), uph(rng));
        p.omega1 = std::polar(angular(logu(3e6, 20e6)), uph(rng));
        p.omega2 = std::polar(angular(logu(3e6, 20e6)), uph(rng));
        p.delta1 = (i % 3 ? -1.0 : 1.0) * angular(logu(60e6, 300e6));
        p.kappa_h = angular(logu(2.0, 100.0));
        p.theta_L = ang(rng);
        p.theta_c = ang(rng);
        p.phi_c = ang(rng);
        try {
            const auto r = derive_rates(p);
            ScheduleSpec spec;
            spec.ratio = ur(rng);
            spec.t1 = logu(0.3, 2.0) / std::abs(r.chi1());
            const auto pr = run_point(p, spec);
            if (!pr.physical) continue;
            const auto res = oracle_pipeline(p, pr.schedule, pr.schedule.tm);
            INFO("config ", i, ": thL=", p.theta_L, " thc=", p.theta_c, " phc=", p.phi_c);
            CHECK(res.max_rel_err < 1e-7);
            ++ran;
        } catch (const std::exception&) {
            // overdamped transfer or out-of-regime draw; not part of the claim
        }
    }
    CHECK(ran >= 40);
}
