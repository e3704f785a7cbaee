#include "pulsepair/oracle.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

namespace pulsepair {

namespace {

// Embedded Dormand-Prince 5(4) with step-size control.  The systems here are
// small linear moment equations; tolerances are far below the 1e-10 the
// comparisons ask for.
template <typename State, typename Rhs>
State rk45(const Rhs& rhs, State y, double T, double rtol = 1e-11, double atol = 1e-16) {
    if (T <= 0.0) return y;
    double t = 0.0;
    double h = T / 64.0;
    const double hmin = T * 1e-14;
    int guard = 0;
    while (t < T) {
        if (++guard > 2000000) throw std::runtime_error("integrator stalled");
        if (t + h > T) h = T - t;
        const State k1 = rhs(y);
        const State k2 = rhs(y + h * (k1 / 5.0));
        const State k3 = rhs(y + h * (3.0 / 40.0 * k1 + 9.0 / 40.0 * k2));
        const State k4 = rhs(y + h * (44.0 / 45.0 * k1 - 56.0 / 15.0 * k2 + 32.0 / 9.0 * k3));
        const State k5 = rhs(y + h * (19372.0 / 6561.0 * k1 - 25360.0 / 2187.0 * k2
                                      + 64448.0 / 6561.0 * k3 - 212.0 / 729.0 * k4));
        const State k6 = rhs(y + h * (9017.0 / 3168.0 * k1 - 355.0 / 33.0 * k2
                                      + 46732.0 / 5247.0 * k3 + 49.0 / 176.0 * k4
                                      - 5103.0 / 18656.0 * k5));
        const State y5 = y + h * (35.0 / 384.0 * k1 + 500.0 / 1113.0 * k3 + 125.0 / 192.0 * k4
                                  - 2187.0 / 6784.0 * k5 + 11.0 / 84.0 * k6);
        const State k7 = rhs(y5);
        const State y4 = y + h * (5179.0 / 57600.0 * k1 + 7571.0 / 16695.0 * k3
                                  + 393.0 / 640.0 * k4 - 92097.0 / 339200.0 * k5
                                  + 187.0 / 2100.0 * k6 + k7 / 40.0);
        const double scale = atol + rtol * std::max(y.cwiseAbs().maxCoeff(),
                                                    y5.cwiseAbs().maxCoeff());
        const double err = (y5 - y4).cwiseAbs().maxCoeff() / scale;
        if (err <= 1.0) {
            t += h;
            y = y5;
        }
        const double fac = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
        h *= std::clamp(fac, 0.2, 5.0);
        h = std::max(h, hmin);
    }
    return y;
}

}  // namespace

StageGenerator build_generator(Stage stage, const DerivedRates& r, bool shared_se_channel) {
    StageGenerator g;
    g.stage = stage;
    g.shared_se_channel = shared_se_channel;
    const double Ga = r.cavity_decay();

    Matrix4cd& M = g.drift;
    Matrix4cd& D = g.diffusion;

    // Channels common to every stage: cavity input (vacuum) and the trap
    // bath.  The bath feeds are the kappa_b-safe forms of 2 kb (N+1) and
    // 2 kb N with N = kappa_h / (2 kappa_b).
    D(0, 2) += 2.0 * r.kappa + 2.0 * r.kappa_L;
    D(1, 3) += r.kappa_h + 2.0 * r.kappa_b;
    D(3, 1) += r.kappa_h;

    switch (stage) {
        case Stage::Pulse1: {
            const complexd chi = r.chi1();
            const double Gb = r.motion_decay_1();
            M(0, 0) = -Ga; M(0, 3) = chi;
            M(1, 1) = -Gb; M(1, 2) = chi;
            M(2, 2) = -Ga; M(2, 1) = std::conj(chi);
            M(3, 3) = -Gb; M(3, 0) = std::conj(chi);
            D(1, 3) += 2.0 * std::norm(r.kbar_b_p1);
            D(3, 1) += 2.0 * std::norm(r.kbar_b_m1);
            if (shared_se_channel) {
                // One spontaneous-emission mode drives both the field and the
                // motion; its only nonzero pairings are the anti-normal ones.
                D(0, 1) += -2.0 * std::conj(r.kbar_L) * r.kbar_b_m1;
                D(3, 2) += -2.0 * std::conj(r.kbar_b_m1) * r.kbar_L;
            }
            break;
        }
        case Stage::Dark: {
            M(0, 0) = -Ga;
            M(1, 1) = complexd(-r.kappa_b, r.delta_1b);
            M(2, 2) = -Ga;
            M(3, 3) = complexd(-r.kappa_b, -r.delta_1b);
            break;
        }
        case Stage::Pulse2: {
            const complexd chi = r.chi2();
            const double Gb = r.motion_decay_2();
            M(0, 0) = -Ga; M(0, 1) = chi;
            M(1, 0) = -std::conj(chi); M(1, 1) = -Gb;
            M(2, 2) = -Ga; M(2, 3) = std::conj(chi);
            M(3, 2) = -chi; M(3, 3) = -Gb;
            D(1, 3) += 2.0 * std::norm(r.kbar_b_p2);
            D(3, 1) += 2.0 * std::norm(r.kbar_b_m2);
            if (shared_se_channel) {
                D(0, 3) += 2.0 * std::conj(r.kbar_L) * std::conj(r.kbar_b_p2);
                D(1, 2) += 2.0 * r.kbar_b_p2 * r.kbar_L;
            }
            break;
        }
    }
    return g;
}

Matrix4cd vacuum_state_matrix() {
    Matrix4cd S = Matrix4cd::Zero();
    S(0, 2) = 1.0;  // <a a^dag>
    S(1, 3) = 1.0;  // <b b^dag>
    return S;
}

Matrix4cd integrate_state(const StageGenerator& g, const Matrix4cd& S0, double t) {
    auto rhs = [&](const Matrix4cd& S) -> Matrix4cd {
        return g.drift * S + S * g.drift.transpose() + g.diffusion;
    };
    return rk45(rhs, S0, t);
}

Vector4cd integrate_vector(const StageGenerator& g, const Vector4cd& u0, double t) {
    auto rhs = [&](const Vector4cd& u) -> Vector4cd { return g.drift * u; };
    return rk45(rhs, u0, t);
}

Matrix4cd embed_moments(const MomentSet& m) {
    Matrix4cd S = Matrix4cd::Zero();
    S(2, 0) = m.n_a;
    S(0, 2) = m.n_a + 1.0;
    S(3, 1) = m.n_b;
    S(1, 3) = m.n_b + 1.0;
    S(0, 1) = m.c_ab;
    S(1, 0) = m.c_ab;
    S(2, 3) = std::conj(m.c_ab);
    S(3, 2) = std::conj(m.c_ab);
    S(0, 0) = m.aa;
    S(2, 2) = std::conj(m.aa);
    return S;
}

MomentSet extract_moments(const Matrix4cd& S, double stage_time) {
    MomentSet m;
    m.n_a = S(2, 0).real();
    m.n_b = S(3, 1).real();
    m.c_ab = S(0, 1);
    m.aa = S(0, 0);
    m.stage_time = stage_time;
    return m;
}

MomentSet integrate_moments(const StageGenerator& g, const MomentSet& m0, double t) {
    return extract_moments(integrate_state(g, embed_moments(m0), t), m0.stage_time + t);
}

TwoTimeSet regress_two_time(const DerivedRates& r, const Matrix4cd& S_at_t1,
                            const PulseSchedule& s) {
    const StageGenerator dark = build_generator(Stage::Dark, r);
    const StageGenerator p2 = build_generator(Stage::Pulse2, r);
    // <a(T1) v(t)> evolves under the drift alone.  The initial values are
    // read off the integrated state with the canonical commutators imposed
    // (<a a^dag> = n_a + 1, reversed cross orderings identified); the
    // truncated equations only conserve those brackets approximately, and
    // the closed-form route books them as exact.
    Vector4cd u;
    u(0) = S_at_t1(0, 0);                  // <a a>
    u(1) = S_at_t1(0, 1);                  // <a b>
    u(2) = S_at_t1(2, 0) + 1.0;            // <a a^dag> = n_a + 1
    u(3) = std::conj(S_at_t1(2, 1));       // <a b^dag> = <a^dag b>*
    u = integrate_vector(p2, integrate_vector(dark, u, s.dark_interval()), s.pulse2_duration());

    Matrix4cd S2 = integrate_state(dark, S_at_t1, s.dark_interval());
    const Matrix4cd ST = S2;
    S2 = integrate_state(p2, S2, s.pulse2_duration());

    // Equal-time anomalous moment at T2, composed through the pulse-2
    // response columns acting on the canonical state at T:
    // <a a>(T2) = Paa^2 <a a>(T) + 2 Paa Pab <a b>(T) + Pab^2 <b b>(T).
    const Vector4cd col_a = integrate_vector(p2, Vector4cd::Unit(0), s.pulse2_duration());
    const Vector4cd col_b = integrate_vector(p2, Vector4cd::Unit(1), s.pulse2_duration());
    const complexd Paa = col_a(0), Pab = col_b(0);
    const complexd aa_T2 = Paa * Paa * ST(0, 0) + 2.0 * Paa * Pab * ST(0, 1)
                         + Pab * Pab * ST(1, 1);

    TwoTimeSet tt;
    tt.a1a2 = u(0);
    tt.a1a2dag = u(2);
    tt.a2a2dagdag = std::conj(aa_T2);
    tt.n_a_T2 = S2(2, 0).real();
    return tt;
}

CommutatorDrift commutator_drift(const DerivedRates& r, const PulseSchedule& s) {
    // Augmented state: the 16 entries of S plus the anti-normally fed
    // occupation trackers of both modes.  The trackers read the same coupling
    // sources as <a^dag a>, <b^dag b> but receive the anti-normal feeds; the
    // difference must hold at exactly 1 whenever each channel's feed
    // asymmetry balances its damping.
    using State = Eigen::Matrix<complexd, 18, 1>;

    auto run_stage = [&](Stage st, State y, double T) {
        const StageGenerator g = build_generator(st, r);
        auto rhs = [&g](const State& y) -> State {
            Matrix4cd S;
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) S(i, j) = y(4 * i + j);
            const Matrix4cd dS = g.drift * S + S * g.drift.transpose() + g.diffusion;
            State dy;
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) dy(4 * i + j) = dS(i, j);
            const Matrix4cd& M = g.drift;
            // d<na~>/dt shares the off-diagonal sources of dS(2,0) and swaps
            // the feed for the anti-normal one (and likewise for mode b).
            auto tracker_src = [&](int row, int col) {
                complexd src = 0.0;
                for (int k = 0; k < 4; ++k) {
                    if (k != row) src += M(row, k) * S(k, col);
                    if (k != col) src += M(col, k) * S(row, k);
                }
                return src;
            };
            dy(16) = tracker_src(2, 0) + (M(2, 2) + M(0, 0)) * y(16) + g.diffusion(0, 2);
            dy(17) = tracker_src(3, 1) + (M(3, 3) + M(1, 1)) * y(17) + g.diffusion(1, 3);
            return dy;
        };
        return rk45(rhs, y, T);
    };

    State y = State::Zero();
    const Matrix4cd S0 = vacuum_state_matrix();
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) y(4 * i + j) = S0(i, j);
    y(16) = 1.0;  // <a a^dag> tracker
    y(17) = 1.0;  // <b b^dag> tracker

    CommutatorDrift d;
    auto record = [&](const State& y) {
        const double na = y(2 * 4 + 0).real();
        const double nb = y(3 * 4 + 1).real();
        d.max_err_a = std::max(d.max_err_a, std::abs(y(16).real() - na - 1.0));
        d.max_err_b = std::max(d.max_err_b, std::abs(y(17).real() - nb - 1.0));
    };
    y = run_stage(Stage::Pulse1, y, s.t1);
    record(y);
    y = run_stage(Stage::Dark, y, s.dark_interval());
    record(y);
    y = run_stage(Stage::Pulse2, y, s.pulse2_duration());
    record(y);
    return d;
}

namespace {

// Window kernels of the collected output noise; used by the mix-term
// quadrature route.
double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    double sum = f(a) + f(b);
    const double h = (b - a) / n;
    for (int i = 1; i < n; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return sum * h / 3.0;
}

}  // namespace

OracleResult oracle_pipeline(const PhysicalParams& p, const PulseSchedule& s,
                             double tm, ChiMode mode, bool noiseless) {
    s.validate();
    const DerivedRates r = derive_rates(p, mode, noiseless);

    // --- ODE route ---
    const StageGenerator g1 = build_generator(Stage::Pulse1, r);
    const StageGenerator gd = build_generator(Stage::Dark, r);
    const StageGenerator g2 = build_generator(Stage::Pulse2, r);

    Matrix4cd S1 = integrate_state(g1, vacuum_state_matrix(), s.t1);
    Matrix4cd ST = integrate_state(gd, S1, s.dark_interval());

    OracleResult res;
    res.at_t1 = extract_moments(S1, s.t1);
    res.at_t = extract_moments(ST, s.t);
    res.aa_drift_pulse1 = std::abs(ST(0, 0));
    res.cross_order_residual = std::abs(S1(0, 1) - S1(1, 0));

    const TwoTimeSet tt = regress_two_time(r, S1, s);
    const double na1 = res.at_t1.n_a;

    // Assemble V from the regression correlators (deliberately restated here
    // rather than shared with the closed-form path).
    CovMatrix4 V = CovMatrix4::Zero();
    V(0, 0) = V(1, 1) = na1 + 0.5;
    V(2, 2) = tt.n_a_T2 + tt.a2a2dagdag.real() + 0.5;
    V(3, 3) = tt.n_a_T2 - tt.a2a2dagdag.real() + 0.5;
    V(2, 3) = V(3, 2) = -tt.a2a2dagdag.imag();
    const complexd sc = tt.a1a2;
    const complexd msym = tt.a1a2dag * (na1 + 0.5) / (na1 + 1.0);
    V(0, 2) = V(2, 0) = sc.real() + msym.real();
    V(1, 3) = V(3, 1) = msym.real() - sc.real();
    V(0, 3) = V(3, 0) = sc.imag() - msym.imag();
    V(1, 2) = V(2, 1) = sc.imag() + msym.imag();
    res.V = V;

    // Output matrix: the window overlap alpha is elementary and shared; the
    // mix term is rebuilt from the ODE pulse-2 response plus quadrature over
    // the window kernels.
    const double G = r.cavity_decay();
    const double al = alpha_factor(tm, r);
    const Vector4cd resp = integrate_vector(g2, Vector4cd::Unit(0), s.pulse2_duration());
    const double gm_ode = resp(0).real();
    auto Ka = [&](double t) {
        const double tau = s.t1 + tm - t;
        return (r.kappa - r.kappa_L) / G - (2.0 * r.kappa / G) * std::exp(-G * tau);
    };
    auto KL = [&](double t) {
        const double tau = s.t1 + tm - t;
        return (1.0 - std::exp(-G * tau)) / G;
    };
    const double overlap = simpson(
        [&](double t) {
            return std::exp(-G * (s.t - t)) * (Ka(t) + 2.0 * r.kappa_L * KL(t));
        },
        s.t1, s.t1 + tm, 4096);
    const double mix = 0.5 * al * std::sqrt(2.0 * r.kappa / tm) * gm_ode * overlap;

    CovMatrix4 Vout = al * al * V + v_in_matrix(al);
    Vout(0, 2) += mix;
    Vout(2, 0) += mix;
    Vout(1, 3) += mix;
    Vout(3, 1) += mix;
    res.V_out = Vout;

    // --- closed-form route for the comparison ---
    MomentSet m1 = moments_after_pulse1(r, s.t1);
    MomentSet mt = propagate_dark(m1, s.dark_interval(), r);
    const TwoTimeSet tta = correlators_after_pulse2(mt, m1, r, s);
    const CovMatrix4 Va = intracavity_cov(tta, m1.n_a);
    const CovMatrix4 Vouta = output_cov(Va, s, r, tm);

    res.max_rel_err = 0.0;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            const double denom = std::max(std::abs(Vouta(i, j)), 0.5);
            const double e = std::abs(Vout(i, j) - Vouta(i, j)) / denom;
            if (e > res.max_rel_err) {
                res.max_rel_err = e;
                res.worst_row = i;
                res.worst_col = j;
            }
        }
    }
    return res;
}

}  // namespace pulsepair
