#pragma once

#include "pulsepair/moments.hpp"
#include "pulsepair/output.hpp"
#include "pulsepair/params.hpp"

namespace pulsepair {

// Independent numerical route: instead of the closed-form propagators and
// antiderivatives, integrate the moment ODEs of the stage Langevin equations
// directly and rebuild the output correlation matrix from them.
//
// The state is the ordered second-moment matrix S_ij = <v_i v_j> in the
// basis v = (a, b, a^dag, b^dag).  dS/dt = M S + S M^T + D, where D_ij is
// the full correlator <xi_i xi_j> of the noise entering row i paired with
// row j in that operator order; orderings matter (vacuum inputs feed the
// anti-normal entries only).

using Matrix4cd = Eigen::Matrix4cd;
using Vector4cd = Eigen::Vector4cd;

struct StageGenerator {
    Stage stage = Stage::Pulse1;
    Matrix4cd drift = Matrix4cd::Zero();
    Matrix4cd diffusion = Matrix4cd::Zero();
    // When false, the correlated appearance of the spontaneous-emission
    // noise in both mode equations is dropped (test fixture for the
    // negative control; the physical generator keeps it).
    bool shared_se_channel = true;
};

StageGenerator build_generator(Stage stage, const DerivedRates& r,
                               bool shared_se_channel = true);

// Vacuum initial S: <a a^dag> = <b b^dag> = 1, everything else zero.
Matrix4cd vacuum_state_matrix();

// Adaptive embedded Runge-Kutta to local tolerance ~1e-12 relative.
Matrix4cd integrate_state(const StageGenerator& g, const Matrix4cd& S0, double t);
Vector4cd integrate_vector(const StageGenerator& g, const Vector4cd& u0, double t);

// MomentSet-level wrappers of the same integrator.
Matrix4cd embed_moments(const MomentSet& m);
MomentSet extract_moments(const Matrix4cd& S, double stage_time);
MomentSet integrate_moments(const StageGenerator& g, const MomentSet& m0, double t);

// Two-time correlators via the regression rule: the vectors <a(T1) v(t)> and
// <a^dag(T1) v(t)> evolve under the drift alone for t > T1.
TwoTimeSet regress_two_time(const DerivedRates& r, const Matrix4cd& S_at_t1,
                            const PulseSchedule& s);

// Commutator bookkeeping: the paired normal/anti-normal occupations evolve
// with the same drift sources but different noise feeds; their difference
// must stay pinned at 1 when drift damping and feed asymmetry balance.
struct CommutatorDrift {
    double max_err_a = 0.0;  // max |<[a,a^dag]> - 1| over the protocol
    double max_err_b = 0.0;
};
CommutatorDrift commutator_drift(const DerivedRates& r, const PulseSchedule& s);

struct OracleResult {
    CovMatrix4 V = CovMatrix4::Zero();      // intracavity matrix, ODE route
    CovMatrix4 V_out = CovMatrix4::Zero();  // with window, admixture and mix term
    double max_rel_err = 0.0;               // vs the closed-form V_out
    int worst_row = 0, worst_col = 0;
    MomentSet at_t1;                        // ODE moments at the stage ends
    MomentSet at_t;
    double aa_drift_pulse1 = 0.0;  // |<a a>| at T (must stay ~0 from vacuum)
    // Size of the cross-mode ordering asymmetry |<a b> - <b a>| at T1: the
    // scale on which the truncated equations stop conserving commutators.
    double cross_order_residual = 0.0;
};

// Full end-to-end V_out via the ODE route, compared element-wise against the
// closed-form route.  Relative errors are measured against
// max(|closed-form element|, 1/2).
OracleResult oracle_pipeline(const PhysicalParams& p, const PulseSchedule& s,
                             double tm, ChiMode mode = ChiMode::Exact,
                             bool noiseless = false);

}  // namespace pulsepair
