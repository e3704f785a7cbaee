#pragma once

#include <complex>
#include <numbers>
#include <optional>
#include <string>

namespace pulsepair {

using complexd = std::complex<double>;

inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Configuration files carry ordinary frequencies in Hz; everything internal
// is angular (rad/s).
inline double angular(double hz) { return two_pi * hz; }
inline complexd angular(complexd hz) { return two_pi * hz; }

// Laboratory inputs: trap, cavity, laser drive, geometry, noise rates.
// All rates angular (rad/s), angles in radians.
struct PhysicalParams {
    double gamma = 0.0;       // dipole linewidth
    double kappa = 0.0;       // cavity amplitude decay
    double kappa_h = 0.0;     // motional heating rate
    double nu = 0.0;          // trap frequency
    double eta = 0.0;         // Lamb-Dicke parameter
    complexd g_c{0.0, 0.0};   // vacuum Rabi coupling
    complexd omega1{0.0, 0.0};  // first-pulse Rabi frequency
    complexd omega2{0.0, 0.0};  // second-pulse Rabi frequency
    double delta1 = 0.0;      // laser-dipole detuning of pulse 1, signed
    double theta_L = 0.0;     // laser direction vs trap axis
    double theta_c = 0.0;     // cavity axis vs trap axis
    double phi_c = 0.0;       // trap-center offset phase in the mode function

    // Motional damping; when unset it defaults to kappa_h / 2000 so that the
    // implied thermal occupation is 1000 (deep in the pure-heating regime).
    std::optional<double> kappa_b_override;
    // Dipole detuning of pulse 2; defaults to delta1 - 2 nu.
    std::optional<double> delta2_override;

    double kappa_b() const {
        return kappa_b_override ? *kappa_b_override : kappa_h / 2000.0;
    }
    double delta2() const {
        return delta2_override ? *delta2_override : delta1 - 2.0 * nu;
    }

    // Throws std::invalid_argument when a basic invariant is broken.
    void validate() const;
};

// Sec-IV style defaults used by the reproduction harness; kappa is the one
// knob the reference curves scan over.
PhysicalParams reference_params(double kappa);

// Protocol timing.  Pulse 1 runs on [0, t1], the dark interval on [t1, t],
// pulse 2 on [t, t2]; each emitted pulse is integrated over a window tm.
struct PulseSchedule {
    double t1 = 0.0;
    double t = 0.0;
    double t2 = 0.0;
    double tm = 0.0;

    double dark_interval() const { return t - t1; }
    double pulse2_duration() const { return t2 - t; }
    void validate() const;  // enforces 0 < t1 < t < t2 and 0 < tm <= t - t1
};

}  // namespace pulsepair
