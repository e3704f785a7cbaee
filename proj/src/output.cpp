#include "pulsepair/output.hpp"

#include <cmath>
#include <stdexcept>

namespace pulsepair {

double alpha_factor(double tm, const DerivedRates& r) {
    if (!(tm > 0.0)) throw std::invalid_argument("measurement window must be > 0");
    const double G = r.cavity_decay();
    return std::sqrt(2.0 * r.kappa / tm) * (-std::expm1(-G * tm)) / G;
}

double alpha_maximizer_x() {
    // Stationarity of (1-e^{-x})/sqrt(x): 2x e^{-x} = 1 - e^{-x}.
    static const double root = [] {
        double x = 1.25;
        for (int i = 0; i < 64; ++i) {
            const double f = std::exp(x) - 2.0 * x - 1.0;
            const double df = std::exp(x) - 2.0;
            const double step = f / df;
            x -= step;
            if (std::abs(step) < 1e-15) break;
        }
        return x;
    }();
    return root;
}

double optimal_tm(const DerivedRates& r) {
    const double G = r.cavity_decay();
    if (!(G > 0.0)) throw std::invalid_argument("cavity decay must be > 0");
    return alpha_maximizer_x() / G;
}

CovMatrix4 v_in_matrix(double alpha) {
    if (alpha < 0.0 || alpha > 1.0)
        throw std::invalid_argument("alpha must lie in [0,1]");
    return 0.5 * (1.0 - alpha * alpha) * CovMatrix4::Identity();
}

double v_mix_scalar(const PulseSchedule& s, const DerivedRates& r, double tm) {
    const double G = r.cavity_decay();
    const double gm = g_minus(s.pulse2_duration(), pulse2_coefficients(r));
    const double al = alpha_factor(tm, r);
    return al * std::sqrt(r.kappa / (2.0 * tm)) * std::exp(-G * s.dark_interval())
         * gm * std::expm1(-G * tm) / G;
}

CovMatrix4 output_cov(const CovMatrix4& V, const PulseSchedule& s,
                      const DerivedRates& r, double tm) {
    if (tm > s.dark_interval() * (1.0 + 1e-12))
        throw std::invalid_argument("output modes overlap: tm exceeds t - t1");
    const double al = alpha_factor(tm, r);
    CovMatrix4 out = al * al * V + v_in_matrix(al);
    const double mix = v_mix_scalar(s, r, tm);
    out(0, 2) += mix;
    out(2, 0) += mix;
    out(1, 3) += mix;
    out(3, 1) += mix;
    return out;
}

}  // namespace pulsepair
