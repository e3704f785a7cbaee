#include "pulsepair/pipeline.hpp"

#include <cmath>
#include <stdexcept>

namespace pulsepair {

PointResult run_point(const PhysicalParams& p, const ScheduleSpec& spec,
                      const RunFlags& flags) {
    PointResult res;
    res.rates = derive_rates(p, flags.chi_mode, flags.noiseless);
    const DerivedRates& r = res.rates;

    if (!(spec.t1 > 0.0)) throw std::invalid_argument("t1 must be > 0");
    const double gap = spec.gap > 0.0 ? spec.gap : 2.0 / r.cavity_decay();

    double dt2 = spec.dt2_absolute;
    const StageCoefficients p2 = pulse2_coefficients(r);
    try {
        res.dt2_opt = optimal_transfer_time(p2);
    } catch (const std::domain_error&) {
        res.dt2_opt = 0.0;
        if (dt2 < 0.0) throw;  // ratio scheduling needs the optimum to exist
    }
    if (dt2 < 0.0) dt2 = spec.ratio * res.dt2_opt;
    if (!(dt2 > 0.0)) throw std::invalid_argument("second pulse duration must be > 0");

    PulseSchedule& s = res.schedule;
    s.t1 = spec.t1;
    s.t = spec.t1 + gap;
    s.t2 = s.t + dt2;
    if (spec.tm > 0.0) {
        s.tm = spec.tm;
    } else {
        s.tm = optimal_tm(r);
        if (s.tm > gap) {
            s.tm = gap;
            res.warnings.push_back(
                "measurement window clamped to the dark interval (non-overlap)");
        }
    }
    s.validate();

    res.at_t1 = moments_after_pulse1(r, s.t1, flags.integrals);
    res.at_t = propagate_dark(res.at_t1, s.dark_interval(), r);
    res.regime = validate_regime(p, r, std::max(res.at_t1.n_a, 1.0));
    for (const auto& c : res.regime.checks) {
        if (c.status == CheckStatus::Fail)
            res.warnings.push_back("regime check failed: " + c.name);
        else if (c.status == CheckStatus::Warn)
            res.warnings.push_back("regime check marginal: " + c.name);
    }

    if (!res.at_t1.physical() || !res.at_t.physical()) {
        res.physical = false;
        res.warnings.push_back(
            "perturbative validity exceeded: moment set left the physical domain");
    }

    res.two_time = correlators_after_pulse2(res.at_t, res.at_t1, r, s, flags.integrals);
    res.V = intracavity_cov(res.two_time, res.at_t1.n_a);
    res.V_out = output_cov(res.V, s, r, s.tm);
    res.window.tm = s.tm;
    res.window.alpha = alpha_factor(s.tm, r);
    res.window.tm_optimal = optimal_tm(r);
    res.alpha = res.window.alpha;
    res.v_mix = v_mix_scalar(s, r, s.tm);

    if (!is_physical(res.V_out)) {
        res.physical = false;
        res.warnings.push_back("output correlation matrix not physical");
    }

    res.ent = entanglement_report(res.V_out, res.at_t1.n_a, res.two_time.n_a_T2);
    return res;
}

}  // namespace pulsepair
