#include "pulsepair/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pulsepair {

void SweepSpec::validate() const {
    if (!(from < to)) throw std::invalid_argument("sweep requires from < to");
    if (steps < 2) throw std::invalid_argument("sweep requires steps >= 2");
}

namespace {

const char* parameter_name(SweepParameter p) {
    switch (p) {
        case SweepParameter::T1: return "T1";
        case SweepParameter::TMinusT1: return "T_minus_T1";
        case SweepParameter::T2MinusTRatio: return "T2_minus_T_ratio";
        case SweepParameter::Kappa: return "kappa";
        case SweepParameter::KappaH: return "kappa_h";
        case SweepParameter::Omega1: return "Omega1";
        case SweepParameter::Eta: return "eta";
    }
    return "?";
}

SweepRow evaluate_row(const PhysicalParams& base, const SweepSpec& spec,
                      double value, const RunFlags& flags) {
    SweepRow row;
    row.value = value;
    PhysicalParams p = base;
    ScheduleSpec sched = spec.base;

    switch (spec.parameter) {
        case SweepParameter::T1: sched.t1 = value; break;
        case SweepParameter::TMinusT1: sched.gap = value; break;
        case SweepParameter::T2MinusTRatio: sched.ratio = value; break;
        case SweepParameter::Kappa: p.kappa = value; break;
        case SweepParameter::KappaH: p.kappa_h = value; break;
        case SweepParameter::Omega1: p.omega1 = value; break;
        case SweepParameter::Eta: p.eta = value; break;
    }
    switch (spec.policy) {
        case SchedulePolicy::Fig3:  // gap tied to the cavity lifetime, sweep ratio
        case SchedulePolicy::Fig5:  // gap tied, optimal transfer
            sched.gap = -1.0;
            break;
        case SchedulePolicy::Fig4:  // optimal transfer, sweep the gap
            sched.ratio = 1.0;
            break;
        case SchedulePolicy::Custom:
            break;
    }

    try {
        const PointResult pr = run_point(p, sched, flags);
        row.ok = true;
        row.physical = pr.physical;
        row.E_N = pr.ent.E_N;
        row.eta_minus = pr.ent.eta_minus;
        row.xi_epr = pr.ent.xi_epr;
        row.nbar1 = pr.ent.nbar_pulse1;
        row.nbar2 = pr.ent.nbar_pulse2;
        row.alpha = pr.alpha;
        row.dt2_opt = pr.dt2_opt;
        row.warnings = static_cast<int>(pr.warnings.size());
    } catch (const std::exception& e) {
        row.ok = false;
        row.error = e.what();
    }
    return row;
}

}  // namespace

SweepResult run_sweep(const PhysicalParams& p, const SweepSpec& spec,
                      const RunFlags& flags, Execution exec) {
    spec.validate();
    SweepResult res;
    res.spec = spec;
    res.rows.resize(spec.steps);
    const double step = (spec.to - spec.from) / (spec.steps - 1);

    if (exec == Execution::Parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
        for (int i = 0; i < spec.steps; ++i)
            res.rows[i] = evaluate_row(p, spec, spec.from + i * step, flags);
    } else {
        for (int i = 0; i < spec.steps; ++i)
            res.rows[i] = evaluate_row(p, spec, spec.from + i * step, flags);
    }
    return res;
}

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace

void write_csv(std::ostream& os, const SweepResult& r) {
    os << "# swept parameter: " << parameter_name(r.spec.parameter)
       << " (times s, rates rad/s)\n";
    os << "# columns: value,E_N,eta_minus,xi_EPR,nbar1,nbar2,alpha,dT2_opt,warnings,ok,physical\n";
    os << "value,E_N,eta_minus,xi_EPR,nbar1,nbar2,alpha,dT2_opt,warnings,ok,physical\n";
    for (const auto& row : r.rows) {
        os << fmt(row.value) << ',' << fmt(row.E_N) << ',' << fmt(row.eta_minus) << ','
           << fmt(row.xi_epr) << ',' << fmt(row.nbar1) << ',' << fmt(row.nbar2) << ','
           << fmt(row.alpha) << ',' << fmt(row.dt2_opt) << ',' << row.warnings << ','
           << (row.ok ? 1 : 0) << ',' << (row.physical ? 1 : 0) << '\n';
    }
}

void write_json(std::ostream& os, const SweepResult& r) {
    nlohmann::json j;
    j["parameter"] = parameter_name(r.spec.parameter);
    j["rows"] = nlohmann::json::array();
    for (const auto& row : r.rows) {
        nlohmann::json o;
        o["value"] = row.value;
        o["E_N"] = row.E_N;
        o["eta_minus"] = row.eta_minus;
        o["xi_EPR"] = row.xi_epr;
        o["nbar1"] = row.nbar1;
        o["nbar2"] = row.nbar2;
        o["alpha"] = row.alpha;
        o["dT2_opt"] = row.dt2_opt;
        o["warnings"] = row.warnings;
        o["ok"] = row.ok;
        o["physical"] = row.physical;
        if (!row.ok) o["error"] = row.error;
        j["rows"].push_back(std::move(o));
    }
    os << j.dump(2) << '\n';
}

std::vector<double> default_kappa_list() {
    return {angular(16e3), angular(11e3), angular(6.4e3), angular(0.8e3)};
}

FigureData reproduce_figure(int which, const PhysicalParams& base,
                            const std::vector<double>& kappas, int steps,
                            const RunFlags& flags, Execution exec) {
    if (which < 3 || which > 5)
        throw std::invalid_argument("figure index must be 3, 4 or 5");
    FigureData fig;
    fig.which = which;
    std::vector<double> ks = kappas.empty() ? default_kappa_list() : kappas;

    auto spec_for = [&](double kappa_h) {
        SweepSpec s;
        s.steps = steps;
        switch (which) {
            case 3:
                s.parameter = SweepParameter::T2MinusTRatio;
                s.policy = SchedulePolicy::Fig3;
                s.from = 0.2;
                s.to = 2.0;
                break;
            case 4:
                s.parameter = SweepParameter::TMinusT1;
                s.policy = SchedulePolicy::Fig4;
                s.from = 0.2e-3;
                // out past the heating time, where the entanglement dies
                s.to = kappa_h > 0.0 ? 1.5 / kappa_h : 12e-3;
                break;
            case 5:
                s.parameter = SweepParameter::T1;
                s.policy = SchedulePolicy::Fig5;
                s.from = 2e-6;
                s.to = 80e-6;
                break;
        }
        return s;
    };

    for (double k : ks) {
        FigureCurve c;
        c.kappa = k;
        c.noiseless = false;
        PhysicalParams p = base;
        p.kappa = k;
        c.sweep = run_sweep(p, spec_for(p.kappa_h), flags, exec);
        fig.curves.push_back(std::move(c));
    }
    // Comparison curve: smallest kappa with the noise channels switched off.
    FigureCurve c;
    c.kappa = ks.back();
    c.noiseless = true;
    PhysicalParams p = base;
    p.kappa = c.kappa;
    RunFlags f = flags;
    f.noiseless = true;
    c.sweep = run_sweep(p, spec_for(p.kappa_h), f, exec);
    fig.curves.push_back(std::move(c));
    return fig;
}

}  // namespace pulsepair
