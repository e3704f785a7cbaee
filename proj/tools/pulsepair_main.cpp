// Command-line front end: single-point runs, parameter sweeps, figure-data
// regeneration and the ODE cross-check, with CSV/JSON output.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "pulsepair/config.hpp"
#include "pulsepair/oracle.hpp"
#include "pulsepair/sweep.hpp"

using namespace pulsepair;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitPhysics = 2;
constexpr int kExitOracle = 3;

struct GlobalOpts {
    std::string config_path;
    std::string format = "csv";
    std::string out_path;
    std::string tm = "auto";
    bool noiseless = false;
    std::string chi = "exact";
    double delta1_mag = -1.0;        // ordinary Hz; overrides the config value
    std::string delta1_sign = "-";   // the reference parameter sets are red-detuned
};

RunFlags make_flags(const GlobalOpts& g) {
    RunFlags f;
    f.noiseless = g.noiseless;
    f.chi_mode = g.chi == "leading" ? ChiMode::Leading : ChiMode::Exact;
    return f;
}

double tm_value(const GlobalOpts& g) {
    if (g.tm == "auto") return -1.0;
    return std::stod(g.tm);
}

std::ostream& open_out(const GlobalOpts& g, std::ofstream& file) {
    if (g.out_path.empty()) return std::cout;
    file.open(g.out_path);
    if (!file) throw std::invalid_argument("cannot open output file: " + g.out_path);
    return file;
}

nlohmann::json rates_json(const DerivedRates& r) {
    auto cplx = [](complexd z) { return nlohmann::json{z.real(), z.imag()}; };
    nlohmann::json j;
    j["chi1"] = cplx(r.chi1());
    j["chi2"] = cplx(r.chi2());
    j["chi1_exact"] = cplx(r.chi1_exact);
    j["chi1_leading"] = cplx(r.chi1_leading);
    j["chi2_exact"] = cplx(r.chi2_exact);
    j["chi2_leading"] = cplx(r.chi2_leading);
    j["kappa_L"] = r.kappa_L;
    j["kbar_L"] = cplx(r.kbar_L);
    j["kappa_b_p1"] = r.kappa_b_p1;
    j["kappa_b_m1"] = r.kappa_b_m1;
    j["kappa_b_p2"] = r.kappa_b_p2;
    j["kappa_b_m2"] = r.kappa_b_m2;
    j["delta_prime"] = r.delta_prime;
    j["delta_nu"] = r.delta_nu;
    j["nu_prime"] = r.nu_prime;
    j["delta_1b"] = r.delta_1b;
    j["delta_2b"] = r.delta_2b;
    j["kappa_1S"] = r.kappa_1S;
    j["kappa_1D"] = r.kappa_1D;
    j["theta_1"] = r.theta_1;
    j["kappa_2S"] = r.kappa_2S;
    j["kappa_2D"] = r.kappa_2D;
    j["theta_2"] = cplx(r.theta_2);
    return j;
}

void print_rates_text(std::ostream& os, const PhysicalParams& p, const DerivedRates& r) {
    auto khz = [](double x) { return x / two_pi / 1e3; };
    os << "effective rates (2pi x kHz unless noted)\n";
    os << "  |chi1| = " << khz(std::abs(r.chi1())) << "   |chi2| = " << khz(std::abs(r.chi2()))
       << "   (mode: " << (r.chi_mode == ChiMode::Exact ? "exact" : "leading") << ")\n";
    os << "  kappa_L = " << khz(r.kappa_L) << "   kappa_b+-1 = " << khz(r.kappa_b_p1)
       << ", " << khz(r.kappa_b_m1) << "   kappa_b+-2 = " << khz(r.kappa_b_p2)
       << ", " << khz(r.kappa_b_m2) << '\n';
    os << "  delta' = " << khz(r.delta_prime) << "   delta_nu = " << r.delta_nu / two_pi
       << " Hz   delta_1b = " << r.delta_1b / two_pi << " Hz   delta_2b = "
       << r.delta_2b / two_pi << " Hz\n";
    os << "  kappa_1S/1D = " << khz(r.kappa_1S) << ", " << khz(r.kappa_1D)
       << "   theta_1 = " << khz(r.theta_1) << '\n';
    os << "  kappa_2S/2D = " << khz(r.kappa_2S) << ", " << khz(r.kappa_2D)
       << "   theta_2 = " << khz(r.theta_2.real());
    if (r.theta_2.imag() != 0.0) os << " + i " << khz(r.theta_2.imag());
    os << '\n';
    const auto f = resonance_frequencies(p, r);
    os << "  laser-cavity resonances: " << f.delta1_cavity / two_pi / 1e6 << " MHz, "
       << f.delta2_cavity / two_pi / 1e6 << " MHz\n";
}

void print_kv_csv(std::ostream& os, const nlohmann::json& j, const std::string& prefix = "") {
    for (const auto& [key, value] : j.items()) {
        const std::string name = prefix.empty() ? key : prefix + "." + key;
        if (value.is_object()) {
            print_kv_csv(os, value, name);
        } else if (value.is_array() && value.size() == 2 && value[0].is_number()) {
            os << name << ',' << value[0].dump() << ',' << value[1].dump() << '\n';
        } else if (value.is_primitive()) {
            os << name << ',' << value.dump() << '\n';
        }
    }
}

void print_point_text(std::ostream& os, const PointResult& pr) {
    os << "schedule: t1 = " << pr.schedule.t1 * 1e6 << " us, t - t1 = "
       << pr.schedule.dark_interval() * 1e6 << " us, t2 - t = "
       << pr.schedule.pulse2_duration() * 1e6 << " us (optimal "
       << pr.dt2_opt * 1e6 << " us), tm = " << pr.schedule.tm * 1e6 << " us\n";
    os << "alpha = " << pr.alpha << ", v_mix = " << pr.v_mix << '\n';
    os << "nbar(T1) = " << pr.ent.nbar_pulse1 << ", nbar(T2) = " << pr.ent.nbar_pulse2 << '\n';
    os << "E_N = " << pr.ent.E_N << "  (eta_minus = " << pr.ent.eta_minus
       << ", entangled: " << (pr.ent.entangled ? "yes" : "no") << ")\n";
    os << "simon: 4 det V = " << pr.ent.simon_lhs << "  vs  Sigma - 1/4 = "
       << pr.ent.simon_rhs << '\n';
    os << "xi_EPR = " << pr.ent.xi_epr << '\n';
    os << "V_out:\n" << pr.V_out << '\n';
    for (const auto& w : pr.warnings) os << "warning: " << w << '\n';
}

nlohmann::json point_json(const PointResult& pr) {
    nlohmann::json j;
    j["rates"] = rates_json(pr.rates);
    j["schedule"] = {{"t1", pr.schedule.t1}, {"t", pr.schedule.t},
                     {"t2", pr.schedule.t2}, {"tm", pr.schedule.tm}};
    j["dt2_opt"] = pr.dt2_opt;
    j["alpha"] = pr.alpha;
    j["v_mix"] = pr.v_mix;
    j["E_N"] = pr.ent.E_N;
    j["eta_minus"] = pr.ent.eta_minus;
    j["entangled"] = pr.ent.entangled;
    j["simon_lhs"] = pr.ent.simon_lhs;
    j["simon_rhs"] = pr.ent.simon_rhs;
    j["xi_EPR"] = pr.ent.xi_epr;
    j["nbar1"] = pr.ent.nbar_pulse1;
    j["nbar2"] = pr.ent.nbar_pulse2;
    j["physical"] = pr.physical;
    j["warnings"] = pr.warnings;
    auto mat = nlohmann::json::array();
    for (int i = 0; i < 4; ++i) {
        auto row = nlohmann::json::array();
        for (int k = 0; k < 4; ++k) row.push_back(pr.V_out(i, k));
        mat.push_back(row);
    }
    j["V_out"] = mat;
    return j;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-pulse cavity entanglement simulator"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--config", g.config_path, "physics configuration file");
    app.add_option("--format", g.format, "output format: csv|json|text")
        ->check(CLI::IsMember({"csv", "json", "text"}));
    app.add_option("--out", g.out_path, "write output to this file");
    app.add_option("--tm", g.tm, "measurement window: 'auto' or seconds");
    app.add_flag("--noiseless", g.noiseless,
                 "switch off kappa_L, kappa_b+-, kappa_h (comparison curves)");
    app.add_option("--chi", g.chi, "Raman coupling formula")
        ->check(CLI::IsMember({"exact", "leading"}));
    app.add_option("--delta1-mag", g.delta1_mag,
                   "override |delta1| [Hz, ordinary]; sign from --delta1-sign")
        ->check(CLI::PositiveNumber);
    app.add_option("--delta1-sign", g.delta1_sign, "sign of delta1 (default '-')")
        ->check(CLI::IsMember({"+", "-"}));

    ScheduleSpec sched;
    double gap = -1.0, dt2 = -1.0;

    auto add_schedule_opts = [&](CLI::App* c) {
        c->add_option("--t1", sched.t1, "first-pulse duration [s]");
        c->add_option("--gap", gap, "dark interval [s]; default 2/(kappa+kappa_L)");
        c->add_option("--ratio", sched.ratio, "(t2-t) in units of the optimal transfer time");
        c->add_option("--dt2", dt2, "absolute second-pulse duration [s]");
    };

    auto* c_rates = app.add_subcommand("rates", "derive effective rates and shifts");

    auto* c_point = app.add_subcommand("point", "run the protocol at one parameter point");
    add_schedule_opts(c_point);

    auto* c_sweep = app.add_subcommand("sweep", "scan one parameter over a grid");
    std::string sweep_param = "T2_minus_T_ratio", policy = "custom";
    double sw_from = 0.0, sw_to = 0.0;
    int sw_steps = 2;
    c_sweep->add_option("--param", sweep_param, "swept parameter")
        ->check(CLI::IsMember({"T1", "T_minus_T1", "T2_minus_T_ratio", "kappa",
                               "kappa_h", "Omega1", "eta"}));
    c_sweep->add_option("--from", sw_from, "first grid value")->required();
    c_sweep->add_option("--to", sw_to, "last grid value")->required();
    c_sweep->add_option("--steps", sw_steps, "grid points")->required();
    c_sweep->add_option("--policy", policy, "schedule policy")
        ->check(CLI::IsMember({"fig3", "fig4", "fig5", "custom"}));
    add_schedule_opts(c_sweep);

    auto* c_figure = app.add_subcommand("figure", "regenerate reference curve data");
    int fig_which = 3;
    int fig_steps = 101;
    std::string out_dir = ".";
    std::vector<double> fig_kappas;
    c_figure->add_option("--which", fig_which, "figure index: 3|4|5")->required();
    c_figure->add_option("--steps", fig_steps, "grid points per curve");
    c_figure->add_option("--out-dir", out_dir, "directory for the per-curve files");
    c_figure->add_option("--kappas", fig_kappas, "cavity decay list [Hz, ordinary]");
    add_schedule_opts(c_figure);

    auto* c_oracle = app.add_subcommand("oracle", "compare the closed forms against the ODE route");
    add_schedule_opts(c_oracle);
    double oracle_tol = 1e-4;
    c_oracle->add_option("--tol", oracle_tol, "failure threshold on the max relative deviation");

    CLI11_PARSE(app, argc, argv);

    try {
        const RunFlags flags = make_flags(g);
        sched.gap = gap;
        sched.dt2_absolute = dt2;
        sched.tm = tm_value(g);

        if (g.config_path.empty()) {
            std::cerr << "error: --config is required\n\n" << config_schema_help();
            return kExitUsage;
        }
        PhysicalParams params = load_config(g.config_path);
        if (g.delta1_mag > 0.0)
            params.delta1 = (g.delta1_sign == "-" ? -1.0 : 1.0) * angular(g.delta1_mag);

        std::ofstream file;
        std::ostream& os = open_out(g, file);

        if (*c_rates) {
            const DerivedRates r = derive_rates(params, flags.chi_mode, flags.noiseless);
            if (g.format == "json") os << rates_json(r).dump(2) << '\n';
            else if (g.format == "csv") {
                os << "# effective rates, angular rad/s; complex as re,im\n" << "key,value\n";
                print_kv_csv(os, rates_json(r));
            } else print_rates_text(os, params, r);
            return kExitOk;
        }

        if (*c_point) {
            const PointResult pr = run_point(params, sched, flags);
            if (g.format == "json") os << point_json(pr).dump(2) << '\n';
            else if (g.format == "csv") {
                nlohmann::json j = point_json(pr);
                j.erase("V_out");
                j.erase("warnings");
                os << "# protocol point summary; times s, rates rad/s\n" << "key,value\n";
                print_kv_csv(os, j);
            } else print_point_text(os, pr);
            if (!pr.physical || pr.regime.any_fail()) return kExitPhysics;
            return kExitOk;
        }

        if (*c_sweep) {
            SweepSpec spec;
            spec.base = sched;
            spec.from = sw_from;
            spec.to = sw_to;
            spec.steps = sw_steps;
            if (sweep_param == "T1") spec.parameter = SweepParameter::T1;
            else if (sweep_param == "T_minus_T1") spec.parameter = SweepParameter::TMinusT1;
            else if (sweep_param == "T2_minus_T_ratio") spec.parameter = SweepParameter::T2MinusTRatio;
            else if (sweep_param == "kappa") spec.parameter = SweepParameter::Kappa;
            else if (sweep_param == "kappa_h") spec.parameter = SweepParameter::KappaH;
            else if (sweep_param == "Omega1") spec.parameter = SweepParameter::Omega1;
            else spec.parameter = SweepParameter::Eta;
            if (policy == "fig3") spec.policy = SchedulePolicy::Fig3;
            else if (policy == "fig4") spec.policy = SchedulePolicy::Fig4;
            else if (policy == "fig5") spec.policy = SchedulePolicy::Fig5;
            else spec.policy = SchedulePolicy::Custom;

            const SweepResult res = run_sweep(params, spec, flags);
            if (g.format == "json") write_json(os, res);
            else write_csv(os, res);
            return kExitOk;
        }

        if (*c_figure) {
            std::vector<double> ks;
            for (double k : fig_kappas) ks.push_back(angular(k));
            const FigureData fig = reproduce_figure(fig_which, params, ks, fig_steps, flags);
            std::filesystem::create_directories(out_dir);
            for (const auto& curve : fig.curves) {
                char name[128];
                std::snprintf(name, sizeof name, "fig%d_kappa_%.4gkHz%s.%s", fig.which,
                              curve.kappa / two_pi / 1e3, curve.noiseless ? "_noiseless" : "",
                              g.format == "json" ? "json" : "csv");
                std::ofstream f(std::filesystem::path(out_dir) / name);
                if (g.format == "json") write_json(f, curve.sweep);
                else write_csv(f, curve.sweep);
                os << "wrote " << (std::filesystem::path(out_dir) / name).string() << '\n';
            }
            os << "curve summary (kappa [kHz], peak E_N, at value, last-valid E_N):\n";
            for (const auto& curve : fig.curves) {
                double peak = 0.0, at = 0.0, last = 0.0;
                for (const auto& row : curve.sweep.rows) {
                    if (!row.ok) continue;
                    if (row.E_N > peak) { peak = row.E_N; at = row.value; }
                    if (row.physical) last = row.E_N;
                }
                char line[160];
                std::snprintf(line, sizeof line, "  %8.3f%s  peak %.4f at %.6g  last %.4f\n",
                              curve.kappa / two_pi / 1e3, curve.noiseless ? " (noiseless)" :
                              "            ", peak, at, last);
                os << line;
            }
            return kExitOk;
        }

        if (*c_oracle) {
            // Build the schedule the same way run_point does, then hand the
            // resolved times to the ODE comparison.
            const PointResult pr = run_point(params, sched, flags);
            const OracleResult orr = oracle_pipeline(params, pr.schedule, pr.schedule.tm,
                                                     flags.chi_mode, flags.noiseless);
            os << "max relative deviation (closed form vs ODE): " << orr.max_rel_err
               << "  worst element (" << orr.worst_row << ',' << orr.worst_col << ")\n";
            os << "residual <a a> after the dark stage: " << orr.aa_drift_pulse1 << '\n';
            if (!(orr.max_rel_err < oracle_tol)) {
                os << "FAIL: deviation above " << oracle_tol << '\n';
                return kExitOracle;
            }
            os << "OK\n";
            return kExitOk;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "physics error: " << e.what() << '\n';
        return kExitPhysics;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
