#include "pulsepair/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pulsepair {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_real(const std::string& v, const std::string& key) {
    std::size_t pos = 0;
    double x;
    try {
        x = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad number for '" + key + "': " + v);
    }
    if (pos != v.size())
        throw std::invalid_argument("config: trailing junk for '" + key + "': " + v);
    return x;
}

complexd parse_complex(const std::string& v, const std::string& key) {
    const auto comma = v.find(',');
    if (comma == std::string::npos) return complexd(parse_real(v, key), 0.0);
    return complexd(parse_real(trim(v.substr(0, comma)), key),
                    parse_real(trim(v.substr(comma + 1)), key));
}

}  // namespace

PhysicalParams parse_config(std::istream& is) {
    PhysicalParams p;
    bool have_gamma = false, have_kappa = false, have_nu = false, have_eta = false;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno)
                                        + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));

        if (key == "gamma") { p.gamma = angular(parse_real(val, key)); have_gamma = true; }
        else if (key == "kappa") { p.kappa = angular(parse_real(val, key)); have_kappa = true; }
        else if (key == "kappa_b") { p.kappa_b_override = angular(parse_real(val, key)); }
        else if (key == "kappa_h") { p.kappa_h = angular(parse_real(val, key)); }
        else if (key == "nu") { p.nu = angular(parse_real(val, key)); have_nu = true; }
        else if (key == "eta") { p.eta = parse_real(val, key); have_eta = true; }
        else if (key == "g_c") { p.g_c = angular(parse_complex(val, key)); }
        else if (key == "omega1") { p.omega1 = angular(parse_complex(val, key)); }
        else if (key == "omega2") { p.omega2 = angular(parse_complex(val, key)); }
        else if (key == "delta1") { p.delta1 = angular(parse_real(val, key)); }
        else if (key == "delta2_override") { p.delta2_override = angular(parse_real(val, key)); }
        else if (key == "theta_L") { p.theta_L = parse_real(val, key); }
        else if (key == "theta_c") { p.theta_c = parse_real(val, key); }
        else if (key == "phi_c") { p.phi_c = parse_real(val, key); }
        else {
            throw std::invalid_argument("config line " + std::to_string(lineno)
                                        + ": unknown key '" + key + "'");
        }
    }
    if (!(have_gamma && have_kappa && have_nu && have_eta))
        throw std::invalid_argument("config: gamma, kappa, nu and eta are required");
    p.validate();
    return p;
}

PhysicalParams load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot open config file: " + path);
    return parse_config(f);
}

std::string config_schema_help() {
    return
        "Flat key = value text; '#' starts a comment.  Frequencies in Hz\n"
        "(converted to angular internally), angles in radians.  Complex\n"
        "values as 're' or 're,im'.  Keys:\n"
        "  gamma     dipole linewidth [Hz]            (required)\n"
        "  kappa     cavity amplitude decay [Hz]      (required)\n"
        "  nu        trap frequency [Hz]              (required)\n"
        "  eta       Lamb-Dicke parameter             (required)\n"
        "  kappa_h   heating rate [Hz]\n"
        "  kappa_b   motional damping [Hz]            (default kappa_h/2000)\n"
        "  g_c       vacuum Rabi coupling [Hz]\n"
        "  omega1    pulse-1 Rabi frequency [Hz]\n"
        "  omega2    pulse-2 Rabi frequency [Hz]\n"
        "  delta1    laser-dipole detuning, signed [Hz]\n"
        "  delta2_override  pulse-2 detuning [Hz]     (default delta1 - 2 nu)\n"
        "  theta_L, theta_c, phi_c   geometry angles [rad]\n";
}

}  // namespace pulsepair
