#pragma once
// Configuration-driven front end: flat key=value config files drive energy
// sweeps, basis-parameter plateau scans, and side-by-side comparisons
// against the direct-integration reference. Output is CSV with the
// effective configuration echoed in the header as '# key = value' lines.

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "potential.hpp"
#include "scattering.hpp"

namespace dirac1d {
namespace cli {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ChannelConfig {
    std::string preset = "none";  // none|gaussian|gaussian_x|square|smoothed_step|table
    double height = 0.0;
    double width = 1.0;
    double center = 0.0;
    std::string file;  // two-column table when preset = table
};

struct RunConfig {
    std::string mode = "sweep";  // sweep|plateau|validate
    double mass = 1.0;
    double lambda = 1.0;
    double tau = 1.0;
    int N = 40;
    int K = 0;  // 0: resolved to 2(N+nbuf)+40
    int nbuf = 0;
    double energy_min = 1.1;
    double energy_max = 3.0;
    int energy_steps = 50;
    double X = 8.0;
    ChannelConfig V, S, U;
    std::string parity = "auto";  // auto|even|odd|none
    std::string output;           // empty: stdout
    double plateau_eps0 = 0.0;    // 0: resolved to energy_min
    double plateau_lambda_min = 0.6;
    double plateau_lambda_max = 1.6;
    int plateau_lambda_steps = 11;
    double plateau_tau_min = 0.5;
    double plateau_tau_max = 1.5;
    int plateau_tau_steps = 3;
    std::vector<int> plateau_N_list = {20, 40};
    double plateau_tolerance = 1e-4;
    double validate_tol = 1e-12;
    double validate_margin = 0.0;  // 0: resolved to 2/lambda
};

inline std::string g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace detail {

inline std::string trim(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

inline double parse_double(const std::string& v, const std::string& key, int line) {
    try {
        size_t pos = 0;
        double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw ConfigError("line " + std::to_string(line) + ": bad numeric value for '" + key +
                          "': " + v);
    }
}

inline int parse_int(const std::string& v, const std::string& key, int line) {
    try {
        size_t pos = 0;
        int x = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw ConfigError("line " + std::to_string(line) + ": bad integer value for '" + key +
                          "': " + v);
    }
}

inline std::vector<int> parse_int_list(const std::string& v, const std::string& key, int line) {
    std::vector<int> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(parse_int(item, key, line));
    }
    if (out.empty())
        throw ConfigError("line " + std::to_string(line) + ": empty list for '" + key + "'");
    return out;
}

inline bool channel_key(ChannelConfig& ch, const std::string& sub, const std::string& val,
                        const std::string& key, int line) {
    if (sub == "preset")
        ch.preset = val;
    else if (sub == "height")
        ch.height = parse_double(val, key, line);
    else if (sub == "width")
        ch.width = parse_double(val, key, line);
    else if (sub == "center")
        ch.center = parse_double(val, key, line);
    else if (sub == "file")
        ch.file = val;
    else
        return false;
    return true;
}

inline void apply_key(RunConfig& c, const std::string& key, const std::string& val, int line) {
    auto bad = [&]() -> void {
        throw ConfigError("line " + std::to_string(line) + ": unknown key '" + key + "'");
    };
    if (key == "mode")
        c.mode = val;
    else if (key == "mass")
        c.mass = parse_double(val, key, line);
    else if (key == "basis.lambda")
        c.lambda = parse_double(val, key, line);
    else if (key == "basis.tau")
        c.tau = parse_double(val, key, line);
    else if (key == "basis.N")
        c.N = parse_int(val, key, line);
    else if (key == "basis.K")
        c.K = parse_int(val, key, line);
    else if (key == "basis.nbuf")
        c.nbuf = parse_int(val, key, line);
    else if (key == "energy.min")
        c.energy_min = parse_double(val, key, line);
    else if (key == "energy.max")
        c.energy_max = parse_double(val, key, line);
    else if (key == "energy.steps")
        c.energy_steps = parse_int(val, key, line);
    else if (key == "potential.X")
        c.X = parse_double(val, key, line);
    else if (key.rfind("potential.V.", 0) == 0) {
        if (!channel_key(c.V, key.substr(12), val, key, line)) bad();
    } else if (key.rfind("potential.S.", 0) == 0) {
        if (!channel_key(c.S, key.substr(12), val, key, line)) bad();
    } else if (key.rfind("potential.U.", 0) == 0) {
        if (!channel_key(c.U, key.substr(12), val, key, line)) bad();
    } else if (key == "parity")
        c.parity = val;
    else if (key == "output")
        c.output = val;
    else if (key == "plateau.eps0")
        c.plateau_eps0 = parse_double(val, key, line);
    else if (key == "plateau.lambda_min")
        c.plateau_lambda_min = parse_double(val, key, line);
    else if (key == "plateau.lambda_max")
        c.plateau_lambda_max = parse_double(val, key, line);
    else if (key == "plateau.lambda_steps")
        c.plateau_lambda_steps = parse_int(val, key, line);
    else if (key == "plateau.tau_min")
        c.plateau_tau_min = parse_double(val, key, line);
    else if (key == "plateau.tau_max")
        c.plateau_tau_max = parse_double(val, key, line);
    else if (key == "plateau.tau_steps")
        c.plateau_tau_steps = parse_int(val, key, line);
    else if (key == "plateau.N_list")
        c.plateau_N_list = parse_int_list(val, key, line);
    else if (key == "plateau.tolerance")
        c.plateau_tolerance = parse_double(val, key, line);
    else if (key == "validate.tol")
        c.validate_tol = parse_double(val, key, line);
    else if (key == "validate.margin")
        c.validate_margin = parse_double(val, key, line);
    else
        bad();
}

}  // namespace detail

inline RunConfig parse_config(std::istream& in) {
    RunConfig c;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key=value, got '" +
                              line + "'");
        std::string key = detail::trim(line.substr(0, eq));
        std::string val = detail::trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        detail::apply_key(c, key, val, lineno);
    }
    return c;
}

inline void resolve_and_check(RunConfig& c) {
    if (c.mode != "sweep" && c.mode != "plateau" && c.mode != "validate")
        throw ConfigError("mode must be sweep, plateau, or validate (got '" + c.mode + "')");
    if (!(c.mass > 0)) throw ConfigError("mass must be positive");
    if (!(c.lambda > 0)) throw ConfigError("basis.lambda must be positive");
    if (!(c.tau > 0)) throw ConfigError("basis.tau must be positive");
    if (c.N < 2) throw ConfigError("basis.N must be at least 2");
    if (c.nbuf < 0) throw ConfigError("basis.nbuf must be non-negative");
    if (c.K == 0) c.K = 2 * (c.N + c.nbuf) + 40;
    if (c.K < 2 * (c.N + c.nbuf) + 6)
        throw ConfigError("basis.K too small for the requested basis size");
    if (!(c.energy_min > c.mass)) throw ConfigError("energy.min must exceed mass");
    if (c.energy_steps < 1) throw ConfigError("energy.steps must be at least 1");
    if (c.energy_max < c.energy_min) throw ConfigError("energy.max must be >= energy.min");
    if (!(c.X > 0)) throw ConfigError("potential.X must be positive");
    if (c.parity != "auto" && c.parity != "even" && c.parity != "odd" && c.parity != "none")
        throw ConfigError("parity must be auto, even, odd, or none");
    for (const ChannelConfig* ch : {&c.V, &c.S, &c.U}) {
        const std::string& p = ch->preset;
        if (p != "none" && p != "gaussian" && p != "gaussian_x" && p != "square" &&
            p != "smoothed_step" && p != "table")
            throw ConfigError("unknown potential preset '" + p + "'");
        if (p == "table") {
            std::ifstream f(ch->file);
            if (!f) throw ConfigError("cannot open table file '" + ch->file + "'");
        }
    }
    if (c.mode == "plateau") {
        if (c.plateau_eps0 == 0.0) c.plateau_eps0 = c.energy_min;
        if (!(c.plateau_eps0 > c.mass)) throw ConfigError("plateau.eps0 must exceed mass");
        if (c.plateau_lambda_steps < 1 || c.plateau_tau_steps < 1)
            throw ConfigError("plateau grid steps must be at least 1");
        for (int n : c.plateau_N_list)
            if (n < 2) throw ConfigError("plateau.N_list entries must be at least 2");
    }
    if (c.mode == "validate") {
        if (c.validate_margin == 0.0) c.validate_margin = 2.0 / c.lambda;
        if (!(c.validate_tol > 0)) throw ConfigError("validate.tol must be positive");
    }
}

inline ScalarFn make_channel(const ChannelConfig& ch) {
    if (ch.preset == "none") return zero_fn();
    if (ch.preset == "gaussian") return gaussian_fn(ch.height, ch.width, ch.center);
    if (ch.preset == "gaussian_x") return gaussian_x_fn(ch.height, ch.width, ch.center);
    if (ch.preset == "square") return square_fn(ch.height, ch.width, ch.center);
    if (ch.preset == "smoothed_step") return smoothed_step_fn(ch.height, ch.width);
    if (ch.preset == "table") {
        auto tab = std::make_shared<TabulatedFn>(load_tabulated(ch.file));
        return [tab](double x) { return (*tab)(x); };
    }
    throw ConfigError("unknown potential preset '" + ch.preset + "'");
}

inline PotentialSpec make_potential(const RunConfig& c) {
    PotentialSpec p;
    p.V = make_channel(c.V);
    p.S = make_channel(c.S);
    p.U = make_channel(c.U);
    p.X = c.X;
    return p;
}

// Every key with its effective value, in a fixed order, so the echoed
// header re-parses to an identical run.
inline std::vector<std::pair<std::string, std::string>> effective_entries(const RunConfig& c) {
    std::vector<std::pair<std::string, std::string>> e;
    auto chan = [&](const std::string& name, const ChannelConfig& ch) {
        e.push_back({"potential." + name + ".preset", ch.preset});
        e.push_back({"potential." + name + ".height", g17(ch.height)});
        e.push_back({"potential." + name + ".width", g17(ch.width)});
        e.push_back({"potential." + name + ".center", g17(ch.center)});
        e.push_back({"potential." + name + ".file", ch.file});
    };
    e.push_back({"mode", c.mode});
    e.push_back({"mass", g17(c.mass)});
    e.push_back({"basis.lambda", g17(c.lambda)});
    e.push_back({"basis.tau", g17(c.tau)});
    e.push_back({"basis.N", std::to_string(c.N)});
    e.push_back({"basis.K", std::to_string(c.K)});
    e.push_back({"basis.nbuf", std::to_string(c.nbuf)});
    e.push_back({"energy.min", g17(c.energy_min)});
    e.push_back({"energy.max", g17(c.energy_max)});
    e.push_back({"energy.steps", std::to_string(c.energy_steps)});
    e.push_back({"potential.X", g17(c.X)});
    chan("V", c.V);
    chan("S", c.S);
    chan("U", c.U);
    e.push_back({"parity", c.parity});
    e.push_back({"output", c.output});
    e.push_back({"plateau.eps0", g17(c.plateau_eps0)});
    e.push_back({"plateau.lambda_min", g17(c.plateau_lambda_min)});
    e.push_back({"plateau.lambda_max", g17(c.plateau_lambda_max)});
    e.push_back({"plateau.lambda_steps", std::to_string(c.plateau_lambda_steps)});
    e.push_back({"plateau.tau_min", g17(c.plateau_tau_min)});
    e.push_back({"plateau.tau_max", g17(c.plateau_tau_max)});
    e.push_back({"plateau.tau_steps", std::to_string(c.plateau_tau_steps)});
    {
        std::string l;
        for (size_t i = 0; i < c.plateau_N_list.size(); ++i)
            l += (i ? "," : "") + std::to_string(c.plateau_N_list[i]);
        e.push_back({"plateau.N_list", l});
    }
    e.push_back({"plateau.tolerance", g17(c.plateau_tolerance)});
    e.push_back({"validate.tol", g17(c.validate_tol)});
    e.push_back({"validate.margin", g17(c.validate_margin)});
    return e;
}

inline void write_echo(std::ostream& out, const RunConfig& c) {
    out << "# config-begin\n";
    for (const auto& [k, v] : effective_entries(c)) out << "# " << k << " = " << v << "\n";
    out << "# config-end\n";
}

// Pulls the key=value lines back out of an output header; the returned
// text parses to the run that produced the file.
inline std::string extract_config_echo(std::istream& in) {
    std::string line, out;
    bool inside = false;
    while (std::getline(in, line)) {
        if (line == "# config-begin") {
            inside = true;
            continue;
        }
        if (line == "# config-end") break;
        if (inside && line.rfind("# ", 0) == 0) out += line.substr(2) + "\n";
    }
    return out;
}

namespace detail {

inline std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(n);
    if (n == 1) {
        v[0] = a;
        return v;
    }
    for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
    return v;
}

inline std::string flags_of(const ScatteringResult& r) {
    std::string f;
    auto add = [&](const char* t) {
        if (!f.empty()) f += ';';
        f += t;
    };
    if (r.failed) {
        add("failed");
        return f;
    }
    add(r.decoupled_path ? "decoupled" : "coupled");
    if (r.nudged) add("nudged");
    if (r.flagged) add("unitarity");
    return f;
}

inline std::string sanitize(std::string s) {
    for (char& ch : s)
        if (ch == ',' || ch == '\n' || ch == '\r') ch = ';';
    return s.empty() ? std::string("-") : s;
}

inline double k_of(double eps, double mass) {
    double t = eps * eps - mass * mass;
    return t > 0 ? std::sqrt(t) : std::numeric_limits<double>::quiet_NaN();
}

inline Parity parity_override(const std::string& s, Parity detected) {
    if (s == "even") return Parity::Even;
    if (s == "odd") return Parity::Odd;
    if (s == "none") return Parity::None;
    return detected;
}

}  // namespace detail

inline int run_sweep(const RunConfig& c, std::ostream& out) {
    PotentialSpec pot = make_potential(c);
    MiddleSystem sys = build_middle_system(pot, c.mass, c.lambda, c.N, c.nbuf, c.K);
    sys.parity = detail::parity_override(c.parity, sys.parity);
    std::vector<double> grid = detail::linspace(c.energy_min, c.energy_max, c.energy_steps);
    std::vector<ScatteringResult> res = energy_sweep(sys, grid);
    write_echo(out, c);
    out << "energy,k,re_T,im_T,re_R,im_R,T2,R2,unitarity_defect,coupling,flags\n";
    size_t nfail = 0;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (const auto& r : res) {
        if (r.failed) ++nfail;
        double eps = r.failed ? r.eps : r.eps_used;
        double T2 = r.failed ? nan : std::norm(r.T);
        double R2 = r.failed ? nan : std::norm(r.R);
        out << g17(eps) << ',' << g17(detail::k_of(eps, c.mass)) << ','
            << g17(r.failed ? nan : r.T.real()) << ',' << g17(r.failed ? nan : r.T.imag())
            << ',' << g17(r.failed ? nan : r.R.real()) << ','
            << g17(r.failed ? nan : r.R.imag()) << ',' << g17(T2) << ',' << g17(R2) << ','
            << g17(r.failed ? nan : r.unitarity_defect) << ','
            << g17(r.failed ? nan : r.channel_coupling) << ',' << detail::flags_of(r) << "\n";
    }
    return (nfail == res.size()) ? 2 : 0;
}

inline int run_validate(const RunConfig& c, std::ostream& out) {
    PotentialSpec pot = make_potential(c);
    MiddleSystem sys = build_middle_system(pot, c.mass, c.lambda, c.N, c.nbuf, c.K);
    sys.parity = detail::parity_override(c.parity, sys.parity);
    std::vector<double> grid = detail::linspace(c.energy_min, c.energy_max, c.energy_steps);
    write_echo(out, c);
    out << "energy,k,re_T,im_T,re_R,im_R,T2,oracle_re_T,oracle_im_T,oracle_re_R,oracle_im_R,"
           "oracle_T2,abs_dT,abs_dR,errors\n";
    size_t nfail = 0;
    double max_dT = 0, max_dR = 0;
    bool any_ok = false;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (double e : grid) {
        ScatteringResult r = evaluate_point(sys, e);
        std::string err;
        cd To(nan, nan), Ro(nan, nan);
        try {
            OracleResult o = dirac_oracle(pot, e, c.mass, c.validate_margin, c.validate_tol);
            To = o.T;
            Ro = o.R;
        } catch (const std::exception& ex) {
            err = ex.what();
        }
        if (r.failed) err = err.empty() ? r.error : err + "; " + r.error;
        double dT = nan, dR = nan;
        if (!r.failed && err.empty()) {
            dT = std::abs(r.T - To);
            dR = std::abs(r.R - Ro);
            max_dT = std::max(max_dT, dT);
            max_dR = std::max(max_dR, dR);
            any_ok = true;
        } else {
            ++nfail;
        }
        double eps = r.failed ? r.eps : r.eps_used;
        out << g17(eps) << ',' << g17(detail::k_of(eps, c.mass)) << ','
            << g17(r.failed ? nan : r.T.real()) << ',' << g17(r.failed ? nan : r.T.imag())
            << ',' << g17(r.failed ? nan : r.R.real()) << ','
            << g17(r.failed ? nan : r.R.imag()) << ','
            << g17(r.failed ? nan : std::norm(r.T)) << ',' << g17(To.real()) << ','
            << g17(To.imag()) << ',' << g17(Ro.real()) << ',' << g17(Ro.imag()) << ','
            << g17(std::norm(To)) << ',' << g17(dT) << ',' << g17(dR) << ','
            << detail::sanitize(err) << "\n";
    }
    out << "# summary max_abs_dT = " << g17(any_ok ? max_dT : nan) << "\n";
    out << "# summary max_abs_dR = " << g17(any_ok ? max_dR : nan) << "\n";
    out << "# summary failed_points = " << nfail << " / " << grid.size() << "\n";
    return (nfail == grid.size()) ? 2 : 0;
}

inline int run_plateau(const RunConfig& c, std::ostream& out) {
    PotentialSpec pot = make_potential(c);
    std::vector<double> lg =
        detail::linspace(c.plateau_lambda_min, c.plateau_lambda_max, c.plateau_lambda_steps);
    std::vector<double> tg =
        detail::linspace(c.plateau_tau_min, c.plateau_tau_max, c.plateau_tau_steps);
    PlateauReport rep = plateau_scan(pot, c.mass, c.plateau_eps0, lg, tg, c.plateau_N_list,
                                     c.nbuf, c.plateau_tolerance);
    write_echo(out, c);
    out << "N,lambda,tau,T2,in_plateau\n";
    bool any_value = false;
    for (const auto& e : rep.per_N) {
        Eigen::MatrixXi mark = Eigen::MatrixXi::Zero(e.values.rows(), e.values.cols());
        for (const auto& [i, j] : e.cells) mark(i, j) = 1;
        for (int i = 0; i < e.values.rows(); ++i)
            for (int j = 0; j < e.values.cols(); ++j) {
                if (std::isfinite(e.values(i, j))) any_value = true;
                out << e.N << ',' << g17(lg[i]) << ',' << g17(tg[j]) << ','
                    << g17(e.values(i, j)) << ',' << mark(i, j) << "\n";
            }
    }
    for (const auto& e : rep.per_N) {
        double lam_lo = std::numeric_limits<double>::quiet_NaN(), lam_hi = lam_lo;
        for (const auto& [i, j] : e.cells) {
            if (std::isnan(lam_lo) || lg[i] < lam_lo) lam_lo = lg[i];
            if (std::isnan(lam_hi) || lg[i] > lam_hi) lam_hi = lg[i];
        }
        out << "# plateau N=" << e.N << " found=" << (e.found ? 1 : 0) << " area=" << e.area
            << " spread=" << g17(e.found ? e.spread : e.max_spread)
            << " lambda_width=" << g17(e.found ? lam_hi - lam_lo : 0.0)
            << " value=" << g17(e.value) << "\n";
    }
    out << "# plateau growth_monotone = " << (rep.growth_monotone ? 1 : 0) << "\n";
    return any_value ? 0 : 2;
}

inline int run(const RunConfig& c, std::ostream& out) {
    if (c.mode == "sweep") return run_sweep(c, out);
    if (c.mode == "validate") return run_validate(c, out);
    return run_plateau(c, out);
}

}  // namespace cli
}  // namespace dirac1d
