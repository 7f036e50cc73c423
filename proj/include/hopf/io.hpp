#ifndef HOPF_IO_HPP_
#define HOPF_IO_HPP_

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hopf/basis.hpp"
#include "hopf/sphere_state.hpp"

namespace hopf {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flat key = value configuration with dotted section keys, '#' comments.
// Lists are comma- or whitespace-separated.
struct RunConfig {
    int n = 0;
    double psi_inf = 1.0;

    enum class Source { None, Coefficients, Samples, Hopf, Soliton };
    Source source = Source::None;

    // initial.a / initial.b / initial.c (+ optional initial.d1 / initial.d2)
    std::vector<double> a, b, c;
    double d1 = 0, d2 = 0;
    bool have_d = false;

    std::string samples_path;

    double hopf_mu = 2, hopf_c0 = 0;

    double sol_lambda = 2, sol_psi0 = 1, sol_s_half = 0;

    std::vector<double> times;
    std::string out_dir = ".";
    bool want_csv = true, want_svg = false;
    int grid_n = 512;
    double grid_dt = 1e-3;
    double tol = 1e-9;
};

namespace detail {

inline std::string trimmed(const std::string& s)
{
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::vector<double> parse_list(const std::string& v, const std::string& key)
{
    std::string s = v;
    std::replace(s.begin(), s.end(), ',', ' ');
    std::istringstream in(s);
    std::vector<double> out;
    double x;
    while (in >> x) out.push_back(x);
    if (!in.eof()) throw ConfigError("config: malformed number list for " + key);
    return out;
}

inline double parse_num(const std::string& v, const std::string& key)
{
    try {
        size_t pos = 0;
        double x = std::stod(v, &pos);
        if (trimmed(v.substr(pos)).empty()) return x;
    } catch (const std::exception&) {
    }
    throw ConfigError("config: malformed number for " + key);
}

} // namespace detail

inline RunConfig parse_config(std::istream& in)
{
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::string t = detail::trimmed(line);
        if (t.empty()) continue;
        size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: line " + std::to_string(lineno) + ": expected key = value");
        std::string key = detail::trimmed(t.substr(0, eq));
        std::string val = detail::trimmed(t.substr(eq + 1));
        if (key.empty()) throw ConfigError("config: line " + std::to_string(lineno) + ": empty key");
        if (!kv.emplace(key, val).second)
            throw ConfigError("config: duplicate key " + key);
    }

    RunConfig cfg;
    auto set_source = [&cfg](RunConfig::Source s) {
        if (cfg.source != RunConfig::Source::None && cfg.source != s)
            throw ConfigError("config: more than one initial-data source");
        cfg.source = s;
    };
    for (const auto& [key, val] : kv) {
        if (key == "flow.n") {
            cfg.n = static_cast<int>(detail::parse_num(val, key));
            if (cfg.n < 0) throw ConfigError("config: flow.n must be >= 0");
        } else if (key == "flow.psi_inf") {
            cfg.psi_inf = detail::parse_num(val, key);
            if (cfg.psi_inf <= 0) throw ConfigError("config: flow.psi_inf must be > 0");
        } else if (key == "initial.a") {
            cfg.a = detail::parse_list(val, key);
            set_source(RunConfig::Source::Coefficients);
        } else if (key == "initial.b") {
            cfg.b = detail::parse_list(val, key);
            set_source(RunConfig::Source::Coefficients);
        } else if (key == "initial.c") {
            cfg.c = detail::parse_list(val, key);
            set_source(RunConfig::Source::Coefficients);
        } else if (key == "initial.d1") {
            cfg.d1 = detail::parse_num(val, key);
            cfg.have_d = true;
        } else if (key == "initial.d2") {
            cfg.d2 = detail::parse_num(val, key);
            cfg.have_d = true;
        } else if (key == "initial.samples") {
            cfg.samples_path = val;
            set_source(RunConfig::Source::Samples);
        } else if (key == "initial.hopf.mu") {
            cfg.hopf_mu = detail::parse_num(val, key);
            set_source(RunConfig::Source::Hopf);
        } else if (key == "initial.hopf.c0") {
            cfg.hopf_c0 = detail::parse_num(val, key);
            set_source(RunConfig::Source::Hopf);
        } else if (key == "initial.soliton.lambda") {
            cfg.sol_lambda = detail::parse_num(val, key);
            set_source(RunConfig::Source::Soliton);
        } else if (key == "initial.soliton.psi0") {
            cfg.sol_psi0 = detail::parse_num(val, key);
            set_source(RunConfig::Source::Soliton);
        } else if (key == "initial.soliton.s_half") {
            cfg.sol_s_half = detail::parse_num(val, key);
            set_source(RunConfig::Source::Soliton);
        } else if (key == "times") {
            cfg.times = detail::parse_list(val, key);
        } else if (key == "output.dir") {
            cfg.out_dir = val;
        } else if (key == "output.formats") {
            cfg.want_csv = val.find("csv") != std::string::npos;
            cfg.want_svg = val.find("svg") != std::string::npos;
            if (!cfg.want_csv && !cfg.want_svg)
                throw ConfigError("config: output.formats must contain csv and/or svg");
        } else if (key == "grid.n") {
            cfg.grid_n = static_cast<int>(detail::parse_num(val, key));
            if (cfg.grid_n < 16) throw ConfigError("config: grid.n must be >= 16");
        } else if (key == "grid.dt") {
            cfg.grid_dt = detail::parse_num(val, key);
            if (cfg.grid_dt <= 0) throw ConfigError("config: grid.dt must be > 0");
        } else if (key == "tol") {
            cfg.tol = detail::parse_num(val, key);
            if (cfg.tol <= 0) throw ConfigError("config: tol must be > 0");
        } else {
            throw ConfigError("config: unknown key " + key);
        }
    }
    if (cfg.source == RunConfig::Source::None)
        throw ConfigError("config: no initial-data source given");
    for (size_t i = 0; i < cfg.times.size(); ++i) {
        if (cfg.times[i] < 0) throw ConfigError("config: times must be non-negative");
        if (i > 0 && cfg.times[i] < cfg.times[i - 1])
            throw ConfigError("config: times must be sorted ascending");
    }
    return cfg;
}

inline RunConfig parse_config_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    return parse_config(in);
}

// (theta, value) sample file: one "theta value" or "theta,value" pair per
// line, '#' comments.
inline std::vector<std::pair<double, double>> read_samples(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("samples: cannot open " + path);
    std::vector<std::pair<double, double>> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::string t = detail::trimmed(line);
        if (t.empty()) continue;
        std::replace(t.begin(), t.end(), ',', ' ');
        std::istringstream ls(t);
        double th, v;
        if (!(ls >> th >> v))
            throw ConfigError("samples: line " + std::to_string(lineno) + ": expected two numbers");
        out.emplace_back(th, v);
    }
    return out;
}

// Shortest round-trip decimal representation.
inline std::string format_double(double v)
{
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

// RoC/state CSV: header theta,psi,s,r; LF endings.
inline void write_state_csv(std::ostream& out, const SphereState& state, int samples)
{
    out << "theta,psi,s,r\n";
    for (int i = 0; i <= samples; ++i) {
        double th = M_PI * i / samples;
        out << format_double(th) << ',' << format_double(state.psi(th)) << ','
            << format_double(state.s(th)) << ',' << format_double(state.r(th)) << '\n';
    }
}

// Profile-curve CSV: header x1,x2.
inline void write_profile_csv(std::ostream& out,
                              const std::vector<std::pair<double, double>>& pts)
{
    out << "x1,x2\n";
    for (const auto& [x1, x2] : pts)
        out << format_double(x1) << ',' << format_double(x2) << '\n';
}

// Minimal SVG: one polyline per curve plus the umbilic horizon reference
// line, viewBox auto-fit with a 5% margin.  Decorative; CSV is the contract.
inline void write_svg(std::ostream& out,
                      const std::vector<std::vector<std::pair<double, double>>>& curves,
                      bool horizon)
{
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& c : curves)
        for (const auto& [x, y] : c) {
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    if (horizon) {
        ymin = std::min(ymin, 0.0);
        ymax = std::max(ymax, 0.0);
    }
    if (xmin > xmax) { xmin = ymin = 0; xmax = ymax = 1; }
    double mx = 0.05 * std::max(xmax - xmin, 1e-12), my = 0.05 * std::max(ymax - ymin, 1e-12);
    double x0 = xmin - mx, y0 = ymin - my, w = (xmax - xmin) + 2 * mx, h = (ymax - ymin) + 2 * my;
    // flip y so larger values render upward
    auto fy = [&](double y) { return y0 + h - (y - y0); };
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << format_double(x0)
        << ' ' << format_double(y0) << ' ' << format_double(w) << ' ' << format_double(h)
        << "\">\n";
    double stroke = 0.004 * std::max(w, h);
    if (horizon)
        out << "<line x1=\"" << format_double(x0) << "\" y1=\"" << format_double(fy(0.0))
            << "\" x2=\"" << format_double(x0 + w) << "\" y2=\"" << format_double(fy(0.0))
            << "\" stroke=\"gray\" stroke-width=\"" << format_double(stroke) << "\"/>\n";
    for (const auto& c : curves) {
        out << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\""
            << format_double(stroke) << "\" points=\"";
        for (size_t i = 0; i < c.size(); ++i) {
            if (i) out << ' ';
            out << format_double(c[i].first) << ',' << format_double(fy(c[i].second));
        }
        out << "\"/>\n";
    }
    out << "</svg>\n";
}

} // namespace hopf

#endif
