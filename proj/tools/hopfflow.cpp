#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "hopf/fit.hpp"
#include "hopf/flow.hpp"
#include "hopf/geometry.hpp"
#include "hopf/io.hpp"
#include "hopf/oracle.hpp"

namespace fs = std::filesystem;
using namespace hopf;

namespace {

constexpr int kExitVerifyFail = 1;
constexpr int kExitConfigError = 2;

AstigmatismCoefficients coefficients_from_config(const RunConfig& cfg)
{
    AstigmatismCoefficients co;
    co.n = cfg.n;
    // a/b hold a full trig representation from l = 0; entries with l >= n are
    // converted exactly into the Legendre tail and merged with c (indexed
    // from l = n).
    auto from_full_trig = [&](const std::vector<double>& a, const std::vector<double>& b,
                              const std::vector<double>& c) {
        std::vector<Rat> tail_a, tail_b;
        for (size_t l = 0; l < a.size() || l < b.size(); ++l) {
            Rat av = l < a.size() ? Rat(a[l]) : Rat(0);
            Rat bv = l < b.size() ? Rat(b[l]) : Rat(0);
            if (static_cast<int>(l) < cfg.n) {
                co.trig_a.push_back(av);
                co.trig_b.push_back(bv);
            } else {
                tail_a.push_back(av);
                tail_b.push_back(bv);
            }
        }
        co.trig_a.resize(cfg.n, Rat(0));
        co.trig_b.resize(cfg.n, Rat(0));
        for (double v : c) co.legendre_c.push_back(Rat(v));
        auto tail_c = trig_to_legendre(tail_a, tail_b, cfg.n);
        if (co.legendre_c.size() < tail_c.size()) co.legendre_c.resize(tail_c.size(), Rat(0));
        for (size_t j = 0; j < tail_c.size(); ++j) co.legendre_c[j] += tail_c[j];
        return co;
    };
    if (cfg.source == RunConfig::Source::Coefficients)
        return from_full_trig(cfg.a, cfg.b, cfg.c);
    if (cfg.source == RunConfig::Source::Hopf) {
        // s = C0 sin^{2/(mu-1)} is modal data with a_l = C0 when the exponent
        // is 2l + 2, i.e. mu = (l+2)/(l+1)
        double q = cfg.hopf_mu > 1 ? 2.0 / (cfg.hopf_mu - 1.0) : 0.0;
        long qi = std::lround(q);
        if (qi < 2 || qi % 2 != 0 || std::abs(q - static_cast<double>(qi)) > 1e-9)
            throw ConfigError(
                "config: initial.hopf.mu must be (l+2)/(l+1) for an integer l >= 0");
        std::vector<double> a(qi / 2, 0.0);
        a.back() = cfg.hopf_c0;
        return from_full_trig(a, {}, {});
    }
    if (cfg.source == RunConfig::Source::Samples) {
        auto dec = decompose_samples(read_samples(cfg.samples_path), cfg.n, 32, cfg.tol);
        if (!dec.converged)
            throw ConfigError("samples: decomposition residual " +
                              format_double(dec.residual_sup) + " exceeds tol " +
                              format_double(cfg.tol));
        for (double v : dec.coeffs.trig_a) co.trig_a.push_back(Rat(v));
        for (double v : dec.coeffs.trig_b) co.trig_b.push_back(Rat(v));
        for (double v : dec.coeffs.legendre_c) co.legendre_c.push_back(Rat(v));
        return co;
    }
    throw ConfigError("config: this command needs coefficient or sample initial data");
}

std::string time_label(size_t idx) { return "t" + std::to_string(idx); }

void warn_if_nonconvex(const SphereState& st, double t)
{
    for (int i = 0; i <= 512; ++i) {
        double th = M_PI * i / 512;
        double p = st.psi(th), s = st.s(th);
        if (std::min(p + s, p - s) <= 0) {
            std::cerr << "warning: state at t=" << format_double(t)
                      << " is not convex (focal set reached)\n";
            return;
        }
    }
}

void emit_state(const RunConfig& cfg, const SphereState& st, const std::string& stem)
{
    fs::create_directories(cfg.out_dir);
    double res = cm_residual(st);
    // the grid residual of a reconstructed state carries O(h^2) differencing
    // error; gate on the larger of the configured tol and that floor, scaled
    // by the state's amplitude
    double scale = 1;
    for (int i = 0; i <= 256; ++i) {
        double th = M_PI * i / 256;
        scale = std::max(scale, std::abs(st.psi(th)) + std::abs(st.s(th)));
    }
    if (res > std::max(cfg.tol, 1e-4 * scale))
        throw std::runtime_error("state " + stem + ": Codazzi-Mainardi residual " +
                                 format_double(res));
    auto profile = profile_curve(st, cfg.grid_n + 1);
    std::vector<std::pair<double, double>> roc;
    for (int i = 0; i <= cfg.grid_n; ++i) {
        double th = M_PI * i / cfg.grid_n;
        roc.emplace_back(st.psi(th), st.s(th));
    }
    if (cfg.want_csv) {
        std::ofstream state_out(fs::path(cfg.out_dir) / (stem + "_state.csv"));
        write_state_csv(state_out, st, cfg.grid_n);
        std::ofstream prof_out(fs::path(cfg.out_dir) / (stem + "_profile.csv"));
        write_profile_csv(prof_out, profile);
    }
    if (cfg.want_svg) {
        std::ofstream roc_out(fs::path(cfg.out_dir) / (stem + "_roc.svg"));
        write_svg(roc_out, {roc}, true);
        std::ofstream prof_out(fs::path(cfg.out_dir) / (stem + "_profile.svg"));
        write_svg(prof_out, {profile}, false);
    }
}

std::string slope_text(const Slope& s)
{
    switch (s.kind) {
    case Slope::Kind::Value: return format_double(s.as_double());
    case Slope::Kind::Round: return "round";
    default: return "undefined (flat-order contact)";
    }
}

int cmd_evolve(const RunConfig& cfg)
{
    if (cfg.times.empty()) throw ConfigError("config: evolve needs a non-empty times list");
    AstigmatismCoefficients co = coefficients_from_config(cfg);
    std::optional<CosPoly> support;
    if (cfg.have_d) support = quadrature_r_from_s(co, Rat(cfg.d1), Rat(cfg.d2));
    FlowParams params(cfg.n, Rat(cfg.psi_inf));
    FlowSolution sol(params, co, support);

    FateReport fate = classify_fate(co, params);
    UmbilicData u0 = order_and_degeneracy(co);
    double t_max = cfg.times.back();
    auto events = convexity_and_umbilic_events(sol, 0.0, std::max(t_max, 1e-9));

    std::ostringstream summary;
    summary << "fate: " << fate.verdict_name() << " (witness mode " << fate.witness_mode
            << ", rate " << format_double(to_double(fate.witness_rate)) << ")\n";
    summary << "initial order: " << u0.order
            << (u0.nondegenerate ? " (nondegenerate)" : " (degenerate)") << "\n";
    for (size_t i = 0; i < cfg.times.size(); ++i) {
        double t = cfg.times[i];
        SphereState st = sol.state_at(t);
        warn_if_nonconvex(st, t);
        emit_state(cfg, st, time_label(i));
        auto [mn, ms] = slope_at_poles(sol.evolve_s(t), cfg.tol);
        summary << time_label(i) << ": t=" << format_double(t)
                << " mu_N=" << slope_text(mn) << " mu_S=" << slope_text(ms) << "\n";
    }
    for (const auto& e : events)
        summary << (e.type == FlowEvent::Type::FocalCrossing ? "focal crossing"
                                                             : "umbilic pop")
                << " at t=" << format_double(e.t) << " theta=" << format_double(e.theta)
                << "\n";
    fs::create_directories(cfg.out_dir);
    std::ofstream sum_out(fs::path(cfg.out_dir) / "summary.txt");
    sum_out << summary.str();
    std::cout << summary.str();
    return 0;
}

int cmd_classify(const RunConfig& cfg)
{
    AstigmatismCoefficients co = coefficients_from_config(cfg);
    FlowParams params(cfg.n, Rat(cfg.psi_inf));
    FateReport rep = classify_fate(co, params);
    std::cout << rep.verdict_name();
    switch (rep.verdict) {
    case FateReport::Verdict::ConvergesRound:
        std::cout << ", radius " << format_double(cfg.psi_inf) << "\n";
        break;
    case FateReport::Verdict::ConvergesHopf:
        std::cout << ", limit psi + " << format_double(to_double(params.lambda()))
                  << " s = " << format_double(cfg.psi_inf) << "\n";
        break;
    case FateReport::Verdict::Diverges:
        std::cout << ", rate " << format_double(to_double(rep.witness_rate)) << "\n";
        break;
    }
    std::cout << "witness mode " << rep.witness_mode << ", rate "
              << format_double(to_double(rep.witness_rate)) << "\n";
    return 0;
}

int cmd_decompose(const RunConfig& cfg)
{
    if (cfg.source != RunConfig::Source::Samples)
        throw ConfigError("config: decompose needs initial.samples");
    auto dec = decompose_samples(read_samples(cfg.samples_path), cfg.n, 32, cfg.tol);
    auto print_list = [](const char* name, const std::vector<double>& v) {
        std::cout << name << " =";
        for (double x : v) std::cout << ' ' << format_double(x);
        std::cout << "\n";
    };
    print_list("a", dec.coeffs.trig_a);
    print_list("b", dec.coeffs.trig_b);
    print_list("c", dec.coeffs.legendre_c);
    std::cout << "residual_sup = " << format_double(dec.residual_sup) << "\n";
    if (!dec.converged) {
        std::cerr << "decompose: residual exceeds tol " << format_double(cfg.tol) << "\n";
        return kExitVerifyFail;
    }
    return 0;
}

int cmd_soliton(const RunConfig& cfg)
{
    if (cfg.source != RunConfig::Source::Soliton)
        throw ConfigError("config: soliton needs initial.soliton.* keys");
    if (cfg.times.empty()) throw ConfigError("config: soliton needs a non-empty times list");
    for (size_t i = 0; i < cfg.times.size(); ++i) {
        double t = cfg.times[i];
        SphereState st = soliton_state(cfg.sol_lambda, cfg.psi_inf, cfg.sol_psi0,
                                       cfg.sol_s_half, t);
        warn_if_nonconvex(st, t);
        emit_state(cfg, st, time_label(i));
        std::cout << time_label(i) << ": t=" << format_double(t)
                  << " psi(0)=" << format_double(st.psi(0.0))
                  << " s(pi/2)=" << format_double(st.s(M_PI / 2)) << "\n";
    }
    return 0;
}

int cmd_render(const std::string& csv_path, const std::string& out_dir)
{
    std::ifstream in(csv_path);
    if (!in) throw ConfigError("render: cannot open " + csv_path);
    std::string header;
    if (!std::getline(in, header)) throw ConfigError("render: empty file " + csv_path);
    std::vector<std::pair<double, double>> curve;
    bool state_file = header.rfind("theta,", 0) == 0;
    if (!state_file && header != "x1,x2")
        throw ConfigError("render: unrecognized CSV header in " + csv_path);
    std::string line;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        double f1, f2, f3, f4;
        if (state_file) {
            if (!(ls >> f1 >> f2 >> f3 >> f4))
                throw ConfigError("render: bad row at line " + std::to_string(lineno));
            curve.emplace_back(f2, f3); // RoC diagram: (psi, s)
        } else {
            if (!(ls >> f1 >> f2))
                throw ConfigError("render: bad row at line " + std::to_string(lineno));
            curve.emplace_back(f1, f2);
        }
    }
    fs::path out = fs::path(out_dir) / fs::path(csv_path).filename().replace_extension(".svg");
    fs::create_directories(out.parent_path().empty() ? "." : out.parent_path().string());
    std::ofstream svg(out);
    write_svg(svg, {curve}, state_file);
    std::cout << "wrote " << out.string() << "\n";
    return 0;
}

int verify_lemmas(int max_lm)
{
    int fails = 0;
    for (int m = 0; m <= max_lm; ++m)
        for (int l = 0; l <= max_lm; ++l) {
            if (m >= 1 && l >= m - 1 && !lemma1_holds(l, m)) {
                std::cerr << "lemma1 failed at l=" << l << " m=" << m << "\n";
                ++fails;
            }
            if (l >= m && !lemma2_holds(l, m)) {
                std::cerr << "lemma2 failed at l=" << l << " m=" << m << "\n";
                ++fails;
            }
        }
    std::cout << "lemmas: max index " << max_lm << (fails ? ": FAIL\n" : ": all hold\n");
    return fails ? kExitVerifyFail : 0;
}

int verify_roundtrip()
{
    int fails = 0;
    for (int l = 0; l <= 8; ++l) {
        for (int kind = 0; kind < 2; ++kind) {
            CosPoly s = kind == 0 ? CosPoly({Rat(1)}, 2 * l + 2).normalized()
                                  : CosPoly({Rat(0), Rat(1)}, 2 * l + 2).normalized();
            CosPoly r = quadrature_r_from_s(s, Rat(2), Rat(7));
            if (!(s_from_r(r) == s) || !codazzi_mainardi_poly(psi_from_r(r), s).is_zero()) {
                std::cerr << "trig roundtrip failed at l=" << l << " kind=" << kind << "\n";
                ++fails;
            }
        }
    }
    for (int n = 0; n <= 3; ++n)
        for (int l = n; l <= 10; ++l) {
            AstigmatismCoefficients co;
            co.n = n;
            co.legendre_c.assign(l - n + 1, Rat(0));
            co.legendre_c[l - n] = Rat(1);
            CosPoly r = quadrature_r_from_s(co, Rat(1), Rat(3));
            if (!(s_from_r(r) == co.to_poly())) {
                std::cerr << "legendre roundtrip failed at n=" << n << " l=" << l << "\n";
                ++fails;
            }
        }
    std::cout << (fails ? "roundtrip: FAIL\n" : "roundtrip: exact\n");
    return fails ? kExitVerifyFail : 0;
}

int verify_oracle(int n, int N, double dt)
{
    FlowParams params(n, Rat(5));
    AstigmatismCoefficients co;
    co.n = n;
    if (n == 0) {
        co.legendre_c = {Rat(1), Rat(1), Rat(2), Rat(3)};
    } else {
        co.trig_a = {Rat(1)};
        co.trig_b = {Rat(1)};
        for (int l = 1; l < n; ++l) {
            co.trig_a.push_back(Rat(0));
            co.trig_b.push_back(Rat(0));
        }
        co.legendre_c = {Rat(2), Rat(3)};
    }
    FlowSolution sol(params, co);
    double lambda = to_double(params.lambda());
    auto u = fd_evolve_s(lambda, [&](double th) { return sol.s_at(0.0, th); }, 1.0, N, dt);
    Grid g(N);
    double sup = 0;
    for (int i = 0; i < N - 1; ++i)
        sup = std::max(sup, std::abs(u[i] - sol.s_at(1.0, g.theta[i])));
    std::cout << "oracle n=" << n << ": sup discrepancy " << format_double(sup) << "\n";
    // second-order scheme: scale the reference threshold from N=512, dt=1e-3
    double h2 = (512.0 / N) * (512.0 / N), k2 = (dt / 1e-3) * (dt / 1e-3);
    double thr = 5e-4 * std::max(1.0, (h2 + k2) / 2);
    if (sup >= thr) {
        std::cerr << "oracle: discrepancy exceeds " << format_double(thr) << "\n";
        return kExitVerifyFail;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"integer linear Hopf curvature flow for rotationally symmetric convex spheres"};
    app.require_subcommand(1);

    std::string config_path, out_dir, format, render_path;
    int grid = 0;
    double dt = 0, tol = 0;

    auto add_common = [&](CLI::App* cmd, bool need_config) {
        auto* opt = cmd->add_option("--config", config_path, "run configuration file");
        if (need_config) opt->required();
        cmd->add_option("--out", out_dir, "output directory");
        cmd->add_option("--format", format, "csv|svg|both")
            ->check(CLI::IsMember({"csv", "svg", "both"}));
        cmd->add_option("--grid", grid, "output/oracle grid size");
        cmd->add_option("--dt", dt, "oracle time step");
        cmd->add_option("--tol", tol, "tolerance override");
    };

    auto* evolve = app.add_subcommand("evolve", "run the flow and emit states");
    add_common(evolve, true);
    auto* classify = app.add_subcommand("classify", "classify the fate of the flow");
    add_common(classify, true);
    auto* decompose = app.add_subcommand("decompose", "fit modal coefficients to samples");
    add_common(decompose, true);
    auto* soliton = app.add_subcommand("soliton", "emit soliton states");
    add_common(soliton, true);
    auto* render = app.add_subcommand("render", "render a CSV file to SVG");
    render->add_option("csv", render_path, "state or profile CSV")->required();
    render->add_option("--out", out_dir, "output directory");

    auto* verify = app.add_subcommand("verify", "run verification suites");
    std::string suite = "all";
    int verify_max = 30, verify_n = -1;
    verify->add_option("suite", suite, "lemmas|roundtrip|oracle|all")
        ->check(CLI::IsMember({"lemmas", "roundtrip", "oracle", "all"}));
    verify->add_option("--max", verify_max, "max lemma index");
    verify->add_option("--n", verify_n, "flow integer for the oracle suite");
    verify->add_option("--grid", grid, "oracle grid size");
    verify->add_option("--dt", dt, "oracle time step");

    CLI11_PARSE(app, argc, argv);

    try {
        if (verify->parsed()) {
            int rc = 0;
            if (suite == "lemmas" || suite == "all") rc |= verify_lemmas(verify_max);
            if (suite == "roundtrip" || suite == "all") rc |= verify_roundtrip();
            if (suite == "oracle" || suite == "all") {
                int N = grid > 0 ? grid : 512;
                double step = dt > 0 ? dt : 1e-3;
                if (verify_n >= 0)
                    rc |= verify_oracle(verify_n, N, step);
                else
                    rc |= verify_oracle(0, N, step) | verify_oracle(1, N, step);
            }
            return rc ? kExitVerifyFail : 0;
        }
        if (render->parsed()) return cmd_render(render_path, out_dir.empty() ? "." : out_dir);

        RunConfig cfg = parse_config_file(config_path);
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (!format.empty()) {
            cfg.want_csv = format == "csv" || format == "both";
            cfg.want_svg = format == "svg" || format == "both";
        }
        if (grid > 0) cfg.grid_n = grid;
        if (dt > 0) cfg.grid_dt = dt;
        if (tol > 0) cfg.tol = tol;

        if (evolve->parsed()) return cmd_evolve(cfg);
        if (classify->parsed()) return cmd_classify(cfg);
        if (decompose->parsed()) return cmd_decompose(cfg);
        if (soliton->parsed()) return cmd_soliton(cfg);
    } catch (const ConfigError& e) {
        std::cerr << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitVerifyFail;
    }
    return 0;
}
