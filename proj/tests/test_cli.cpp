#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

fs::path work_dir()
{
    static fs::path p = [] {
        fs::path d = fs::temp_directory_path() / "hopfflow_cli_test";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return p;
}

struct RunResult {
    int code;
    std::string out;
};

RunResult run(const std::string& args)
{
    fs::path log = work_dir() / "cmd_out.txt";
    std::string cmd = std::string(HOPFFLOW_BIN) + " " + args + " > " + log.string() + " 2>&1";
    int st = std::system(cmd.c_str());
    std::ifstream in(log);
    std::stringstream buf;
    buf << in.rdbuf();
    return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, buf.str()};
}

fs::path write_file(const std::string& name, const std::string& text)
{
    fs::path p = work_dir() / name;
    std::ofstream(p) << text;
    return p;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

TEST_CASE("verification suites succeed")
{
    CHECK(run("verify lemmas --max 12").code == 0);
    CHECK(run("verify roundtrip").code == 0);
    auto r = run("verify oracle --grid 256 --dt 0.002");
    CHECK(r.code == 0);
    CHECK(r.out.find("oracle n=0") != std::string::npos);
    CHECK(r.out.find("oracle n=1") != std::string::npos);
}

TEST_CASE("config errors exit with code 2")
{
    CHECK(run("evolve --config " + (work_dir() / "missing.cfg").string()).code == 2);

    auto no_times = write_file("no_times.cfg",
                               "flow.n = 0\nflow.psi_inf = 10\ninitial.a = 1\n");
    CHECK(run("evolve --config " + no_times.string()).code == 2);

    auto unknown = write_file("unknown.cfg", "flow.n = 0\ninitial.a = 1\nbogus = 3\n");
    CHECK(run("classify --config " + unknown.string()).code == 2);

    auto dup = write_file("dup.cfg", "flow.n = 0\ninitial.a = 1\ninitial.a = 2\n");
    CHECK(run("classify --config " + dup.string()).code == 2);

    auto two_src = write_file("two_src.cfg",
                              "flow.n = 0\ninitial.a = 1\ninitial.samples = foo\n");
    CHECK(run("classify --config " + two_src.string()).code == 2);

    auto unsorted = write_file("unsorted.cfg",
                               "flow.n = 0\ninitial.a = 1\ntimes = 1, 0.5\n");
    CHECK(run("evolve --config " + unsorted.string()).code == 2);

    auto bad_mu = write_file("bad_mu.cfg",
                             "flow.n = 0\ninitial.hopf.mu = 2.7\ninitial.hopf.c0 = 1\n");
    CHECK(run("classify --config " + bad_mu.string()).code == 2);
}

TEST_CASE("evolve writes states, profiles and a summary")
{
    auto cfg = write_file("turnip.cfg",
                          "flow.n = 0\n"
                          "flow.psi_inf = 10\n"
                          "initial.a = 3, 10\n"
                          "initial.b = 20, 7\n"
                          "initial.d1 = 0\n"
                          "initial.d2 = 30\n"
                          "times = 0, 1\n"
                          "output.formats = csv, svg\n"
                          "grid.n = 64\n");
    fs::path out = work_dir() / "turnip_out";
    auto r = run("evolve --config " + cfg.string() + " --out " + out.string());
    CHECK(r.code == 0);
    CHECK(r.out.find("fate:") != std::string::npos);
    CHECK(fs::exists(out / "summary.txt"));
    for (const char* f : {"t0_state.csv", "t0_profile.csv", "t1_state.csv",
                          "t0_roc.svg", "t0_profile.svg"})
        CHECK(fs::exists(out / f));

    // s changes sign along the t=0 state (an interior umbilic circle)
    std::ifstream st(out / "t0_state.csv");
    std::string header;
    std::getline(st, header);
    CHECK(header == "theta,psi,s,r");
    bool pos = false, neg = false;
    std::string line;
    while (std::getline(st, line)) {
        std::replace(line.begin(), line.end(), ',', ' ');
        double th, psi, s, rr;
        std::istringstream(line) >> th >> psi >> s >> rr;
        (s > 1e-12 ? pos : neg) |= std::abs(s) > 1e-12;
    }
    CHECK(pos);
    CHECK(neg);
}

TEST_CASE("CSV output is byte-identical across runs")
{
    auto cfg = write_file("det.cfg",
                          "flow.n = 1\n"
                          "flow.psi_inf = 10\n"
                          "initial.a = 2, 1\n"
                          "initial.b = 5, -1\n"
                          "times = 0, 0.25\n"
                          "grid.n = 48\n");
    fs::path o1 = work_dir() / "det1", o2 = work_dir() / "det2";
    CHECK(run("evolve --config " + cfg.string() + " --out " + o1.string()).code == 0);
    CHECK(run("evolve --config " + cfg.string() + " --out " + o2.string()).code == 0);
    for (const char* f : {"t0_state.csv", "t1_state.csv", "t1_profile.csv"}) {
        std::string c1 = slurp(o1 / f), c2 = slurp(o2 / f);
        CHECK(!c1.empty());
        CHECK(c1 == c2);
        CHECK(c1.find('\r') == std::string::npos); // LF endings only
    }
}

TEST_CASE("classify reports the three fates")
{
    auto hopf = write_file("cl_hopf.cfg", "flow.n = 0\nflow.psi_inf = 10\ninitial.a = 3\n");
    auto r = run("classify --config " + hopf.string());
    CHECK(r.code == 0);
    CHECK(r.out.find("ConvergesHopf") != std::string::npos);
    CHECK(r.out.find("psi + 2 s = 10") != std::string::npos);

    auto div = write_file("cl_div.cfg",
                          "flow.n = 1\nflow.psi_inf = 10\ninitial.a = 2\ninitial.b = 5\n");
    r = run("classify --config " + div.string());
    CHECK(r.code == 0);
    CHECK(r.out.find("Diverges, rate 0.5") != std::string::npos);

    auto rnd = write_file("cl_round.cfg",
                          "flow.n = 0\nflow.psi_inf = 4\ninitial.c = 0, 0, 1\n");
    r = run("classify --config " + rnd.string());
    CHECK(r.code == 0);
    CHECK(r.out.find("ConvergesRound, radius 4") != std::string::npos);

    // order-1 hopf-sphere source under n = 0 keeps its stationary component
    auto hs = write_file("cl_hs.cfg",
                         "flow.n = 0\nflow.psi_inf = 4\n"
                         "initial.hopf.mu = 1.5\ninitial.hopf.c0 = 1\n");
    r = run("classify --config " + hs.string());
    CHECK(r.code == 0);
    CHECK(r.out.find("ConvergesHopf") != std::string::npos);
}

TEST_CASE("decompose recovers coefficients from samples")
{
    std::ostringstream samples;
    samples << std::setprecision(17) << "# s = 2 sin^2 + cos sin^4\n";
    for (int i = 1; i < 200; ++i) {
        double th = M_PI * i / 200;
        double sn = std::sin(th);
        samples << th << ' '
                << 2.0 * sn * sn + std::cos(th) * std::pow(sn, 4) << '\n';
    }
    write_file("dec_samples.txt", samples.str());
    auto cfg = write_file("dec.cfg",
                          "flow.n = 1\ninitial.samples = "
                          + (work_dir() / "dec_samples.txt").string() + "\n");
    auto r = run("decompose --config " + cfg.string());
    CHECK(r.code == 0);
    REQUIRE(r.out.find("a =") != std::string::npos);
    double a0 = 0;
    std::istringstream(r.out.substr(r.out.find("a =") + 3)) >> a0;
    CHECK(a0 == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(r.out.find("residual_sup") != std::string::npos);
}

TEST_CASE("soliton emission and rendering")
{
    auto cfg = write_file("sol.cfg",
                          "flow.psi_inf = 10\n"
                          "initial.soliton.lambda = 4\n"
                          "initial.soliton.psi0 = 14\n"
                          "initial.soliton.s_half = 1\n"
                          "times = 0, 0.5\n"
                          "grid.n = 64\n");
    fs::path out = work_dir() / "sol_out";
    auto r = run("soliton --config " + cfg.string() + " --out " + out.string());
    CHECK(r.code == 0);
    CHECK(fs::exists(out / "t0_state.csv"));
    CHECK(fs::exists(out / "t1_state.csv"));

    // render both CSV kinds back to SVG
    r = run("render " + (out / "t0_state.csv").string() + " --out " + out.string());
    CHECK(r.code == 0);
    CHECK(slurp(out / "t0_state.svg").rfind("<svg", 0) == 0);
    r = run("render " + (out / "t0_profile.csv").string() + " --out " + out.string());
    CHECK(r.code == 0);
    CHECK(slurp(out / "t0_profile.svg").rfind("<svg", 0) == 0);

    // unrecognized CSV is a config error
    write_file("bad.csv", "foo,bar\n1,2\n");
    CHECK(run("render " + (work_dir() / "bad.csv").string()).code == 2);
}

TEST_CASE("format flag switches outputs")
{
    auto cfg = write_file("fmt.cfg",
                          "flow.n = 0\nflow.psi_inf = 10\ninitial.a = 1\n"
                          "times = 0\ngrid.n = 48\n");
    fs::path out = work_dir() / "fmt_out";
    CHECK(run("evolve --config " + cfg.string() + " --out " + out.string()
              + " --format svg").code == 0);
    CHECK(fs::exists(out / "t0_roc.svg"));
    CHECK(!fs::exists(out / "t0_state.csv"));
}
