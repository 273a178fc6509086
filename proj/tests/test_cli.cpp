#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "trickle/analytics/single_cell.hpp"
#include "trickle/cli/commands.hpp"
#include "trickle/cli/csv.hpp"
#include "trickle/cli/experiment.hpp"
#include "trickle/core/config.hpp"

using namespace trickle;
using namespace trickle::cli;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "trickle");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

// Fresh directory under the system temp dir, removed on scope exit.
struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("trickle_cli_test_" + tag + "_" + std::to_string(std::rand()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string str() const { return path.string(); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::vector<std::string> lines_of(const fs::path& p) {
    std::ifstream in(p);
    std::vector<std::string> out;
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    for (std::string f; std::getline(ss, f, ',');) out.push_back(f);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

} // namespace

TEST_CASE("mode names round-trip") {
    for (auto m : {Mode::Simulate, Mode::Analytic, Mode::Compare, Mode::Multicell, Mode::MarkovValidate}) {
        CHECK(parse_mode(mode_name(m)) == m);
    }
    CHECK(mode_name(Mode::MarkovValidate) == "markov-validate");
    CHECK_THROWS_AS(parse_mode("plot"), ConfigError);
}

TEST_CASE("spec text parsing") {
    const auto s = parse_spec_text(R"(# sweep
name = sweep1
mode = compare
k = 1, 2,3
eta = 0, 0.5

replications = 7
ks_threshold = 0.04
include-self = false
)",
                                   ExperimentSpec{});
    CHECK(s.name == "sweep1");
    CHECK(s.mode == Mode::Compare);
    CHECK(s.k == std::vector<int>{1, 2, 3});
    CHECK(s.eta == std::vector<double>{0.0, 0.5});
    CHECK(s.replications == 7);
    CHECK(s.ks_threshold == 0.04);
    CHECK_FALSE(s.include_self);
    CHECK(s.n == std::vector<int>{50});  // untouched default
}

TEST_CASE("spec text errors") {
    CHECK_THROWS_AS(parse_spec_text("k = 1\nk = 2\n", {}), ConfigError);
    CHECK_THROWS_AS(parse_spec_text("k = 1\nK_x = 2\n", {}), ConfigError);
    CHECK_THROWS_AS(parse_spec_text("n = ten\n", {}), ConfigError);
    CHECK_THROWS_AS(parse_spec_text("n = 10 20\n", {}), ConfigError);
    CHECK_THROWS_AS(parse_spec_text("seed\n", {}), ConfigError);
    CHECK_THROWS_AS(parse_spec_text("toroidal = maybe\n", {}), ConfigError);
    CHECK_THROWS_AS(parse_spec_text("profile = huge\n", {}), ConfigError);
    // the same key spelled with '-' and '_' is still a duplicate
    CHECK_THROWS_AS(parse_spec_text("t-points = 5\nt_points = 6\n", {}), ConfigError);
    CHECK_THROWS_AS(load_spec_file("/nonexistent/spec.txt", {}), ConfigError);
}

TEST_CASE("spec validation") {
    ExperimentSpec s;
    CHECK_NOTHROW(s.validate());
    s.k.clear();
    CHECK_THROWS_AS(s.validate(), ConfigError);
    s = {};
    s.replications = 0;
    CHECK_THROWS_AS(s.validate(), ConfigError);
    s = {};
    s.eta = {1.5};
    CHECK_THROWS_AS(s.validate(), ConfigError);
    s = {};
    s.histogram_bins = 0;
    CHECK_THROWS_AS(s.validate(), ConfigError);
    s = {};
    s.theta_min = 2.0;
    CHECK_THROWS_AS(s.validate(), ConfigError);
}

TEST_CASE("profiles") {
    ExperimentSpec s;
    apply_profile(s, "paper");
    CHECK(s.replications == 1000);
    CHECK(s.duration == 100.0);
    CHECK(s.profile == "paper");
    apply_profile(s, "quick");
    CHECK(s.replications == 50);
    CHECK_THROWS_AS(apply_profile(s, "other"), ConfigError);
    // a profile line sets the baseline whatever its position in the file
    const auto t = parse_spec_text("replications = 5\nprofile = paper\n", {});
    CHECK(t.replications == 5);
    CHECK(t.profile == "paper");
}

TEST_CASE("canonical form ignores output location and threads") {
    ExperimentSpec a;
    ExperimentSpec b;
    b.output_dir = "/elsewhere";
    b.threads = 3;
    CHECK(a.canonical() == b.canonical());
    b.seed = 2;
    CHECK(a.canonical() != b.canonical());
    CHECK(comment_line(a).rfind("# trickle " + version_string() + " | ", 0) == 0);
}

TEST_CASE("help and version exit 0, bad flags exit 2") {
    CHECK(invoke({"--version"}).code == kExitOk);
    CHECK(invoke({"--version"}).out.find(version_string()) != std::string::npos);
    CHECK(invoke({"simulate", "--help"}).code == kExitOk);
    CHECK(invoke({}).code == kExitConfigError);
    CHECK(invoke({"simulate", "--bogus", "1"}).code == kExitConfigError);
    CHECK(invoke({"frobnicate"}).code == kExitConfigError);
    TempDir d("bad");
    CHECK(invoke({"simulate", "--n", "abc", "--out", d.str()}).code == kExitConfigError);
    CHECK(invoke({"simulate", "--replications", "0", "--out", d.str()}).code == kExitConfigError);
    CHECK(invoke({"simulate", "--spec", (d.path / "missing.txt").string()}).code == kExitConfigError);
}

TEST_CASE("simulate writes counts and gaps") {
    TempDir d("sim");
    const auto r = invoke({"simulate", "--k", "1", "--n", "10", "--replications", "3", "--duration", "20", "--warmup",
                        "2", "--name", "s", "--out", d.str()});
    REQUIRE(r.code == kExitOk);
    const auto counts = lines_of(d.path / "s_counts.csv");
    REQUIRE(counts.size() == 3);
    CHECK(counts[0].rfind("# trickle ", 0) == 0);
    CHECK(counts[1] == "k,n,eta,mean_N_sim,std,ci_halfwidth,replications");
    const auto f = split(counts[2]);
    CHECK(f[0] == "1");
    CHECK(f[1] == "10");
    CHECK(f[6] == "3");
    const double mean = std::stod(f[3]);
    CHECK(mean > 2.0);
    CHECK(mean < 6.0);
    const auto gaps = lines_of(d.path / "s_gaps.csv");
    CHECK(gaps[1] == "k,n,eta,gap");
    CHECK(gaps.size() > 100);
}

TEST_CASE("reruns are byte identical regardless of threads") {
    TempDir a("rerun_a");
    TempDir b("rerun_b");
    const std::vector<std::string> common = {"--k", "1,2", "--n", "20", "--eta", "0,0.3", "--replications", "4",
                                             "--duration", "15", "--name", "r"};
    auto args_a = common;
    args_a.insert(args_a.begin(), "compare");
    args_a.insert(args_a.end(), {"--out", a.str(), "--threads", "1"});
    auto args_b = common;
    args_b.insert(args_b.begin(), "compare");
    args_b.insert(args_b.end(), {"--out", b.str(), "--threads", "4"});
    const auto ra = invoke(args_a);
    const auto rb = invoke(args_b);
    REQUIRE(ra.code == rb.code);
    for (const char* f : {"r_hist.csv", "r_ks.csv"}) {
        CHECK(slurp(a.path / f) == slurp(b.path / f));
        CHECK_FALSE(slurp(a.path / f).empty());
    }
}

TEST_CASE("analytic output carries mean_N") {
    TempDir d("ana");
    const auto r = invoke({"analytic", "--k", "1,3", "--n", "50", "--eta", "0,0.5", "--t-points", "11", "--name", "a",
                        "--out", d.str()});
    REQUIRE(r.code == kExitOk);
    const auto rows = lines_of(d.path / "a_analytic.csv");
    CHECK(rows[1] == "k,n,eta,quantity,t,value");
    int found = 0;
    int pdf_rows = 0;
    for (std::size_t i = 2; i < rows.size(); ++i) {
        const auto f = split(rows[i]);
        REQUIRE(f.size() == 6);
        if (f[3] == "pdf") ++pdf_rows;
        if (f[3] != "mean_N") continue;
        ++found;
        const analytics::AnalyticParams p{std::stoi(f[0]), std::stod(f[1]), std::stod(f[2])};
        CHECK(std::stod(f[5]) == analytics::mean_N(p));
        CHECK(f[4].empty());
    }
    CHECK(found == 4);
    CHECK(pdf_rows == 4 * 11);
    const auto m = lines_of(d.path / "a_exp_moments.csv");
    CHECK(m[1] == "k,n,eta,j,value,reference,rel_err");
    CHECK(m.size() == 2 + 4 * 4);
}

TEST_CASE("analytic eta = 1 gives k transmissions per interval") {
    TempDir d("eta1");
    REQUIRE(invoke({"analytic", "--k", "2", "--n", "30", "--eta", "1", "--t-points", "5", "--name", "e", "--out",
                 d.str()})
                .code == kExitOk);
    bool seen = false;
    for (const auto& line : lines_of(d.path / "e_analytic.csv")) {
        const auto f = split(line);
        if (f.size() == 6 && f[3] == "mean_N") {
            CHECK(std::stod(f[5]) == doctest::Approx(2.0));
            seen = true;
        }
    }
    CHECK(seen);
}

TEST_CASE("compare: pass, fail and out-of-model") {
    TempDir d("cmp");
    const auto ok = invoke({"compare", "--k", "1", "--n", "50", "--replications", "20", "--name", "ok", "--out", d.str()});
    CHECK(ok.code == kExitOk);
    const auto ks = lines_of(d.path / "ok_ks.csv");
    CHECK(ks[1] == "k,n,eta,gaps,ks_statistic,threshold,status");
    CHECK(split(ks[2])[6] == "pass");
    const auto hist = lines_of(d.path / "ok_hist.csv");
    CHECK(hist[1] == "k,n,eta,t_bin_lo,t_bin_hi,empirical_density,analytic_density");
    CHECK(hist.size() == 2 + 60);

    const auto bad = invoke({"compare", "--k", "1", "--n", "50", "--replications", "20", "--ks-threshold", "0.0001",
                          "--name", "bad", "--out", d.str()});
    CHECK(bad.code == kExitValidationFailure);
    CHECK(split(lines_of(d.path / "bad_ks.csv")[2])[6] == "fail");

    const auto lone = invoke({"compare", "--k", "1", "--n", "1", "--replications", "2", "--name", "lone", "--out", d.str()});
    CHECK(lone.code == kExitOk);
    CHECK(split(lines_of(d.path / "lone_ks.csv")[2])[6] == "out_of_model");
}

TEST_CASE("numerical failures exit 3") {
    TempDir d("num");
    // the limiting-density recursion loses its cross-check at large k
    const auto r = invoke({"analytic", "--k", "60", "--n", "50", "--name", "x", "--out", d.str()});
    CHECK(r.code == kExitNumericalError);
    CHECK(r.err.find("numerical failure") != std::string::npos);
    CHECK(invoke({"analytic", "--k", "200", "--n", "50", "--name", "y", "--out", d.str()}).code == kExitNumericalError);
}

TEST_CASE("spec file entries override flags") {
    TempDir d("specfile");
    const auto spec = d.path / "exp.txt";
    {
        std::ofstream f(spec);
        f << "# override\nname = fromfile\nmode = simulate\nn = 12\nreplications = 2\nduration = 10\n";
    }
    const auto r = invoke({"simulate", "--n", "99", "--name", "fromflag", "--spec", spec.string(), "--out", d.str()});
    REQUIRE(r.code == kExitOk);
    CHECK_FALSE(fs::exists(d.path / "fromflag_counts.csv"));
    const auto rows = lines_of(d.path / "fromfile_counts.csv");
    REQUIRE(rows.size() == 3);
    CHECK(split(rows[2])[1] == "12");
    CHECK(rows[0].find("n=12") != std::string::npos);

    // a spec file for another mode is rejected
    const auto other = d.path / "other.txt";
    {
        std::ofstream f(other);
        f << "mode = multicell\n";
    }
    CHECK(invoke({"simulate", "--spec", other.string(), "--out", d.str()}).code == kExitConfigError);
}

TEST_CASE("profile flag sets replications unless overridden") {
    ExperimentSpec s;
    apply_profile(s, "paper");
    TempDir d("prof");
    // explicit flags beat the profile; '--profile paper' with no override
    // would take minutes, so only the combination is run
    const auto r = invoke({"simulate", "--profile", "paper", "--replications", "2", "--duration", "5", "--name", "p",
                        "--out", d.str()});
    REQUIRE(r.code == kExitOk);
    const auto rows = lines_of(d.path / "p_counts.csv");
    CHECK(split(rows[2])[6] == "2");
    CHECK(rows[0].find("profile=paper") != std::string::npos);
}

TEST_CASE("csv quoting") {
    TempDir d("csv");
    ExperimentSpec s;
    CsvFile f(d.path / "q.csv", s, {"a", "b"});
    f.row(std::string("x,y"), 0.1);
    f.row("say \"hi\"", 2);
    f.close();
    const auto rows = lines_of(d.path / "q.csv");
    REQUIRE(rows.size() == 4);
    CHECK(rows[1] == "a,b");
    CHECK(rows[2] == "\"x,y\",0.10000000000000001");
    CHECK(rows[3] == "\"say \"\"hi\"\"\",2");
}

TEST_CASE("multicell smoke") {
    TempDir d("mc");
    const auto r = invoke({"multicell", "--side", "12", "--range", "2,3", "--k", "1", "--eta", "0,0.5", "--replications",
                        "2", "--duration", "20", "--theta-min", "0.5", "--theta-max", "2", "--name", "m", "--out",
                        d.str()});
    CHECK(r.code == kExitOk);
    const auto theta = lines_of(d.path / "m_theta.csv");
    CHECK(theta[1] == "k,R,eta,S,mean_sim,estimate,theta,side,ci_halfwidth,large_range_estimate,status");
    CHECK(theta.size() == 2 + 4);
    CHECK(split(theta[2])[3] == "13");
    const auto trend = lines_of(d.path / "m_trend.csv");
    CHECK(trend[1] == "side,k,eta,spearman_R_theta,status");
    CHECK(trend.size() == 3);
}
