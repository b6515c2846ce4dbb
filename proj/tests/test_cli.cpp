#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "lassodet/analyze.hpp"
#include "lassodet/cli.hpp"
#include "lassodet/rng.hpp"

using namespace lassodet;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("lassodet_cli_" + name);
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Binary predictors m1..m8; `interaction` plants 3 m1 m2, otherwise the
// response depends on main effects only.
fs::path synthetic(const std::string& name, bool interaction) {
    const fs::path path = fs::temp_directory_path() / ("lassodet_" + name + ".csv");
    std::ofstream f(path);
    f << "m1,m2,m3,m4,m5,m6,m7,m8,y\n";
    RngStream rng(interaction ? 606 : 505, 0);
    for (int i = 0; i < 300; ++i) {
        double m[8];
        for (double& v : m) v = rng.uniform() < 0.5 ? 1.0 : 0.0;
        const double y = interaction ? 0.3 * m[2] + 3.0 * m[0] * m[1] + rng.normal()
                                     : 2.0 * m[0] - 1.5 * m[1] + m[2] + rng.normal();
        for (double v : m) f << v << ',';
        f << y << '\n';
    }
    return path;
}

}  // namespace

TEST_CASE("theory prob and table1") {
    auto r = run({"theory", "prob", "--beta1", "3", "--sigma", "1", "--p", "2"});
    CHECK(r.code == 0);
    CHECK(r.out == "0.7487\n");
    r = run({"theory", "prob", "--p", "10", "--given-sign"});
    CHECK(r.out == "0.9499\n");
    r = run({"theory", "prob", "--p", "2", "--csv"});
    CHECK(r.out.rfind("beta1,sigma,p,conditional,probability\n3,1,2,0,0.74865", 0) == 0);
    r = run({"theory", "table1"});
    CHECK(r.code == 0);
    CHECK(r.out.find("Four-Way Interactions   -        0.9653") != std::string::npos);
    r = run({"theory", "table1", "--csv"});
    CHECK(r.out.find("Main Effects,0.7487,0.8737,0.9153,0.9362,0.9487\n") != std::string::npos);
}

TEST_CASE("usage errors exit with 2") {
    auto r = run({"theory", "prob", "--p", "1"});
    CHECK(r.code == cli::kUsage);
    CHECK(r.err.find("p >= 2") != std::string::npos);
    CHECK(run({"theory", "prob"}).code == cli::kUsage);
    CHECK(run({"theory", "prob", "--p", "two"}).code == cli::kUsage);
    CHECK(run({}).code == cli::kUsage);
    CHECK(run({"frobnicate"}).code == cli::kUsage);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("bounds") {
    auto r = run({"bounds", "--kind", "compat", "--n", "100", "--p-min", "6", "--p-max", "100",
                  "--p0", "6", "--sigma2", "4", "--coverage", "0.95"});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("p,bound,ratio\n6,", 0) == 0);
    const auto first = r.out.find('\n', 14);
    CHECK(r.out.substr(r.out.find(',', 14), first - r.out.find(',', 14)).find(",1") != std::string::npos);
    const auto last = r.out.substr(r.out.rfind("100,"));
    CHECK(last.find(",1.513") != std::string::npos);
    CHECK(run({"bounds", "--coverage", "1.0"}).code == cli::kUsage);
    CHECK(run({"bounds", "--p-min", "1", "--p0", "2"}).code == cli::kUsage);
    CHECK(run({"bounds", "--kind", "nope"}).code == cli::kUsage);
    r = run({"bounds", "--kind", "re", "--p-min", "6", "--p-max", "6"});
    CHECK(r.out == "p,bound,ratio\n6,147.07174633826446,1\n");
}

TEST_CASE("simulate writes three files and refuses to clobber") {
    const fs::path dir = scratch("sim");
    auto r = run({"simulate", "--preset", "table1", "--out", dir.string()});
    REQUIRE(r.code == 0);
    CHECK(fs::exists(dir / "rows.csv"));
    CHECK(fs::exists(dir / "summary.csv"));
    CHECK(fs::exists(dir / "metadata.json"));
    CHECK(slurp(dir / "summary.csv").rfind("order,p_main,predictors,probability\n", 0) == 0);

    r = run({"simulate", "--preset", "table1", "--out", dir.string()});
    CHECK(r.code == cli::kUsage);
    CHECK(r.err.find("--force") != std::string::npos);
    CHECK(run({"simulate", "--preset", "table1", "--out", dir.string(), "--force"}).code == 0);
    fs::remove_all(dir);
}

TEST_CASE("simulate output is independent of --threads") {
    const fs::path conf = fs::temp_directory_path() / "lassodet_threads.conf";
    std::ofstream(conf) << "kind = lasso_plus_ols\nn = 40\np_grid = 6,20,40\nsigma2 = 4,400\n"
                           "replicates = 50\nseed = 12\n";
    const fs::path a = scratch("t1"), b = scratch("t8");
    REQUIRE(run({"simulate", conf.string(), "--out", a.string(), "--threads", "1"}).code == 0);
    REQUIRE(run({"simulate", conf.string(), "--out", b.string(), "--threads", "8"}).code == 0);
    for (const char* f : {"rows.csv", "summary.csv", "metadata.json"}) {
        CHECK(slurp(a / f) == slurp(b / f));
    }
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST_CASE("simulate config errors") {
    const fs::path conf = fs::temp_directory_path() / "lassodet_bad.conf";
    std::ofstream(conf) << "kind = ortho_ratio_vs_p\nreplicates = lots\n";
    const fs::path dir = scratch("bad");
    auto r = run({"simulate", conf.string(), "--out", dir.string()});
    CHECK(r.code == cli::kUsage);
    CHECK(r.err.find("line 2") != std::string::npos);
    CHECK_FALSE(fs::exists(dir));

    // valid syntax, impossible design: rejected before anything is written
    std::ofstream(conf) << "kind = ortho_ratio_vs_p\nn = 10\np_grid = 6,20\n";
    r = run({"simulate", conf.string(), "--out", dir.string()});
    CHECK(r.code == cli::kDataError);
    CHECK_FALSE(fs::exists(dir / "rows.csv"));

    CHECK(run({"simulate", "--out", dir.string()}).code == cli::kUsage);
    CHECK(run({"simulate", "missing.conf", "--out", dir.string()}).code == cli::kDataError);
}

TEST_CASE("preset listing") {
    const auto r = run({"preset"});
    CHECK(r.out.find("fig1\n") != std::string::npos);
    CHECK(run({"preset", "mc-check"}).out.find("kind = mc_theorem_check") != std::string::npos);
}

TEST_CASE("splits are disjoint, covering and reproducible") {
    const auto a = analyze::make_split(37, 0.5, 9, 3);
    const auto b = analyze::make_split(37, 0.5, 9, 3);
    const auto c = analyze::make_split(37, 0.5, 9, 4);
    CHECK(a.train == b.train);
    CHECK(a.train != c.train);
    CHECK(a.train.size() == 19);
    std::vector<int> seen(37, 0);
    for (auto i : a.train) ++seen[i];
    for (auto i : a.test) ++seen[i];
    for (int s : seen) CHECK(s == 1);
    CHECK_THROWS(analyze::make_split(2, 0.5, 1, 0));
    CHECK_THROWS(analyze::make_split(30, 1.0, 1, 0));
}

TEST_CASE("analyze: superfluous interactions make APL worse") {
    const auto data = synthetic("main", false);
    const auto r = run({"analyze", data.string(), "--response", "y", "--splits", "20"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("decision at alpha=0.05: APL significantly worse") != std::string::npos);
    const auto at = r.out.find("# median APL/MEL ratio: ");
    REQUIRE(at != std::string::npos);
    CHECK(std::stod(r.out.substr(at + 24)) > 1.0);
    // same flags, same report
    CHECK(run({"analyze", data.string(), "--response", "y", "--splits", "20", "--threads", "3"}).out ==
          r.out);
}

TEST_CASE("analyze: a planted interaction is found in every split") {
    const auto data = synthetic("inter", true);
    const auto r = run({"analyze", data.string(), "--response", "y", "--splits", "20"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("APL significantly better") != std::string::npos);
    const auto line = r.out.substr(r.out.find("# interactions selected in all splits:"));
    CHECK(line.find(" m1:m2") != std::string::npos);
    const auto at = r.out.find("# median APL/MEL ratio: ");
    CHECK(std::stod(r.out.substr(at + 24)) < 1.0);
}

TEST_CASE("analyze: degenerate and malformed input") {
    const auto data = synthetic("main", false);
    auto r = run({"analyze", data.string(), "--response", "y", "--splits", "1"});
    CHECK(r.code == 0);
    CHECK(r.out.find("needs at least 2 splits") != std::string::npos);

    r = run({"analyze", data.string(), "--response", "nope"});
    CHECK(r.code == cli::kDataError);
    CHECK(r.err.find("'nope'") != std::string::npos);

    const fs::path bad = fs::temp_directory_path() / "lassodet_bad.csv";
    std::ofstream(bad) << "a,b,y\n1,2,3\n4,five,6\n";
    r = run({"analyze", bad.string(), "--response", "y"});
    CHECK(r.code == cli::kDataError);
    CHECK(r.err.find("line 3, column 2") != std::string::npos);

    CHECK(run({"analyze", data.string(), "--response", "y", "--fraction", "1.5"}).code == cli::kUsage);
}
