// curvedcheck: curvature diagnostics for pseudo-Riemannian metric charts.
// Distributed under the BSD 3-Clause License. See LICENSE for details.
//
// End-to-end runs of the curvedcheck binary: exit-code contract, report
// determinism, config/env precedence and the documented command examples.

#include "doctest.h"
#include "json.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

namespace {

using json = nlohmann::json;

struct CliResult {
    int code;
    std::string out;
};

CliResult run_cli(const std::string& args, bool merge_stderr = false,
                  const std::string& env_prefix = "") {
    std::string cmd = env_prefix + CURVED_CLI_PATH " " + args;
    cmd += merge_stderr ? " 2>&1" : " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    std::size_t n = 0;
    while ((n = std::fread(buf, 1, sizeof(buf), pipe)) > 0) out.append(buf, n);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

json run_json(const std::string& args, int expect_code) {
    const CliResult r = run_cli(args + " --format json");
    CHECK(r.code == expect_code);
    return json::parse(r.out);
}

std::string scratch_path(const char* name) {
    return "/tmp/curvedcheck_" + std::to_string(::getpid()) + "_" + name;
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("usage problems exit with code 2 and a diagnostic on stderr") {
    const char* bad[] = {
        "classify",                                               // no source
        "classify --manifold flat --inline 'dim=3; g[0][0]=1;'",  // two sources
        "classify --manifold no_such_chart",
        "classify --inline 'dim=3; g[0][0]=bogus;'",              // DSL error
        "classify --manifold flat --at 0.1,0.2",                  // wrong arity
        "classify --manifold flat --at 5,0,0,0",                  // outside domain
        "lemma D --manifold flat",
        "theorem 4 --manifold flat",
        "lemma C --manifold sphere_n3",            // needs two pluses and two minuses
        "limit --manifold sphere_n3 --sigma 0.1",  // no weak planes in (0,3)
        "conformal --manifold generic22 --sigma 0.1 --fd",  // fd has no rescaled chart
        "theorem 2 --manifold generic22",                   // sigma required
        "classify --manifold flat --format yaml",
        "nonsense --manifold flat",
    };
    for (const char* args : bad) {
        const std::string shown = args;
        CAPTURE(shown);
        const CliResult r = run_cli(args, true);
        CHECK(r.code == 2);
        CHECK(r.out.find("rror") != std::string::npos);
    }
}

TEST_CASE("help and version run clean") {
    CHECK(run_cli("--help").code == 0);
    CHECK(run_cli("--help").out.find("curvedcheck") != std::string::npos);
    CHECK(run_cli("classify --help").code == 0);
    CHECK(run_cli("--version").code == 0);
}

TEST_CASE("classify recognizes the documented constant-curvature example") {
    const json j = run_json("classify --manifold constant_curvature --c 1 --s 1 --n 4 "
                            "--at 0.1,0.2,0,0", 0);
    CHECK(j["schema"] == "report_v1");
    CHECK(j["verdict"] == "info");
    const json& row = j["results"]["points"][0];
    CHECK(row["label"] == "constant_curvature");
    CHECK(row["constant_curvature"]["pass"] == true);
    CHECK(row["constant_curvature"]["c"].get<double>() == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("identical command and seed give byte-identical reports") {
    const char* cmds[] = {
        "planes --manifold generic22 --format json",
        "classify --manifold example2_s2_n4 --format json",
        "limit --manifold ppwave_pair_n4 --points 1 --format json",
    };
    for (const char* cmd : cmds) {
        CAPTURE(cmd);
        const CliResult a = run_cli(cmd);
        const CliResult b = run_cli(cmd);
        CHECK(a.code == b.code);
        CHECK(a.out == b.out);
    }
    // a different seed must reshuffle the sampled points
    const CliResult a = run_cli("planes --manifold generic22 --format json");
    const CliResult c = run_cli("planes --manifold generic22 --format json --seed 7");
    CHECK(a.out != c.out);
}

TEST_CASE("verdict failures exit 1, passes and reports exit 0") {
    CHECK(run_cli("theorem 3 --manifold generic22 --sigma 0.3").code == 1);
    CHECK(run_cli("theorem 3 --manifold generic22 --sigma 0").code == 0);
    CHECK(run_cli("lemma A --inline 'dim=3; g[0][0]=-1; g[1][1]=1; g[2][2]=1;'").code == 0);
    CHECK(run_cli("curvature --manifold flat_s1_n4 --points 1").code == 0);
}

TEST_CASE("wave pair passes the conformal property suites end to end") {
    const json t2 = run_json("theorem 2 --manifold ppwave_pair_n4", 0);
    CHECK(t2["verdict"] == "pass");
    CHECK(t2["results"]["weak_condition"]["pass"] == true);
    CHECK(t2["results"]["relation"]["pass"] == true);
    CHECK(t2["results"]["pullback"]["class"] == "conformal");
    CHECK(t2["results"]["pullback"]["gradient_class"] == "isotropic");

    const json t1 = run_json("theorem 1 --manifold ppwave_pair_n4 --samples 8", 0);
    CHECK(t1["verdict"] == "pass");
    CHECK(t1["results"]["pullback"]["cone_preserved"] == true);
}

TEST_CASE("limit ratios converge to one on the pair and expose homotheties") {
    const json ok = run_json("limit --manifold ppwave_pair_n4 --points 1", 0);
    CHECK(ok["verdict"] == "pass");
    CHECK(ok["results"]["usable"].get<int>() >= 1);
    CHECK(ok["results"]["max_deviation"].get<double>() < 1e-5);

    // constant sigma = ln(2)/2 rescales sectional curvature by 1/2
    const json bad = run_json("limit --manifold ppwave_exp_n4 --sigma 0.34657359027997264 "
                              "--points 1", 1);
    CHECK(bad["verdict"] == "fail");
    CHECK(bad["results"]["max_deviation"].get<double>() == doctest::Approx(0.5).epsilon(1e-6));

    // flat source: curvature vanishes along every ladder, nothing to compare
    const json flat = run_json("limit --manifold flat_s1_n4 --sigma x1 --points 1 --samples 2", 0);
    CHECK(flat["verdict"] == "info");
    CHECK(flat["results"]["usable"].get<int>() == 0);
}

TEST_CASE("seed resolution prefers flags over config file over environment") {
    const std::string cfg = scratch_path("cfg");
    {
        std::ofstream out(cfg);
        out << "# reference run configuration\n";
        out << "seed = 7\n";
        out << "format = json\n";
    }
    const std::string base = "planes --manifold generic22";
    const CliResult flags = run_cli(base + " --seed 7 --format json");
    CHECK(run_cli(base + " --config " + cfg).out == flags.out);
    CHECK(run_cli(base + " --config " + cfg, false, "CURVEDCHECK_SEED=11 ").out == flags.out);
    CHECK(run_cli(base + " --format json", false, "CURVEDCHECK_SEED=7 ").out == flags.out);

    const CliResult nine = run_cli(base + " --seed 9 --format json");
    CHECK(run_cli(base + " --config " + cfg + " --seed 9").out == nine.out);

    CHECK(run_cli(base, true, "CURVEDCHECK_SEED=garbage ").code == 2);
    std::remove(cfg.c_str());

    const std::string badcfg = scratch_path("badcfg");
    {
        std::ofstream out(badcfg);
        out << "volume = 11\n";
    }
    CHECK(run_cli(base + " --config " + badcfg, true).code == 2);
    std::remove(badcfg.c_str());
}

TEST_CASE("manifest listing round-trips the builtin catalog") {
    const json builtin = run_json("list", 0);
    CHECK(builtin["results"]["count"].get<int>() >= 11);
    const std::string manifest = std::string(CURVED_SOURCE_DIR) + "/share/manifolds.txt";
    const json external = run_json("list --manifest " + manifest, 0);
    CHECK(builtin["results"] == external["results"]);
}

TEST_CASE("finite differences switch the derivative path, not the values") {
    const std::string base = "curvature --manifold sphere_n3 --at 0.1,0.2,-0.1";
    const json sym = run_json(base, 0);
    const json fd = run_json(base + " --fd", 0);
    CHECK(sym["metric"]["derivative_path"] == "symbolic");
    CHECK(fd["metric"]["derivative_path"] == "finite_difference");
    const double s0 = sym["results"]["points"][0]["scalar"].get<double>();
    const double s1 = fd["results"]["points"][0]["scalar"].get<double>();
    CHECK(s1 == doctest::Approx(s0).epsilon(1e-6));
}

TEST_CASE("explicit points are echoed in ascending order") {
    const json j = run_json("curvature --manifold flat_s1_n4 --at 0.3,0,0,0 --at -0.3,0,0,0", 0);
    const json& pts = j["results"]["points"];
    REQUIRE(pts.size() == 2);
    CHECK(pts[0]["point"][0].get<double>() == doctest::Approx(-0.3));
    CHECK(pts[1]["point"][0].get<double>() == doctest::Approx(0.3));
    CHECK(j["command"]["seed"].get<unsigned long long>() == 2026);
}

TEST_CASE("planes reports the degenerate census with verdict info") {
    const json j = run_json("planes --manifold generic22 --points 1 --samples 16", 0);
    CHECK(j["verdict"] == "info");
    const json& row = j["results"]["points"][0];
    CHECK(row["weak"]["available"] == true);
    CHECK(row["strong"]["available"] == true);
    // frozen split-signature chart is far from c*pi1: vanishing must fail
    CHECK(row["weak"]["vanishing"]["pass"] == false);
    CHECK(row["strong"]["vanishing"]["pass"] == false);
    CHECK(row["quadruple"]["pass"] == false);
    // and the reported worst plane comes with its basis
    CHECK(row["weak"]["vanishing"].contains("worst_x"));
}

} // TEST_SUITE
