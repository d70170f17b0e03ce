// test_cli.cpp - End-to-end runs of the installed CLI binary via popen

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <json.hpp>

namespace {

struct RunResult {
    int code;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    std::string cmd = std::string(QRABI_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* f = popen(cmd.c_str(), "r");
    REQUIRE(f != nullptr);
    std::string out;
    char buf[4096];
    size_t got;
    while ((got = fread(buf, 1, sizeof buf, f)) > 0) out.append(buf, got);
    int st = pclose(f);
    return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> ls;
    size_t pos = 0;
    while (pos < text.size()) {
        size_t nl = text.find('\n', pos);
        if (nl == std::string::npos) nl = text.size();
        ls.push_back(text.substr(pos, nl - pos));
        pos = nl + 1;
    }
    return ls;
}

std::vector<std::string> fields_of(const std::string& line) {
    std::vector<std::string> fs;
    size_t pos = 0;
    while (true) {
        size_t c = line.find(',', pos);
        if (c == std::string::npos) {
            fs.push_back(line.substr(pos));
            break;
        }
        fs.push_back(line.substr(pos, c - pos));
        pos = c + 1;
    }
    return fs;
}

} // namespace

TEST_CASE("help exits clean and usage errors exit 1") {
    RunResult help = run_cli("--help");
    CHECK(help.code == 0);
    CHECK(help.out.find("spectrum") != std::string::npos);
    CHECK(run_cli("spectrum --help").code == 0);

    CHECK(run_cli("").code == 1);
    CHECK(run_cli("spectrum --omega 1").code == 1);
    CHECK(run_cli("classify --energy 0.5").code == 1);
    CHECK(run_cli("spectrum --g 1 --branch sideways").code == 1);
    CHECK(run_cli("spectrum --g 1 --format yaml").code == 1);
    CHECK(run_cli("spectrum --g 1 --no-such-flag").code == 1);
    CHECK(run_cli("spectrum --g 0.3 --omega0 0.5 --out /no_such_dir_qrabi/x.csv").code == 1);
}

TEST_CASE("generic coupling exits 2, empty spectra exit 3") {
    CHECK(run_cli("spectrum --omega 1 --omega0 0.5 --g 0.5 --u 1.1").code == 2);
    CHECK(run_cli("classify --omega 1 --g 1 --u 0.3 --energy 0").code == 2);

    CHECK(run_cli("spectrum --omega 1 --omega0 0.5 --g 0.5 --branch lower --nmax 2").code == 3);
    CHECK(run_cli("eigenfunction --omega 1 --omega0 0.5 --g 0.5 --n 0 --branch lower").code == 3);
}

TEST_CASE("spectrum output is deterministic and matches the solver") {
    const std::string args =
        "spectrum --omega 1 --omega0 0.5 --g 0.3 --nmax 2 --branch upper --format csv";
    RunResult a = run_cli(args);
    RunResult b = run_cli(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);

    std::vector<std::string> ls = lines_of(a.out);
    REQUIRE(ls.size() == 4);
    CHECK(ls[0] == "g,branch,n,x,E");
    const double want_x[3] = {8.036079868636687, 29.91144565572042, 52.07723356828656};
    for (int i = 0; i < 3; ++i) {
        std::vector<std::string> fs = fields_of(ls[i + 1]);
        REQUIRE(fs.size() == 5);
        CHECK(fs[0] == "0.29999999999999999");
        CHECK(fs[1] == "upper");
        CHECK(fs[2] == std::to_string(i));
        CHECK(std::stod(fs[3]) == doctest::Approx(want_x[i]).epsilon(1e-13));
        CHECK(std::stod(fs[4]) ==
              doctest::Approx(0.09 * (want_x[i] - 1.0) - 0.25).epsilon(1e-12));
    }

    RunResult j = run_cli(
        "spectrum --omega 1 --omega0 0.5 --g 0.3 --nmax 1 --branch upper --format json");
    CHECK(j.code == 0);
    nlohmann::json rows = nlohmann::json::parse(j.out);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0]["branch"] == "upper");
    CHECK(rows[0]["n"] == 0);
    CHECK(std::fabs(rows[0]["x"].get<double>() - want_x[0]) < 1e-10);
}

TEST_CASE("opposite-sign coupling reduces to the mirrored model") {
    RunResult minus = run_cli("spectrum --omega 1 --omega0 0.5 --u -2 --g 0.4 --nmax 2");
    RunResult plus = run_cli("spectrum --omega 1 --omega0 -0.5 --u 2 --g 0.4 --nmax 2");
    CHECK(minus.code == 0);
    CHECK(minus.out == plus.out);

    const std::string tail = " --g 1 --n 0 --branch upper --z-range -1:1:0.5";
    RunResult em = run_cli("eigenfunction --omega 1 --omega0 0.5 --u -2" + tail);
    RunResult ep = run_cli("eigenfunction --omega 1 --omega0 -0.5" + tail);
    CHECK(em.code == 0);
    CHECK(ep.code == 0);
    std::vector<std::string> lm = lines_of(em.out);
    std::vector<std::string> lp = lines_of(ep.out);
    REQUIRE(lm.size() == 7);
    REQUIRE(lp.size() == 7);
    CHECK(lm[0] == lp[0]);  // identical residual line
    CHECK(lm[1] == "z,re_psi1,im_psi1,re_psi2,im_psi2");
    for (size_t i = 2; i < lm.size(); ++i) {
        std::vector<std::string> fm = fields_of(lm[i]);
        std::vector<std::string> fp = fields_of(lp[i]);
        REQUIRE(fm.size() == 5);
        REQUIRE(fp.size() == 5);
        CHECK(fm[0] == fp[0]);
        CHECK(fm[1] == fp[3]);  // psi1 <-> psi2 exchanged
        CHECK(fm[2] == fp[4]);
        CHECK(fm[3] == fp[1]);
        CHECK(fm[4] == fp[2]);
    }
}

TEST_CASE("classify reports class, nearest level, and Whittaker data") {
    RunResult cont = run_cli("classify --omega 1 --omega0 0.5 --g 1 --energy -1");
    CHECK(cont.code == 0);
    nlohmann::json jc = nlohmann::json::parse(cont.out);
    CHECK(jc["class"] == "Continuum");
    CHECK(jc["nearest_level"].is_null());
    CHECK(jc["whittaker"].is_null());

    RunResult psc =
        run_cli("classify --omega 1 --omega0 0.5 --g 1 --energy 0.90345659986093274");
    CHECK(psc.code == 0);
    nlohmann::json jp = nlohmann::json::parse(psc.out);
    CHECK(jp["class"] == "PointSpectrumCandidate");
    CHECK(jp["nearest_level"]["n"] == 0);
    CHECK(jp["nearest_level"]["branch"] == "upper");
    CHECK(std::fabs(jp["whittaker"]["kappa"].get<double>() + 0.25) < 1e-9);
    CHECK(jp["whittaker"]["mu"] == 0.25);
    CHECK(jp["whittaker"]["beta_vanishes"] == true);

    RunResult deg = run_cli("classify --omega 1 --omega0 0.5 --g 1 --energy -0.25");
    CHECK(deg.code == 0);
    CHECK(nlohmann::json::parse(deg.out)["class"] == "DegenerateBoundary");

    RunResult non = run_cli("classify --omega 1 --omega0 0.5 --g 1 --energy -3");
    CHECK(non.code == 0);
    CHECK(nlohmann::json::parse(non.out)["class"] == "NonNormalizable");
}

TEST_CASE("eigenfunction emits a residual header and level data") {
    RunResult r = run_cli(
        "eigenfunction --omega 1 --omega0 0.5 --g 1 --n 1 --branch upper --z-range -2:2:0.25 "
        "--format json");
    CHECK(r.code == 0);
    nlohmann::json j = nlohmann::json::parse(r.out);
    CHECK(j["n"] == 1);
    CHECK(j["branch"] == "upper");
    CHECK(std::fabs(j["x"].get<double>() - 4.301571856655402) < 1e-10);
    CHECK(j["max_ode_residual"].get<double>() < 1e-10);
    CHECK(j["rows"].size() == 17);

    RunResult c = run_cli(
        "eigenfunction --omega 1 --omega0 0.5 --g 1 --n 0 --branch upper --z-range 0:1:0.5");
    CHECK(c.code == 0);
    std::vector<std::string> ls = lines_of(c.out);
    REQUIRE(ls.size() == 5);
    CHECK(ls[0].rfind("# max_ode_residual = ", 0) == 0);
    CHECK(std::stod(ls[0].substr(21)) < 1e-10);
    CHECK(ls[1] == "z,re_psi1,im_psi1,re_psi2,im_psi2");
    std::vector<std::string> f0 = fields_of(ls[2]);
    CHECK(std::stod(f0[1]) == doctest::Approx(1.0).epsilon(1e-12));  // unit Taylor constant
    CHECK(std::stod(f0[2]) == 0.0);
}

TEST_CASE("norm reports finite point-spectrum values and divergent boundary pairs") {
    RunResult fin = run_cli("norm --omega 1 --omega0 0.5 --g 1 --n 0 --branch upper");
    CHECK(fin.code == 0);
    nlohmann::json jf = nlohmann::json::parse(fin.out);
    CHECK(jf["class"] == "PointSpectrumCandidate");
    CHECK(jf["norm"]["tag"] == "finite");
    CHECK(jf["norm"]["value"].get<double>() >= 1.0);
    const double x = jf["x"].get<double>();
    const double bm = 0.25 / (0.5 * (x + std::sqrt(x * x - 1.0)));
    CHECK(jf["norm"]["tail_ratio"].get<double>() ==
          doctest::Approx(4.0 * bm * bm).epsilon(1e-3));

    RunResult deg = run_cli("norm --omega 1 --omega0 0.5 --g 1 --energy -0.25");
    CHECK(deg.code == 0);
    nlohmann::json jd = nlohmann::json::parse(deg.out);
    CHECK(jd["class"] == "DegenerateBoundary");
    CHECK(jd["psi1"]["tag"] == "diverging");
    CHECK(jd["psi1"]["sqrt_k_signature"] == true);
    CHECK(jd["psi2"]["tag"] == "diverging");

    RunResult non = run_cli("norm --omega 1 --omega0 0.5 --g 1 --energy -3");
    CHECK(non.code == 0);
    nlohmann::json jn = nlohmann::json::parse(non.out);
    CHECK(jn["class"] == "NonNormalizable");
    CHECK(jn["norm"].is_null());

    // near the band edge the tail ratio approaches 1 and the default truncation
    // cannot certify either verdict
    CHECK(run_cli("norm --omega 1 --omega0 0.8075 --g 0.3 --n 2 --branch lower").code == 4);
}

TEST_CASE("oracle matches analytic levels at a reduced cutoff") {
    RunResult r = run_cli("oracle --omega 1 --omega0 0.5 --g 0.3 --nmax 1 --branch upper "
                          "--cutoff 80");
    CHECK(r.code == 0);
    nlohmann::json j = nlohmann::json::parse(r.out);
    CHECK(j["n1"] == 60);
    CHECK(j["n2"] == 80);
    REQUIRE(j["levels"].size() == 2);
    for (const nlohmann::json& lv : j["levels"]) {
        CHECK(lv["matched"] == true);
        CHECK(lv["stabilized"] == true);
        CHECK(std::fabs(lv["delta"].get<double>()) < 1e-7);
    }
    CHECK(j["unmatched_numeric"].empty());
}

TEST_CASE("verify subcommand honors skips and reports sections") {
    RunResult r = run_cli("verify --skip oracle --skip lower --skip residuals --skip norms "
                          "--skip growth --skip continuum --skip whittaker");
    CHECK(r.code == 0);
    nlohmann::json j = nlohmann::json::parse(r.out);
    CHECK(j["all_pass"] == true);
    REQUIRE(j["sections"].size() == 8);
    CHECK(j["sections"][0]["name"] == "oracle_match");
    CHECK(j["sections"][0]["skipped"] == true);
    CHECK(j["sections"][2]["name"] == "identities");
    CHECK(j["sections"][2]["skipped"] == false);
    CHECK(j["sections"][2]["pass"] == true);
}
