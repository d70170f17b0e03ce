// test_fock.cpp - Hamiltonian assembly, Jacobi eigensolver, stabilization, spectrum matching

#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "qrabi/fock.hpp"
#include "qrabi/model.hpp"
#include "qrabi/spectrum.hpp"

using namespace qrabi;

TEST_CASE("interleaved basis indexing") {
    CHECK(fock_index(0, 1) == 0);
    CHECK(fock_index(0, -1) == 1);
    CHECK(fock_index(3, 1) == 6);
    CHECK(fock_index(3, -1) == 7);
}

TEST_CASE("Hamiltonian entries at the smallest cutoff") {
    ModelParams p(1.0, 0.5, 0.7, 2.0);
    FockMatrix m = build_hamiltonian(p, 1);
    CHECK(m.dim == 4);
    CHECK(m.at(0, 0) == 0.25);
    CHECK(m.at(1, 1) == -0.25);
    CHECK(m.at(2, 2) == 2.25);
    CHECK(m.at(3, 3) == -0.25);
    CHECK(m.at(0, 3) == 0.7);
    CHECK(m.at(3, 0) == 0.7);
    CHECK(m.at(1, 2) == 0.7);
    CHECK(m.at(2, 1) == 0.7);
    CHECK(m.at(0, 1) == 0.0);
    CHECK(m.at(0, 2) == 0.0);
    CHECK(m.at(1, 3) == 0.0);
    CHECK(m.at(2, 3) == 0.0);
    CHECK_THROWS_AS(build_hamiltonian(p, 0), std::invalid_argument);
}

TEST_CASE("Jacobi eigenvalues on closed-form matrices") {
    CHECK(jacobi_eigenvalues({5.0}, 1) == std::vector<double>{5.0});

    std::vector<double> two{2.0, 1.0, 1.0, 2.0};
    std::vector<double> ev2 = jacobi_eigenvalues(two, 2);
    REQUIRE(ev2.size() == 2);
    CHECK(ev2[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(ev2[1] == doctest::Approx(3.0).epsilon(1e-14));

    std::vector<double> tri{2.0, -1.0, 0.0, -1.0, 2.0, -1.0, 0.0, -1.0, 2.0};
    std::vector<double> ev3 = jacobi_eigenvalues(tri, 3);
    REQUIRE(ev3.size() == 3);
    CHECK(ev3[0] == doctest::Approx(2.0 - std::sqrt(2.0)).epsilon(1e-13));
    CHECK(ev3[1] == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(ev3[2] == doctest::Approx(2.0 + std::sqrt(2.0)).epsilon(1e-13));

    CHECK_THROWS_AS(jacobi_eigenvalues({1.0, 2.0, 3.0}, 2), std::invalid_argument);
}

TEST_CASE("Jacobi preserves trace and Frobenius norm on a random matrix") {
    const int n = 50;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::vector<double> a((size_t)n * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            double v = uni(rng);
            a[(size_t)i * n + j] = v;
            a[(size_t)j * n + i] = v;
        }
    double trace = 0.0, fro2 = 0.0;
    for (int i = 0; i < n; ++i) trace += a[(size_t)i * n + i];
    for (double v : a) fro2 += v * v;

    std::vector<double> ev = jacobi_eigenvalues(a, n);
    REQUIRE((int)ev.size() == n);
    double esum = 0.0, esq = 0.0;
    for (double e : ev) {
        esum += e;
        esq += e * e;
    }
    CHECK(esum == doctest::Approx(trace).epsilon(1e-10));
    CHECK(esq == doctest::Approx(fro2).epsilon(1e-10));
    for (int i = 1; i < n; ++i) CHECK(ev[i] >= ev[i - 1]);
}

TEST_CASE("smallest-cutoff spectrum equals the parity-block closed form") {
    ModelParams p(1.0, 0.5, 0.7, 2.0);
    std::vector<double> ev = eigenvalues_sym(build_hamiltonian(p, 1));
    REQUIRE(ev.size() == 4);
    const double s1 = std::sqrt(0.5525), s2 = std::sqrt(2.0525);
    CHECK(ev[0] == doctest::Approx(-s1).epsilon(1e-12));
    CHECK(ev[1] == doctest::Approx(1.0 - s2).epsilon(1e-12));
    CHECK(ev[2] == doctest::Approx(s1).epsilon(1e-12));
    CHECK(ev[3] == doctest::Approx(1.0 + s2).epsilon(1e-12));
}

TEST_CASE("parity permutation splits the Hamiltonian into two blocks") {
    CHECK(parity_permutation(2) == std::vector<int>{0, 3, 4, 1, 2, 5});
    ModelParams p(1.1, -0.3, 0.9, 2.2);
    FockMatrix m = build_hamiltonian(p, 3);
    std::vector<int> perm = parity_permutation(3);
    REQUIRE((int)perm.size() == m.dim);
    const int half = m.dim / 2;
    for (int i = 0; i < half; ++i)
        for (int j = half; j < m.dim; ++j) {
            CHECK(m.at(perm[i], perm[j]) == 0.0);
            CHECK(m.at(perm[j], perm[i]) == 0.0);
        }
}

TEST_CASE("trust ceiling scales with omega and the cutoff") {
    CHECK(trust_ceiling(ModelParams(1.0, 0.5, 1.0, 2.0), 400) == 100.0);
    CHECK(trust_ceiling(ModelParams(0.5, 0.0, 1.0, 1.0), 100) == 12.5);
}

TEST_CASE("stabilization split against a coarser spectrum") {
    std::vector<double> ev1{0.0, 1.0, 2.0};
    std::vector<double> ev2{-2.0, 0.0, 1.0 + 5e-9, 2.1, 2.6};
    ConvergedLevels lv = split_stabilized(ev1, ev2, -0.5, 2.5, 1e-8);
    CHECK(lv.stabilized == std::vector<double>{0.0, 1.0 + 5e-9});
    CHECK(lv.unstabilized == std::vector<double>{2.1});

    CHECK_THROWS_AS(converged_levels(ModelParams(1.0, 0.5, 1.0, 2.0), 50, 60, -1.0, 1.0, 1e-8),
                    std::invalid_argument);
}

TEST_CASE("weak-coupling levels stabilize onto the analytic spectrum") {
    ModelParams p(1.0, 0.5, 0.3, 2.0);
    ConvergedLevels lv = converged_levels(p, 60, 80, 0.0, 3.0, 1e-8);
    std::vector<SpectralPoint> analytic;
    for (int n = 0; n <= 1; ++n) {
        std::vector<SpectralPoint> pts = solve_level(p, n, Branch::Upper);
        REQUIRE(pts.size() == 1);
        analytic.push_back(pts.front());
    }
    MatchReport rep = match_spectra(analytic, lv, kMatchTol);
    REQUIRE(rep.levels.size() == 2);
    for (const MatchReport::Level& l : rep.levels) {
        CHECK(l.matched);
        CHECK(l.stabilized);
        CHECK(std::fabs(l.delta) < 1e-8);
    }
    CHECK(rep.unmatched_numeric.empty());
}

TEST_CASE("greedy matching claims each numeric level at most once") {
    std::vector<SpectralPoint> analytic{
        {0, Branch::Upper, 2.0, 0.0}, {1, Branch::Upper, 3.0, 1.0}, {2, Branch::Upper, 4.0, 2.0}};

    MatchReport flat = match_spectra(analytic, std::vector<double>{1e-9, 0.99, 2.0}, 1e-6);
    REQUIRE(flat.levels.size() == 3);
    CHECK(flat.levels[0].matched);
    CHECK(flat.levels[0].stabilized);
    CHECK(flat.levels[0].delta == doctest::Approx(1e-9).epsilon(1e-10));
    CHECK(!flat.levels[1].matched);
    CHECK(std::isnan(flat.levels[1].e_numeric));
    CHECK(flat.levels[2].matched);
    CHECK(flat.levels[2].delta == 0.0);
    REQUIRE(flat.unmatched_numeric.size() == 1);
    CHECK(flat.unmatched_numeric[0] == 0.99);

    ConvergedLevels lv;
    lv.stabilized = {1.0000002, 3.5};
    lv.unstabilized = {2.0000004};
    MatchReport rep = match_spectra(analytic, lv, 1e-6);
    REQUIRE(rep.levels.size() == 3);
    CHECK(!rep.levels[0].matched);
    CHECK(rep.levels[1].matched);
    CHECK(rep.levels[1].stabilized);
    CHECK(rep.levels[1].delta == doctest::Approx(2e-7).epsilon(1e-6));
    CHECK(rep.levels[2].matched);
    CHECK(!rep.levels[2].stabilized);
    CHECK(rep.levels[2].e_numeric == 2.0000004);
    CHECK(std::isnan(rep.levels[2].delta));
    REQUIRE(rep.unmatched_numeric.size() == 1);
    CHECK(rep.unmatched_numeric[0] == 3.5);

    nlohmann::json j = nlohmann::json::parse(rep.to_json());
    REQUIRE(j["levels"].size() == 3);
    CHECK(j["levels"][0]["branch"] == "upper");
    CHECK(j["levels"][0]["E_numeric"].is_null());
    CHECK(j["levels"][1]["matched"] == true);
    CHECK(j["levels"][2]["delta"].is_null());
    CHECK(j["unmatched_numeric"].size() == 1);
}
