// qrabi_main.cpp - Command-line front end: spectra, eigenfunctions, norms, oracle, verify

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qrabi/bargmann.hpp"
#include "qrabi/eigenfunction.hpp"
#include "qrabi/fock.hpp"
#include "qrabi/io.hpp"
#include "qrabi/model.hpp"
#include "qrabi/spectrum.hpp"
#include "qrabi/stokes.hpp"
#include "qrabi/verify.hpp"

namespace {

using nlohmann::json;

struct Opts {
    double omega = 1.0;
    double omega0 = 0.0;
    double g = 0.0;
    double u = std::nan("");  // unset: degenerate coupling +2*omega
    std::string g_range;
    int nmax = 5;
    std::string branch = "both";
    double energy = std::nan("");
    int n = 0;
    int cutoff = 400;
    int kmax = qrabi::kNormKMax;
    std::string z_range = "-4:4:0.02";
    std::string out = "-";
    std::string format = "csv";
    std::vector<std::string> skip;
};

struct Reduced {
    qrabi::ModelParams p;
    bool swap;
};

Reduced reduced_params(double omega, double omega0, double g, double u_raw) {
    double u = std::isnan(u_raw) ? 2.0 * omega : u_raw;
    qrabi::ModelParams p(omega, omega0, g, u);
    switch (qrabi::coupling_class(p)) {
        case qrabi::CouplingClass::UPlus: return {p, false};
        case qrabi::CouplingClass::UMinus: {
            qrabi::UMinusReduction r = qrabi::reduce_uminus(p);
            return {r.params, r.swap_components};
        }
        default:
            throw qrabi::OutOfScopeError("coupling U^2 != 4 omega^2 is out of scope");
    }
}

std::optional<qrabi::Branch> parse_branch(const std::string& s) {
    if (s == "upper") return qrabi::Branch::Upper;
    if (s == "lower") return qrabi::Branch::Lower;
    return std::nullopt;  // both
}

json norm_json(const qrabi::NormResult& r) {
    json j;
    j["tag"] = (r.tag == qrabi::NormResult::Tag::Finite) ? "finite" : "diverging";
    j["value"] = (r.tag == qrabi::NormResult::Tag::Finite) ? json(r.value) : json(nullptr);
    j["tail_ratio"] = r.tail_ratio;
    j["sqrt_k_signature"] = r.sqrt_k_signature;
    return j;
}

// Lowest-energy root for the requested level; reports multiplicity on stderr.
std::optional<qrabi::SpectralPoint> pick_root(const qrabi::ModelParams& p, int n,
                                              qrabi::Branch b) {
    std::vector<qrabi::SpectralPoint> roots = qrabi::solve_level(p, n, b);
    if (roots.empty()) return std::nullopt;
    if (roots.size() > 1)
        std::fprintf(stderr, "note: %zu roots at n=%d on the %s branch; using the lowest energy\n",
                     roots.size(), n, qrabi::branch_name(b));
    size_t best = 0;
    for (size_t i = 1; i < roots.size(); ++i)
        if (roots[i].energy < roots[best].energy) best = i;
    return roots[best];
}

int cmd_spectrum(const Opts& o) {
    std::vector<double> grid;
    if (!o.g_range.empty()) grid = qrabi::parse_range(o.g_range);
    else if (o.g != 0.0) grid = {o.g};
    else {
        std::fprintf(stderr, "spectrum: provide --g or --g-range\n");
        return 1;
    }
    Reduced r = reduced_params(o.omega, o.omega0, grid.front(), o.u);
    qrabi::SweepTable table = qrabi::spectrum_sweep(r.p, grid, o.nmax, parse_branch(o.branch));
    if (o.format == "json") {
        json rows = json::array();
        for (const qrabi::SweepRow& row : table.rows)
            rows.push_back({{"g", row.g},
                            {"branch", qrabi::branch_name(row.point.branch)},
                            {"n", row.point.n},
                            {"x", row.point.x},
                            {"E", row.point.energy}});
        qrabi::write_text_output(o.out, rows.dump(2) + "\n");
    } else {
        qrabi::write_text_output(o.out, table.to_csv());
    }
    if (table.rows.empty()) {
        std::fprintf(stderr, "spectrum: no levels in the requested range\n");
        return 3;
    }
    return 0;
}

int cmd_classify(const Opts& o) {
    Reduced r = reduced_params(o.omega, o.omega0, o.g, o.u);
    if (std::isnan(o.energy)) {
        std::fprintf(stderr, "classify: provide --energy\n");
        return 1;
    }
    double x = qrabi::e_to_x(r.p, o.energy).x;
    qrabi::SpectralClass cls = qrabi::classify_energy(r.p, o.energy);
    json j;
    j["x"] = x;
    j["class"] = qrabi::spectral_class_name(cls.tag);
    j["nearest_level"] = nullptr;
    if (cls.tag == qrabi::SpectralClass::Tag::PointSpectrumCandidate)
        j["nearest_level"] = {{"n", cls.n}, {"branch", qrabi::branch_name(cls.branch)}};
    j["whittaker"] = nullptr;
    if (x * x > 1.0) {
        double m = qrabi::m_value(r.p, x);
        qrabi::WhittakerParams wp = qrabi::whittaker_params(m);
        qrabi::MultiplierVanishing mv = qrabi::multiplier_vanishes(m);
        j["whittaker"] = {{"kappa", wp.kappa},
                          {"mu", wp.mu},
                          {"alpha_vanishes", mv.alpha},
                          {"beta_vanishes", mv.beta}};
    }
    qrabi::write_text_output(o.out, j.dump(2) + "\n");
    return 0;
}

int cmd_eigenfunction(const Opts& o) {
    Reduced r = reduced_params(o.omega, o.omega0, o.g, o.u);
    std::optional<qrabi::Branch> b = parse_branch(o.branch);
    qrabi::Branch branch = b.value_or(qrabi::Branch::Upper);
    std::optional<qrabi::SpectralPoint> root = pick_root(r.p, o.n, branch);
    if (!root) {
        std::fprintf(stderr, "eigenfunction: no level at n=%d on the %s branch\n", o.n,
                     qrabi::branch_name(branch));
        return 3;
    }
    qrabi::EigenFunction ef = qrabi::build_eigenfunction(r.p, *root);
    qrabi::AnalyticFn f1 = qrabi::psi1_analytic(ef);
    qrabi::AnalyticFn f2 = qrabi::psi2_analytic(r.p, ef);
    std::vector<double> zs = qrabi::parse_range(o.z_range);
    double max_res = 0.0;
    for (double z : zs) {
        auto [r1, r2] = qrabi::ode_residual_system(r.p, root->energy, f1, f2, z);
        max_res = std::max({max_res, std::abs(r1), std::abs(r2)});
    }
    // UMinus inputs carry the components interchanged relative to the reduced frame.
    const qrabi::AnalyticFn& c1 = r.swap ? f2 : f1;
    const qrabi::AnalyticFn& c2 = r.swap ? f1 : f2;
    if (o.format == "json") {
        json rows = json::array();
        for (double z : zs) {
            qrabi::cplx v1 = c1.f(z), v2 = c2.f(z);
            rows.push_back({{"z", z},
                            {"re_psi1", v1.real()},
                            {"im_psi1", v1.imag()},
                            {"re_psi2", v2.real()},
                            {"im_psi2", v2.imag()}});
        }
        json j = {{"n", root->n},
                  {"branch", qrabi::branch_name(root->branch)},
                  {"x", root->x},
                  {"E", root->energy},
                  {"max_ode_residual", max_res},
                  {"rows", rows}};
        qrabi::write_text_output(o.out, j.dump(2) + "\n");
    } else {
        std::ostringstream os;
        os << "# max_ode_residual = " << qrabi::fmt17(max_res) << "\n";
        os << "z,re_psi1,im_psi1,re_psi2,im_psi2\n";
        for (double z : zs) {
            qrabi::cplx v1 = c1.f(z), v2 = c2.f(z);
            os << qrabi::fmt17(z) << ',' << qrabi::fmt17(v1.real()) << ',' << qrabi::fmt17(v1.imag())
               << ',' << qrabi::fmt17(v2.real()) << ',' << qrabi::fmt17(v2.imag()) << "\n";
        }
        qrabi::write_text_output(o.out, os.str());
    }
    return 0;
}

int cmd_norm(const Opts& o) {
    Reduced r = reduced_params(o.omega, o.omega0, o.g, o.u);
    json j;
    j["kmax"] = o.kmax;
    if (!std::isnan(o.energy)) {
        qrabi::SpectralClass cls = qrabi::classify_energy(r.p, o.energy);
        j["class"] = qrabi::spectral_class_name(cls.tag);
        if (cls.tag == qrabi::SpectralClass::Tag::DegenerateBoundary) {
            auto [t1, t2] = qrabi::taylor_of_degenerate_pair(r.p, o.kmax);
            j["psi1"] = norm_json(qrabi::bargmann_norm_sq(t1));
            j["psi2"] = norm_json(qrabi::bargmann_norm_sq(t2));
        } else if (cls.tag == qrabi::SpectralClass::Tag::PointSpectrumCandidate) {
            std::optional<qrabi::SpectralPoint> root = pick_root(r.p, cls.n, cls.branch);
            if (!root) {
                std::fprintf(stderr, "norm: no level near the requested energy\n");
                return 3;
            }
            j["n"] = root->n;
            j["branch"] = qrabi::branch_name(root->branch);
            j["x"] = root->x;
            j["E"] = root->energy;
            j["norm"] = norm_json(
                qrabi::bargmann_norm_sq(qrabi::taylor_of_eigenfunction(qrabi::build_eigenfunction(r.p, *root), o.kmax)));
        } else {
            j["norm"] = nullptr;
            j["note"] = "no normalizable eigenfunction at this energy";
        }
    } else {
        std::optional<qrabi::Branch> b = parse_branch(o.branch);
        qrabi::Branch branch = b.value_or(qrabi::Branch::Upper);
        std::optional<qrabi::SpectralPoint> root = pick_root(r.p, o.n, branch);
        if (!root) {
            std::fprintf(stderr, "norm: no level at n=%d on the %s branch\n", o.n,
                         qrabi::branch_name(branch));
            return 3;
        }
        j["class"] = qrabi::spectral_class_name(qrabi::SpectralClass::Tag::PointSpectrumCandidate);
        j["n"] = root->n;
        j["branch"] = qrabi::branch_name(root->branch);
        j["x"] = root->x;
        j["E"] = root->energy;
        j["norm"] = norm_json(
            qrabi::bargmann_norm_sq(qrabi::taylor_of_eigenfunction(qrabi::build_eigenfunction(r.p, *root), o.kmax)));
    }
    qrabi::write_text_output(o.out, j.dump(2) + "\n");
    return 0;
}

int cmd_oracle(const Opts& o) {
    Reduced r = reduced_params(o.omega, o.omega0, o.g, o.u);
    int n2 = o.cutoff, n1 = 3 * o.cutoff / 4;
    std::optional<qrabi::Branch> bsel = parse_branch(o.branch);
    std::vector<qrabi::SpectralPoint> analytic;
    for (qrabi::Branch b : {qrabi::Branch::Upper, qrabi::Branch::Lower}) {
        if (bsel && *bsel != b) continue;
        for (int n = 0; n <= o.nmax; ++n)
            for (const qrabi::SpectralPoint& pt : qrabi::solve_level(r.p, n, b))
                analytic.push_back(pt);
    }
    if (analytic.empty()) {
        std::fprintf(stderr, "oracle: no analytic levels to match\n");
        return 3;
    }
    std::sort(analytic.begin(), analytic.end(),
              [](const qrabi::SpectralPoint& a, const qrabi::SpectralPoint& b) {
                  return a.energy < b.energy;
              });
    double e_lo = analytic.front().energy - 0.5;
    double e_hi = std::min(qrabi::trust_ceiling(r.p, n1), analytic.back().energy + 0.5);
    qrabi::ConvergedLevels lv = qrabi::converged_levels(r.p, n1, n2, e_lo, e_hi, 1e-8);
    qrabi::MatchReport rep = qrabi::match_spectra(analytic, lv, qrabi::kMatchTol);
    json j = json::parse(rep.to_json());
    j["n1"] = n1;
    j["n2"] = n2;
    qrabi::write_text_output(o.out, j.dump(2) + "\n");
    return 0;
}

int cmd_verify(const Opts& o) {
    qrabi::verify::Options vo;
    vo.oracle_n2 = o.cutoff;
    vo.oracle_n1 = 3 * o.cutoff / 4;
    vo.skip = o.skip;
    std::vector<qrabi::verify::SectionResult> results = qrabi::verify::run_all(vo);
    bool all = true;
    for (const qrabi::verify::SectionResult& s : results) {
        const char* tag = s.skipped ? "skip" : (s.pass ? "pass" : "FAIL");
        std::fprintf(stderr, "%-14s %s (%.2fs)\n", s.name.c_str(), tag, s.seconds);
        all = all && s.pass;
    }
    qrabi::write_text_output(o.out, qrabi::verify::report_json(results) + "\n");
    return all ? 0 : 4;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectra, eigenfunctions, and Bargmann norms at degenerate coupling U = +-2 omega"};
    app.require_subcommand(1);
    Opts o;

    auto add_params = [&o](CLI::App* s, bool g_required) {
        s->add_option("--omega", o.omega, "boson frequency");
        s->add_option("--omega0", o.omega0, "level splitting");
        auto* g = s->add_option("--g", o.g, "linear coupling");
        if (g_required) g->required();
        s->add_option("--u", o.u, "nonlinear coupling (default 2*omega)");
        s->add_option("--out", o.out, "output path, - for stdout");
    };

    CLI::App* sp = app.add_subcommand("spectrum", "discrete levels over a coupling grid");
    add_params(sp, false);
    sp->add_option("--g-range", o.g_range, "coupling grid start:stop:step");
    sp->add_option("--nmax", o.nmax, "largest level index");
    sp->add_option("--branch", o.branch, "upper, lower, or both")
        ->check(CLI::IsMember({"upper", "lower", "both"}));
    sp->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    CLI::App* cl = app.add_subcommand("classify", "spectral class of an energy");
    add_params(cl, true);
    cl->add_option("--energy", o.energy, "energy to classify")->required();

    CLI::App* ei = app.add_subcommand("eigenfunction", "closed-form eigenfunction on a real-z grid");
    add_params(ei, true);
    ei->add_option("--n", o.n, "level index");
    ei->add_option("--branch", o.branch, "upper or lower")
        ->check(CLI::IsMember({"upper", "lower"}));
    ei->add_option("--z-range", o.z_range, "grid start:stop:step");
    ei->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    CLI::App* no = app.add_subcommand("norm", "Bargmann norm of an eigenfunction");
    add_params(no, true);
    no->add_option("--n", o.n, "level index");
    no->add_option("--branch", o.branch, "upper or lower")
        ->check(CLI::IsMember({"upper", "lower"}));
    no->add_option("--energy", o.energy, "classify this energy instead of (n, branch)");
    no->add_option("--kmax", o.kmax, "Taylor truncation");

    CLI::App* orc = app.add_subcommand("oracle", "match analytic levels against truncated Fock spectra");
    add_params(orc, true);
    orc->add_option("--nmax", o.nmax, "largest level index");
    orc->add_option("--branch", o.branch, "upper, lower, or both")
        ->check(CLI::IsMember({"upper", "lower", "both"}));
    orc->add_option("--cutoff", o.cutoff, "larger Fock cutoff N (smaller is 3N/4)");

    CLI::App* ve = app.add_subcommand("verify", "run the release-criteria sections");
    ve->add_option("--cutoff", o.cutoff, "larger Fock cutoff N (smaller is 3N/4)");
    ve->add_option("--skip", o.skip, "section-name prefixes to skip");
    ve->add_option("--out", o.out, "output path, - for stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    // eigenfunction and norm default to the upper branch
    if ((ei->parsed() || no->parsed()) && o.branch == "both") o.branch = "upper";

    try {
        if (sp->parsed()) return cmd_spectrum(o);
        if (cl->parsed()) return cmd_classify(o);
        if (ei->parsed()) return cmd_eigenfunction(o);
        if (no->parsed()) return cmd_norm(o);
        if (orc->parsed()) return cmd_oracle(o);
        if (ve->parsed()) return cmd_verify(o);
    } catch (const qrabi::OutOfScopeError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const qrabi::IndecisiveNormError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
