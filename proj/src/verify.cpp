// verify.cpp - Release-criteria sections over random parameter draws and canonical cases

#include "qrabi/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <random>
#include <tuple>

#include "qrabi/bargmann.hpp"
#include "qrabi/eigenfunction.hpp"
#include "qrabi/fock.hpp"
#include "qrabi/model.hpp"
#include "qrabi/spectrum.hpp"
#include "qrabi/stokes.hpp"

namespace qrabi::verify {

namespace {

using nlohmann::json;

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

    double elapsed() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

// Jacobi decompositions dominate the suite; identical (params, cutoff) requests
// across sections reuse the first result.
const std::vector<double>& cached_eigenvalues(const ModelParams& p, int n_cutoff) {
    static std::map<std::tuple<double, double, double, double, int>, std::vector<double>> cache;
    auto key = std::make_tuple(p.omega, p.omega0, p.g, p.u, n_cutoff);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, eigenvalues_sym(build_hamiltonian(p, n_cutoff))).first;
    return it->second;
}

std::vector<ModelParams> general_sets(const Options& opt) {
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> dw(0.8, 1.25), dw0(-0.75, 0.75), dg(0.7, 1.5);
    std::vector<ModelParams> out;
    for (int i = 0; i < opt.param_sets; ++i) {
        double w = dw(rng), w0 = dw0(rng), g = dg(rng);
        out.emplace_back(w, w0, g, 2.0 * w);
    }
    return out;
}

// g^2 < omega(omega - omega0)/2 guarantees Lower-branch roots exist; the upper
// cap on f keeps their norm tails decisively geometric.
std::vector<ModelParams> lower_capable_sets(const Options& opt) {
    std::mt19937_64 rng(opt.seed + 1);
    std::uniform_real_distribution<double> dw(0.9, 1.2), df(0.3, 0.6);
    std::vector<ModelParams> out;
    for (int i = 0; i < opt.param_sets; ++i) {
        double w = dw(rng);
        double w0 = std::uniform_real_distribution<double>(-0.75, w - 0.4)(rng);
        double f = df(rng);
        out.emplace_back(w, w0, f * std::sqrt(w * (w - w0) / 2.0), 2.0 * w);
    }
    return out;
}

std::vector<ModelParams> all_sets(const Options& opt) {
    std::vector<ModelParams> out = general_sets(opt);
    std::vector<ModelParams> lo = lower_capable_sets(opt);
    out.insert(out.end(), lo.begin(), lo.end());
    return out;
}

std::vector<SpectralPoint> levels_up_to(const ModelParams& p, Branch b, int nmax) {
    std::vector<SpectralPoint> out;
    for (int n = 0; n <= nmax; ++n)
        for (const SpectralPoint& pt : solve_level(p, n, b)) out.push_back(pt);
    std::sort(out.begin(), out.end(),
              [](const SpectralPoint& a, const SpectralPoint& b2) { return a.energy < b2.energy; });
    return out;
}

double lower_band_edge(const ModelParams& p) {
    return -p.omega0 / 2.0 - 2.0 * p.g * p.g / p.omega;
}

double rel_err(double got, double want, double floor_scale) {
    return std::fabs(got - want) / std::max(floor_scale, std::fabs(want));
}

} // namespace

SectionResult check_oracle_match(const Options& opt) {
    Timer tm;
    ModelParams base(1.0, 0.5, 1.0, 2.0);
    json per_g = json::array();
    bool pass = true;
    for (double g : {0.3, 0.6, 1.0}) {
        ModelParams p(base.omega, base.omega0, g, base.u);
        std::vector<SpectralPoint> analytic = levels_up_to(p, Branch::Upper, opt.nmax_oracle);
        double e_min = analytic.front().energy, e_max = analytic.back().energy;
        double hi = std::min(trust_ceiling(p, opt.oracle_n1), e_max + 0.5);
        ConvergedLevels lv = split_stabilized(cached_eigenvalues(p, opt.oracle_n1),
                                              cached_eigenvalues(p, opt.oracle_n2),
                                              e_min - 0.5, hi, opt.stabilize_tol);
        MatchReport rep = match_spectra(analytic, lv, opt.match_tol);
        int matched = 0;
        double max_delta = 0.0;
        for (const auto& l : rep.levels)
            if (l.matched && l.stabilized) {
                ++matched;
                max_delta = std::max(max_delta, std::fabs(l.delta));
            }
        bool ok = matched == (int)analytic.size();
        pass = pass && ok;
        per_g.push_back({{"g", g},
                         {"levels", analytic.size()},
                         {"matched_stabilized", matched},
                         {"max_abs_delta", max_delta}});
    }
    return {"oracle_match", pass, false, {{"per_g", per_g}}, tm.elapsed()};
}

SectionResult check_lower_window(const Options& opt) {
    Timer tm;
    int need = (opt.oracle_n2 >= 400) ? 3 : 1;
    json per_g = json::array();
    bool pass = true;
    for (double g : {0.2, 0.3, 0.4}) {
        ModelParams p(1.0, 0.5, g, 2.0);
        double edge = lower_band_edge(p);
        std::vector<SpectralPoint> analytic = levels_up_to(p, Branch::Lower, opt.nmax_oracle);
        if (analytic.empty()) {
            pass = false;
            per_g.push_back({{"g", g}, {"levels", 0}});
            continue;
        }
        bool all_exist = true;
        for (int n = 0; n <= opt.nmax_oracle; ++n)
            all_exist = all_exist && std::any_of(analytic.begin(), analytic.end(),
                                                 [n](const SpectralPoint& q) { return q.n == n; });
        bool below_edge = std::all_of(analytic.begin(), analytic.end(),
                                      [edge](const SpectralPoint& q) { return q.energy < edge; });
        ConvergedLevels lv = split_stabilized(cached_eigenvalues(p, opt.oracle_n1),
                                              cached_eigenvalues(p, opt.oracle_n2),
                                              analytic.front().energy - 0.5, edge, opt.stabilize_tol);
        MatchReport rep = match_spectra(analytic, lv, opt.match_tol);
        int matched = 0;
        bool misses_near_edge = true;
        for (const auto& l : rep.levels) {
            if (l.matched && l.stabilized) ++matched;
            else misses_near_edge = misses_near_edge && std::fabs(l.e_analytic - edge) < 5e-3;
        }
        bool ok = all_exist && below_edge && matched >= need && misses_near_edge;
        pass = pass && ok;
        per_g.push_back({{"g", g},
                         {"levels", analytic.size()},
                         {"matched_stabilized", matched},
                         {"all_levels_exist", all_exist},
                         {"all_below_edge", below_edge},
                         {"misses_near_edge", misses_near_edge}});
    }
    return {"lower_window", pass, false, {{"per_g", per_g}, {"need", need}}, tm.elapsed()};
}

SectionResult check_identities(const Options& opt) {
    Timer tm;
    const int kDraws = 10000;
    const double tol = 1e-12;
    std::vector<ModelParams> sets = general_sets(opt);
    std::mt19937_64 rng(opt.seed + 2);
    std::uniform_real_distribution<double> dt(std::log(1e-4), std::log(1e3));
    std::uniform_real_distribution<double> dxc(-1.0, 1.0), de(-50.0, 50.0);
    std::uniform_int_distribution<int> dsign(0, 1);
    const char* names[7] = {"beta_product_sum",  "saddle_product_sum", "rho_quarter_m",
                            "exponent_pair_sums", "energy_roundtrip",   "whittaker_kappa_mu",
                            "beta_closed_form"};
    double worst[7] = {0, 0, 0, 0, 0, 0, 0};
    for (int i = 0; i < kDraws; ++i) {
        double t = std::exp(dt(rng));
        double x = (dsign(rng) ? 1.0 : -1.0) * (1.0 + t);
        const ModelParams& p = sets[i % sets.size()];

        BetaPair b = beta_coeffs(x);
        worst[0] = std::max(worst[0], rel_err(b.plus * b.minus, 0.25, 0.25));
        worst[0] = std::max(worst[0], rel_err(b.plus + b.minus, x, 1.0));

        SaddlePair sp = saddle_points(x);
        worst[1] = std::max(worst[1], std::abs(4.0 * sp.alpha1 * sp.alpha2 - 1.0));
        worst[1] = std::max(worst[1], std::abs(sp.alpha1 + sp.alpha2 + x) / std::fabs(x));
        SaddlePair sc = saddle_points(dxc(rng));
        worst[1] = std::max(worst[1], std::abs(4.0 * sc.alpha1 * sc.alpha2 - 1.0));
        worst[1] = std::max(worst[1], std::fabs(std::abs(sc.alpha1) - 0.5) / 0.5);

        double m = m_value(p, x), rho = rho_value(p, x);
        worst[2] = std::max(worst[2], rel_err(rho, -m / 4.0, 1.0));

        ExponentTable et = exponent_table(m);
        double scale = std::max(1.0, std::fabs(rho));
        worst[3] = std::max(worst[3], std::fabs(et.at_alpha1[0] + et.at_alpha2[0] + 1.5) / scale);
        worst[3] = std::max(worst[3], std::fabs(et.at_alpha1[1] + et.at_alpha2[1] + 0.5) / scale);
        worst[3] = std::max(worst[3], std::fabs(et.at_infinity[0] - 1.5));
        worst[3] = std::max(worst[3], std::fabs(et.at_infinity[1] - 0.5));

        double e = x_to_e(p, SpectralParam{x});
        worst[4] = std::max(worst[4], rel_err(e_to_x(p, e).x, x, 1.0));
        double e0 = de(rng);
        worst[4] = std::max(worst[4], rel_err(x_to_e(p, e_to_x(p, e0)), e0, 1.0));

        WhittakerParams wp = whittaker_params(m);
        worst[5] = std::max(worst[5], rel_err(wp.kappa, rho, 1.0));
        worst[5] = std::max(worst[5], std::fabs(wp.mu - 0.25));

        if (t <= 10.0) {
            double s = std::sqrt(x * x - 1.0);
            worst[6] = std::max(worst[6], rel_err(b.plus, (x + s) / 2.0, 0.25));
            worst[6] = std::max(worst[6], rel_err(b.minus, (x - s) / 2.0, 0.25));
        }
    }
    bool pass = true;
    json fam = json::object();
    for (int k = 0; k < 7; ++k) {
        pass = pass && worst[k] <= tol;
        fam[names[k]] = worst[k];
    }
    return {"identities", pass, false, {{"max_rel_error", fam}, {"draws", kDraws}, {"tol", tol}},
            tm.elapsed()};
}

SectionResult check_residuals(const Options& opt) {
    Timer tm;
    const double tol = 1e-10;
    double worst = 0.0;
    json worst_at = nullptr;
    int count = 0;
    for (const ModelParams& p : all_sets(opt)) {
        for (Branch b : {Branch::Upper, Branch::Lower})
            for (const SpectralPoint& pt : levels_up_to(p, b, opt.nmax_residual)) {
                EigenFunction ef = build_eigenfunction(p, pt);
                AnalyticFn f1 = psi1_analytic(ef);
                AnalyticFn f2 = psi2_analytic(p, ef);
                double local = 0.0;
                for (int i = 0; i < 5; ++i)
                    for (int j = 0; j < 5; ++j) {
                        cplx z(-2.0 + i, -2.0 + j);
                        auto [r1, r2] = ode_residual_system(p, pt.energy, f1, f2, z);
                        local = std::max({local, std::abs(r1), std::abs(r2),
                                          std::abs(ode_residual_second_order(p, pt.x, f1, z))});
                    }
                ++count;
                if (local > worst) {
                    worst = local;
                    worst_at = {{"branch", branch_name(b)}, {"n", pt.n}, {"x", pt.x}};
                }
            }
        DegeneratePair dp = degenerate_solution(p);
        double e_deg = -p.omega0 / 2.0;
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 5; ++j) {
                cplx z(-2.0 + i, -2.0 + j);
                auto [r1, r2] = ode_residual_system(p, e_deg, dp.psi1, dp.psi2, z);
                worst = std::max({worst, std::abs(r1), std::abs(r2)});
            }
    }
    return {"residuals", worst <= tol, false,
            {{"max_residual", worst}, {"eigenfunctions", count}, {"worst_at", worst_at}, {"tol", tol}},
            tm.elapsed()};
}

SectionResult check_norms(const Options& opt) {
    Timer tm;
    bool pass = true;
    double worst_rel = 0.0;
    int finite_count = 0;
    json notes = json::array();
    for (const ModelParams& p : all_sets(opt)) {
        for (Branch b : {Branch::Upper, Branch::Lower})
            for (const SpectralPoint& pt : levels_up_to(p, b, opt.nmax_oracle)) {
                EigenFunction ef = build_eigenfunction(p, pt);
                try {
                    NormResult n2 = bargmann_norm_sq(taylor_of_eigenfunction(ef, kNormKMax / 2));
                    NormResult n4 = bargmann_norm_sq(taylor_of_eigenfunction(ef, kNormKMax));
                    if (n2.tag != NormResult::Tag::Finite || n4.tag != NormResult::Tag::Finite) {
                        pass = false;
                        notes.push_back({{"branch", branch_name(b)}, {"n", pt.n}, {"issue", "not finite"}});
                        continue;
                    }
                    ++finite_count;
                    worst_rel = std::max(worst_rel, rel_err(n2.value, n4.value, 1e-300));
                } catch (const IndecisiveNormError&) {
                    pass = false;
                    notes.push_back({{"branch", branch_name(b)}, {"n", pt.n}, {"issue", "indecisive"}});
                }
            }
        auto [t1, t2] = taylor_of_degenerate_pair(p, kNormKMax);
        NormResult d1 = bargmann_norm_sq(t1);
        NormResult d2 = bargmann_norm_sq(t2);
        if (d1.tag != NormResult::Tag::Diverging || !d1.sqrt_k_signature) {
            pass = false;
            notes.push_back({{"issue", "degenerate psi1 not sqrt-k diverging"}});
        }
        if (d2.tag != NormResult::Tag::Diverging) {
            pass = false;
            notes.push_back({{"issue", "degenerate psi2 not diverging"}});
        }
    }
    double worst_monomial = 0.0;
    for (int k = 0; k <= 20; ++k) {
        NormResult r = bargmann_norm_sq(TaylorSeries::monomial(k));
        worst_monomial = std::max(worst_monomial,
                                  rel_err(r.value, std::exp(log_factorial(k)), 1.0));
    }
    pass = pass && worst_rel < 1e-10 && worst_monomial <= 1e-12;
    return {"norms", pass, false,
            {{"finite_levels", finite_count},
             {"max_doubling_change", worst_rel},
             {"max_monomial_error", worst_monomial},
             {"notes", notes}},
            tm.elapsed()};
}

SectionResult check_growth(const Options& opt) {
    Timer tm;
    bool pass = true;
    double worst_order = 0.0, worst_type = 0.0;
    int count = 0;
    for (const ModelParams& p : all_sets(opt))
        for (Branch b : {Branch::Upper, Branch::Lower})
            for (const SpectralPoint& pt : levels_up_to(p, b, opt.nmax_oracle)) {
                EigenFunction ef = build_eigenfunction(p, pt);
                auto f = [&ef](cplx z) { return ef.psi1(z); };
                GrowthEstimate ge = growth_order_type(f, growth_grid(growth_radius(std::abs(ef.beta))));
                double type_ref = std::abs(ef.beta.real());
                worst_order = std::max(worst_order, std::fabs(ge.order_hat - 2.0));
                worst_type = std::max(worst_type, std::fabs(ge.type_hat - type_ref) / type_ref);
                ++count;
            }
    DegeneratePair dp = degenerate_solution(ModelParams(1.0, 0.5, 1.0, 2.0));
    GrowthEstimate gd = growth_order_type(dp.psi1.f, growth_grid(growth_radius(0.5)));
    worst_order = std::max(worst_order, std::fabs(gd.order_hat - 2.0));
    worst_type = std::max(worst_type, std::fabs(gd.type_hat - 0.5) / 0.5);
    pass = worst_order <= 0.1 && worst_type <= 0.05;
    return {"growth", pass, false,
            {{"eigenfunctions", count + 1},
             {"max_order_deviation", worst_order},
             {"max_type_rel_deviation", worst_type}},
            tm.elapsed()};
}

SectionResult check_whittaker(const Options& opt) {
    Timer tm;
    bool pass = true;
    long long agreed = 0, fired = 0;
    int branches_with_roots = 0, branches_fired = 0;
    for (const ModelParams& p : all_sets(opt))
        for (Branch b : {Branch::Upper, Branch::Lower}) {
            double sign = (b == Branch::Upper) ? 1.0 : -1.0;
            for (int i = 0; i < opt.grid_points; ++i) {
                double lt = std::log(1e-4) +
                            (std::log(1e3) - std::log(1e-4)) * i / (opt.grid_points - 1);
                double x = sign * (1.0 + std::exp(lt));
                if (equivalence_check(p, x)) ++agreed;
                else pass = false;
            }
            std::vector<SpectralPoint> roots = levels_up_to(p, b, opt.nmax_oracle);
            if (!roots.empty()) ++branches_with_roots;
            bool this_fired = false;
            for (const SpectralPoint& pt : roots) {
                if (!equivalence_check(p, pt.x)) pass = false;
                MultiplierVanishing v = multiplier_vanishes(m_value(p, pt.x));
                bool vanish = (b == Branch::Upper) ? v.beta : v.alpha;
                if (vanish) {
                    ++fired;
                    this_fired = true;
                } else pass = false;
            }
            if (this_fired) ++branches_fired;
        }
    pass = pass && branches_fired == branches_with_roots && fired > 0;
    return {"whittaker", pass, false,
            {{"grid_agreements", agreed},
             {"vanishing_cases", fired},
             {"branches_with_roots", branches_with_roots}},
            tm.elapsed()};
}

SectionResult check_continuum(const Options& opt) {
    Timer tm;
    ModelParams p(1.0, 0.5, 1.0, 2.0);
    double lo = lower_band_edge(p) + 0.02;           // -2.23
    double hi = -p.omega0 / 2.0 - 0.02;              // -0.27
    ConvergedLevels lv = split_stabilized(cached_eigenvalues(p, opt.oracle_n1),
                                          cached_eigenvalues(p, opt.oracle_n2),
                                          lo, hi, opt.stabilize_tol);
    bool classified = true;
    for (int i = 0; i < 100; ++i) {
        double e = lo + (hi - lo) * i / 99.0;
        classified = classified &&
                     classify_energy(p, e).tag == SpectralClass::Tag::Continuum;
    }
    size_t min_density = std::max<size_t>(20, opt.oracle_n2 / 8);
    bool pass = lv.stabilized.empty() && lv.unstabilized.size() >= min_density && classified;
    return {"continuum", pass, false,
            {{"stabilized_count", lv.stabilized.size()},
             {"unstabilized_count", lv.unstabilized.size()},
             {"window", {lo, hi}},
             {"note", "dense cutoff-dependent levels fill the band; none stabilize, "
                      "consistent with continuous spectrum in the infinite-dimensional limit"}},
            tm.elapsed()};
}

std::vector<SectionResult> run_all(const Options& opt) {
    using Check = SectionResult (*)(const Options&);
    const std::pair<const char*, Check> sections[] = {
        {"oracle_match", check_oracle_match}, {"lower_window", check_lower_window},
        {"identities", check_identities},     {"residuals", check_residuals},
        {"norms", check_norms},               {"growth", check_growth},
        {"whittaker", check_whittaker},       {"continuum", check_continuum},
    };
    std::vector<SectionResult> out;
    for (const auto& [name, fn] : sections) {
        bool skip = std::any_of(opt.skip.begin(), opt.skip.end(), [name](const std::string& s) {
            return std::string(name).rfind(s, 0) == 0;
        });
        if (skip) out.push_back({name, true, true, {{"note", "skipped"}}, 0.0});
        else out.push_back(fn(opt));
    }
    return out;
}

std::string report_json(const std::vector<SectionResult>& results) {
    json j;
    j["sections"] = json::array();
    bool all = true;
    for (const SectionResult& r : results) {
        all = all && r.pass;
        j["sections"].push_back({{"name", r.name},
                                 {"pass", r.pass},
                                 {"skipped", r.skipped},
                                 {"seconds", r.seconds},
                                 {"details", r.details}});
    }
    j["all_pass"] = all;
    return j.dump(2);
}

} // namespace qrabi::verify
