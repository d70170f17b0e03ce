#include "qrabi/eigenfunction.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qrabi {

cplx hermite(int n, cplx z) {
    if (n < 0) throw std::invalid_argument("hermite: n must be non-negative");
    cplx hkm1 = 1.0, hk = 2.0 * z;
    if (n == 0) return hkm1;
    for (int k = 1; k < n; ++k) {
        const cplx hkp1 = 2.0 * z * hk - 2.0 * (double)k * hkm1;
        hkm1 = hk;
        hk = hkp1;
    }
    return hk;
}

std::vector<double> hermite_coefficients(int n) {
    if (n < 0) throw std::invalid_argument("hermite_coefficients: n must be non-negative");
    std::vector<double> prev{1.0}, cur{0.0, 2.0};
    if (n == 0) return prev;
    for (int k = 1; k < n; ++k) {
        std::vector<double> next(k + 2, 0.0);
        for (int j = 0; j <= k; ++j) next[j + 1] += 2.0 * cur[j];
        for (int j = 0; j < k; ++j) next[j] -= 2.0 * k * prev[j];
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

BetaPair beta_coeffs(double x) {
    if (!(x * x >= 1.0)) throw std::domain_error("beta_coeffs: x^2 must be >= 1");
    const double s = std::sqrt(x * x - 1.0);
    if (x >= 0.0) {
        const double bp = 0.5 * (x + s);
        return {bp, 0.25 / bp};
    }
    const double bm = 0.5 * (x - s);
    return {0.25 / bm, bm};
}

cplx EigenFunction::psi1(cplx z) const {
    return c * std::exp(-beta * z * z) * hermite(n, scale * z);
}

cplx EigenFunction::psi1_prime(cplx z) const {
    cplx poly = -2.0 * beta * z * hermite(n, scale * z);
    if (n >= 1) poly += 2.0 * (double)n * scale * hermite(n - 1, scale * z);
    return c * std::exp(-beta * z * z) * poly;
}

cplx EigenFunction::psi1_second(cplx z) const {
    cplx poly = (4.0 * beta * beta * z * z - 2.0 * beta) * hermite(n, scale * z);
    if (n >= 1) poly += -8.0 * (double)n * beta * scale * z * hermite(n - 1, scale * z);
    if (n >= 2) poly += 4.0 * (double)(n * (n - 1)) * scale * scale * hermite(n - 2, scale * z);
    return c * std::exp(-beta * z * z) * poly;
}

EigenFunction build_eigenfunction(const ModelParams& p, const SpectralPoint& pt) {
    require_uplus(p, "build_eigenfunction");
    const double x = pt.x;
    if (!(x * x > 1.0))
        throw std::invalid_argument(
            "build_eigenfunction: x^2 <= 1; the x = 1 boundary pair comes from degenerate_solution()");
    if (pt.branch == Branch::Upper ? !(x > 1.0) : !(x < -1.0))
        throw std::invalid_argument("build_eigenfunction: branch does not match the sign of x");
    if (std::fabs(quantization_residual(p, x, pt.n, pt.branch)) > kMatchTol)
        throw std::invalid_argument("build_eigenfunction: point fails the quantization condition");

    const BetaPair bp = beta_coeffs(x);
    const double q = std::pow(x * x - 1.0, 0.25);
    EigenFunction ef;
    ef.n = pt.n;
    ef.swap = false;
    ef.x = x;
    ef.branch = pt.branch;
    if (pt.branch == Branch::Upper) {
        ef.beta = bp.minus;
        ef.scale = cplx(0.0, q);
    } else {
        ef.beta = bp.plus;
        ef.scale = cplx(q, 0.0);
    }
    // Unit lowest-order Taylor coefficient; folds any i^n from the Hermite
    // argument into c so psi1 is real on the real axis.
    const cplx low = (pt.n % 2 == 0)
                         ? cplx(hermite(pt.n, 0.0))
                         : 2.0 * (double)pt.n * hermite(pt.n - 1, 0.0) * ef.scale;
    ef.c = 1.0 / low;
    return ef;
}

AnalyticFn psi1_analytic(const EigenFunction& ef) {
    return {[ef](cplx z) { return ef.psi1(z); },
            [ef](cplx z) { return ef.psi1_prime(z); },
            [ef](cplx z) { return ef.psi1_second(z); }};
}

cplx psi2_from_psi1(const ModelParams& p, double x, const AnalyticFn& psi1, cplx z) {
    require_uplus(p, "psi2_from_psi1");
    if (x == 1.0) throw std::domain_error("psi2_from_psi1: singular at x = 1");
    return p.omega / (p.g * (x - 1.0)) * (z * psi1.f(z) + psi1.df(z));
}

AnalyticFn psi2_analytic(const ModelParams& p, const EigenFunction& ef) {
    require_uplus(p, "psi2_analytic");
    if (ef.x == 1.0) throw std::domain_error("psi2_analytic: singular at x = 1");
    const double pref = p.omega / (p.g * (ef.x - 1.0));
    return {[ef, pref](cplx z) { return pref * (z * ef.psi1(z) + ef.psi1_prime(z)); },
            [ef, pref](cplx z) {
                return pref * (ef.psi1(z) + z * ef.psi1_prime(z) + ef.psi1_second(z));
            },
            {}};
}

DegeneratePair degenerate_solution(const ModelParams& p) {
    require_uplus(p, "degenerate_solution");
    const double om = p.omega, om0 = p.omega0, g = p.g;
    AnalyticFn psi1{[](cplx z) { return std::exp(-0.5 * z * z); },
                    [](cplx z) { return -z * std::exp(-0.5 * z * z); },
                    [](cplx z) { return (z * z - 1.0) * std::exp(-0.5 * z * z); }};
    auto h = [om, om0, g](cplx z) { return (2.0 * om * z * z * z - 3.0 * om0 * z) / (3.0 * g); };
    auto hp = [om, om0, g](cplx z) { return (2.0 * om * z * z - om0) / g; };
    auto hpp = [om, g](cplx z) { return 4.0 * om * z / g; };
    AnalyticFn psi2{[h](cplx z) { return std::exp(-0.5 * z * z) * h(z); },
                    [h, hp](cplx z) { return std::exp(-0.5 * z * z) * (-z * h(z) + hp(z)); },
                    [h, hp, hpp](cplx z) {
                        return std::exp(-0.5 * z * z) *
                               ((z * z - 1.0) * h(z) - 2.0 * z * hp(z) + hpp(z));
                    }};
    return {psi1, psi2};
}

std::pair<cplx, cplx> ode_residual_system(const ModelParams& p, double e,
                                          const AnalyticFn& psi1, const AnalyticFn& psi2,
                                          cplx z) {
    require_uplus(p, "ode_residual_system");
    const cplx f1 = psi1.f(z), f2 = psi2.f(z);
    const double om = p.omega, om0 = p.omega0, g = p.g;
    const cplx r1 = psi1.df(z) - (-z * f1 + (2.0 * e + om0) / (2.0 * g) * f2);
    const cplx r2 = psi2.df(z) - ((4.0 * om * z * z + 2.0 * e - om0) / (2.0 * g) * f1 -
                                  z * (g * g + om * (2.0 * e + om0)) / (g * g) * f2);
    const double den = std::max({1.0, std::abs(f1), std::abs(f2)});
    return {r1 / den, r2 / den};
}

cplx ode_residual_second_order(const ModelParams& p, double x, const AnalyticFn& w, cplx z) {
    require_uplus(p, "ode_residual_second_order");
    if (!std::isfinite(x))
        throw std::domain_error("ode_residual_second_order: x must be finite");
    if (!w.ddf)
        throw std::invalid_argument("ode_residual_second_order: w needs a second derivative");
    // m*sqrt(x^2-1) collapses to the rational numerator of m.
    const double q = (x - 1.0) * (p.omega * (p.omega - p.omega0) + p.g * p.g * (x - 1.0)) /
                     (p.omega * p.omega);
    const cplx f = w.f(z);
    const cplx r = w.ddf(z) + 2.0 * x * z * w.df(z) + (z * z + x - q) * f;
    return r / std::max(1.0, std::abs(f));
}

static double golden_min(const std::function<double(double)>& fn, double a, double b, int iters) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = fn(c), fd = fn(d);
    for (int i = 0; i < iters; ++i) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = fn(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = fn(d);
        }
    }
    return fc < fd ? c : d;
}

double max_modulus(const std::function<cplx(cplx)>& f, double r, int k_samples) {
    if (!(r > 0.0)) throw std::invalid_argument("max_modulus: r must be positive");
    if (k_samples < 64) throw std::invalid_argument("max_modulus: need at least 64 samples");
    const double two_pi = 2.0 * M_PI;
    auto mod_at = [&](double phi) { return std::abs(f(std::polar(r, phi))); };
    double best = -1.0, best_phi = 0.0;
    for (int j = 0; j < k_samples; ++j) {
        const double phi = two_pi * j / k_samples;
        const double v = mod_at(phi);
        if (v > best) {
            best = v;
            best_phi = phi;
        }
    }
    const double dphi = two_pi / k_samples;
    const double phi_ref =
        golden_min([&](double phi) { return -mod_at(phi); }, best_phi - dphi, best_phi + dphi, 80);
    return std::max(best, mod_at(phi_ref));
}

namespace {

struct GrowthFit {
    double rss;
    double sigma;
    double slope_lnr;
    double offset;
};

// Least squares of y ~ sigma r^rho + b ln r + c via 3x3 normal equations.
GrowthFit fit_at_order(const std::vector<double>& r, const std::vector<double>& y, double rho) {
    double G[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
    double h[3] = {0, 0, 0};
    const size_t n = r.size();
    for (size_t i = 0; i < n; ++i) {
        const double u[3] = {std::pow(r[i], rho), std::log(r[i]), 1.0};
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) G[a][b] += u[a] * u[b];
            h[a] += u[a] * y[i];
        }
    }
    double M[3][4];
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) M[a][b] = G[a][b];
        M[a][3] = h[a];
    }
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int rw = col + 1; rw < 3; ++rw)
            if (std::fabs(M[rw][col]) > std::fabs(M[piv][col])) piv = rw;
        if (M[piv][col] == 0.0) return {1e300, 0.0, 0.0, 0.0};
        if (piv != col)
            for (int b = col; b < 4; ++b) std::swap(M[piv][b], M[col][b]);
        for (int rw = col + 1; rw < 3; ++rw) {
            const double fac = M[rw][col] / M[col][col];
            for (int b = col; b < 4; ++b) M[rw][b] -= fac * M[col][b];
        }
    }
    double coef[3];
    for (int a = 2; a >= 0; --a) {
        double acc = M[a][3];
        for (int b = a + 1; b < 3; ++b) acc -= M[a][b] * coef[b];
        coef[a] = acc / M[a][a];
    }
    double rss = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double pred = coef[0] * std::pow(r[i], rho) + coef[1] * std::log(r[i]) + coef[2];
        rss += (y[i] - pred) * (y[i] - pred);
    }
    return {rss, coef[0], coef[1], coef[2]};
}

} // namespace

GrowthEstimate growth_order_type(const std::function<cplx(cplx)>& f,
                                 const std::vector<double>& r_grid) {
    if (r_grid.size() < 4)
        throw std::invalid_argument("growth_order_type: need at least 4 radii");
    for (size_t i = 0; i < r_grid.size(); ++i) {
        if (!(r_grid[i] > 0.0) || (i > 0 && !(r_grid[i] > r_grid[i - 1])))
            throw std::invalid_argument("growth_order_type: radii must be positive increasing");
    }
    std::vector<double> y(r_grid.size());
    for (size_t i = 0; i < r_grid.size(); ++i) {
        const double m = max_modulus(f, r_grid[i], 256);
        if (!std::isfinite(m))
            throw std::overflow_error("growth_order_type: max modulus left the double range");
        if (!(m > 0.0))
            throw std::invalid_argument("growth_order_type: function vanishes on a sample circle");
        y[i] = std::log(m);
        if (!std::isfinite(y[i]))
            throw std::overflow_error("growth_order_type: ln of max modulus not finite");
    }

    // ln M of a polynomial is log-linear in r; the power term of the full
    // model is then numerically unidentifiable, so decide that case first
    // with the well-conditioned two-parameter fit y = b ln r + c.
    const double yspan = *std::max_element(y.begin(), y.end()) -
                         *std::min_element(y.begin(), y.end());
    {
        const double n = (double)r_grid.size();
        double sx = 0.0, sxx = 0.0, sy = 0.0, sxy = 0.0;
        for (size_t i = 0; i < r_grid.size(); ++i) {
            const double lx = std::log(r_grid[i]);
            sx += lx;
            sxx += lx * lx;
            sy += y[i];
            sxy += lx * y[i];
        }
        const double det = n * sxx - sx * sx;
        const double b = (n * sxy - sx * sy) / det;
        const double c = (sy * sxx - sx * sxy) / det;
        double max_resid = 0.0;
        for (size_t i = 0; i < r_grid.size(); ++i)
            max_resid = std::max(max_resid,
                                 std::fabs(y[i] - b * std::log(r_grid[i]) - c));
        if (max_resid < 0.1 * std::max(1.0, yspan)) return {0.0, 0.0, r_grid};
    }

    auto rss_at = [&](double rho) { return fit_at_order(r_grid, y, rho).rss; };
    const int n_scan = 40;
    double best_rho = 0.25, best_rss = rss_at(0.25);
    int best_i = 0;
    for (int i = 1; i < n_scan; ++i) {
        const double rho = 0.25 + (5.0 - 0.25) * i / (n_scan - 1);
        const double v = rss_at(rho);
        if (v < best_rss) {
            best_rss = v;
            best_rho = rho;
            best_i = i;
        }
    }
    const double step = (5.0 - 0.25) / (n_scan - 1);
    const double lo = std::max(0.05, best_rho - (best_i > 0 ? step : 0.0));
    const double hi = best_rho + (best_i < n_scan - 1 ? step : 0.0);
    const double rho_hat = (hi > lo) ? golden_min(rss_at, lo, hi, 60) : best_rho;

    const GrowthFit at_hat = fit_at_order(r_grid, y, rho_hat);
    if (std::fabs(at_hat.sigma) * std::pow(r_grid.back(), rho_hat) <
        1e-3 * std::max(1.0, yspan))
        return {0.0, 0.0, r_grid};

    const double rho_round = std::max(0.5, std::round(2.0 * rho_hat) / 2.0);
    const GrowthFit at_round = fit_at_order(r_grid, y, rho_round);
    return {std::max(0.0, rho_hat), std::max(0.0, at_round.sigma), r_grid};
}

double growth_radius(double abs_beta) {
    return std::sqrt(580.0 / std::max(abs_beta, 1e-8));
}

std::vector<double> growth_grid(double r_max, int points) {
    if (points < 4) throw std::invalid_argument("growth_grid: need at least 4 points");
    std::vector<double> grid(points);
    const double r_min = r_max / 10.0;
    for (int i = 0; i < points; ++i)
        grid[i] = r_min * std::pow(r_max / r_min, (double)i / (points - 1));
    return grid;
}

} // namespace qrabi
