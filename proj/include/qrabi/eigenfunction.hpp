// eigenfunction.hpp - Closed-form eigenfunctions, ODE residuals, entire-function growth

#pragma once

#include <complex>
#include <functional>
#include <utility>
#include <vector>

#include "qrabi/model.hpp"
#include "qrabi/spectrum.hpp"

namespace qrabi {

using cplx = std::complex<double>;

// Physicists' Hermite polynomial H_n via the three-term recurrence.
cplx hermite(int n, cplx z);

// Monomial coefficients of H_n, index = power of z. Exact integers in double.
std::vector<double> hermite_coefficients(int n);

struct BetaPair {
    double plus;   // (x + sqrt(x^2-1))/2
    double minus;  // (x - sqrt(x^2-1))/2
};

// Roots of 4b^2 - 4xb + 1 = 0. The near-cancelling root is recovered from the
// product identity 4*b_plus*b_minus = 1 so both stay accurate at large |x|.
BetaPair beta_coeffs(double x);

// psi1(z) = c * exp(-beta z^2) * H_n(scale z). Upper branch: beta = beta_minus,
// scale = i(x^2-1)^{1/4}; Lower branch: beta = beta_plus, scale = (x^2-1)^{1/4}.
struct EigenFunction {
    cplx beta;
    int n;
    cplx scale;
    cplx c;      // unit leading Taylor coefficient, real-valued on the real axis
    bool swap;   // from the UMinus reduction: emit components interchanged
    double x;
    Branch branch;

    cplx psi1(cplx z) const;
    cplx psi1_prime(cplx z) const;
    cplx psi1_second(cplx z) const;
};

EigenFunction build_eigenfunction(const ModelParams& p, const SpectralPoint& pt);

// Closure bundle for residual checks; ddf may be left empty when unused.
struct AnalyticFn {
    std::function<cplx(cplx)> f;
    std::function<cplx(cplx)> df;
    std::function<cplx(cplx)> ddf;
};

AnalyticFn psi1_analytic(const EigenFunction& ef);

// psi2(z) = omega/(g(x-1)) * (z psi1(z) + psi1'(z)); singular at x = 1.
cplx psi2_from_psi1(const ModelParams& p, double x, const AnalyticFn& psi1, cplx z);
AnalyticFn psi2_analytic(const ModelParams& p, const EigenFunction& ef);

// Explicit boundary pair at x = 1 (E = -omega0/2):
//   psi1 = exp(-z^2/2),  psi2 = exp(-z^2/2)(2 omega z^3 - 3 omega0 z)/(3g).
struct DegeneratePair {
    AnalyticFn psi1;
    AnalyticFn psi2;
};

DegeneratePair degenerate_solution(const ModelParams& p);

// Defects of the first-order system, normalized by max(1,|psi1|,|psi2|).
std::pair<cplx, cplx> ode_residual_system(const ModelParams& p, double e,
                                          const AnalyticFn& psi1, const AnalyticFn& psi2,
                                          cplx z);

// Defect of w'' + 2xz w' + (z^2 + x - m sqrt(x^2-1)) w = 0, normalized by max(1,|w|).
cplx ode_residual_second_order(const ModelParams& p, double x, const AnalyticFn& w, cplx z);

// max |f| over the circle |z| = r: k_samples equispaced angles plus a local
// golden-section refinement around the best sample.
double max_modulus(const std::function<cplx(cplx)>& f, double r, int k_samples);

struct GrowthEstimate {
    double order_hat;
    double type_hat;
    std::vector<double> r_grid;
};

// Fits ln M(r) ~ sigma r^rho + b ln r + c over the grid; order_hat is the
// best-fit rho, type_hat the sigma refit at rho rounded to a half-integer.
// Polynomials come back as (0, 0). Throws std::overflow_error when M(r)
// leaves the double range.
GrowthEstimate growth_order_type(const std::function<cplx(cplx)>& f,
                                 const std::vector<double>& r_grid);

// Largest radius keeping exp(|beta| r^2) comfortably inside double range.
double growth_radius(double abs_beta);
std::vector<double> growth_grid(double r_max, int points = 12);

} // namespace qrabi
