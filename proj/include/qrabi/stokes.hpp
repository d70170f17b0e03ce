// stokes.hpp - Saddle geometry, local exponents, Whittaker multiplier checks

#pragma once

#include <array>
#include <complex>

#include "qrabi/model.hpp"

namespace qrabi {

// Roots of alpha^2 + x alpha + 1/4 = 0; alpha1 alpha2 = 1/4, alpha1 + alpha2 = -x.
// Real and distinct for x^2 > 1, a conjugate pair on |alpha| = 1/2 for x^2 < 1.
struct SaddlePair {
    std::complex<double> alpha1;  // -beta_minus
    std::complex<double> alpha2;  // -beta_plus
};

SaddlePair saddle_points(double x);

// True when one saddle supports a decaying direction, i.e. x^2 > 1 strictly.
bool normalizable_saddle_exists(double x);

// Local exponent pairs of the second-order equation at the two finite saddles
// and at infinity, for rho = -m/4. Index-matched saddle sums are -3/2 and -1/2.
struct ExponentTable {
    std::array<double, 2> at_alpha1;    // rho - 3/4, rho - 1/4
    std::array<double, 2> at_alpha2;    // -rho - 3/4, -rho - 1/4
    std::array<double, 2> at_infinity;  // 3/2, 1/2
    std::array<bool, 2> integer_at_alpha1;  // non-negative integer within 1e-9
    std::array<bool, 2> integer_at_alpha2;
};

ExponentTable exponent_table(double m);

// Anti-Stokes bisectors for a saddle difference along the positive real axis.
std::array<double, 2> stokes_line_angles();
// Same for a general saddle difference direction.
std::array<double, 2> stokes_line_angles(std::complex<double> saddle_diff);

struct WhittakerParams {
    double kappa;  // -m/4
    double mu;     // 1/4
};

WhittakerParams whittaker_params(double m);

// Which of the two connection multipliers vanish: alpha when kappa + mu or
// kappa - mu is a half non-negative integer, beta for -kappa +- mu.
struct MultiplierVanishing {
    bool alpha;
    bool beta;
};

MultiplierVanishing multiplier_vanishes(double m);

// Compares the vanishing-multiplier route to normalizability against the
// quantization condition sgn(x) m(x) = 2n + 1; true when they agree at x.
bool equivalence_check(const ModelParams& p, double x);

} // namespace qrabi
