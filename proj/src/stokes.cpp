// stokes.cpp - Saddle points, exponent tables, multiplier vanishing, equivalence check

#include "qrabi/stokes.hpp"

#include <cmath>
#include <stdexcept>

#include "qrabi/eigenfunction.hpp"
#include "qrabi/spectrum.hpp"

namespace qrabi {

SaddlePair saddle_points(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("saddle_points: x must be finite");
    SaddlePair sp;
    if (x * x >= 1.0) {
        BetaPair b = beta_coeffs(x);
        sp.alpha1 = -b.minus;
        sp.alpha2 = -b.plus;
    } else {
        double s = std::sqrt(1.0 - x * x);
        sp.alpha1 = {-x / 2.0, s / 2.0};
        sp.alpha2 = std::conj(sp.alpha1);
    }
    return sp;
}

bool normalizable_saddle_exists(double x) { return x * x > 1.0; }

namespace {

bool near_nonneg_integer(double v) {
    long long r = std::llround(v);
    return r >= 0 && std::fabs(v - (double)r) <= 1e-9;
}

// v in half-steps: 2v a non-negative integer within 1e-9.
bool half_nonneg_integer(double v) { return near_nonneg_integer(2.0 * v); }

} // namespace

ExponentTable exponent_table(double m) {
    double rho = -m / 4.0;
    ExponentTable t;
    t.at_alpha1 = {rho - 0.75, rho - 0.25};
    t.at_alpha2 = {-rho - 0.75, -rho - 0.25};
    t.at_infinity = {1.5, 0.5};
    for (int i = 0; i < 2; ++i) {
        t.integer_at_alpha1[i] = near_nonneg_integer(t.at_alpha1[i]);
        t.integer_at_alpha2[i] = near_nonneg_integer(t.at_alpha2[i]);
    }
    return t;
}

std::array<double, 2> stokes_line_angles() { return {M_PI / 4.0, -M_PI / 4.0}; }

std::array<double, 2> stokes_line_angles(std::complex<double> saddle_diff) {
    if (std::abs(saddle_diff) == 0.0)
        throw std::invalid_argument("stokes_line_angles: zero saddle difference");
    double theta = std::arg(saddle_diff);
    return {(M_PI / 2.0 - theta) / 2.0, (-M_PI / 2.0 - theta) / 2.0};
}

WhittakerParams whittaker_params(double m) { return {-m / 4.0, 0.25}; }

MultiplierVanishing multiplier_vanishes(double m) {
    WhittakerParams w = whittaker_params(m);
    MultiplierVanishing v;
    v.alpha = half_nonneg_integer(w.kappa + w.mu) || half_nonneg_integer(w.kappa - w.mu);
    v.beta = half_nonneg_integer(-w.kappa - w.mu) || half_nonneg_integer(-w.kappa + w.mu);
    return v;
}

bool equivalence_check(const ModelParams& p, double x) {
    double m = m_value(p, x);
    MultiplierVanishing v = multiplier_vanishes(m);
    bool whittaker_route = (x > 1.0 && v.beta && m > 0.0) || (x < -1.0 && v.alpha && m < 0.0);
    double sm = (x > 0 ? m : -m);
    long long r = std::llround((sm - 1.0) / 2.0);
    bool quantized = r >= 0 && std::fabs(sm - (2.0 * r + 1.0)) <= 1e-9;
    return whittaker_route == quantized;
}

} // namespace qrabi
