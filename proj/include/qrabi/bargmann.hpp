// bargmann.hpp - Factorial-weighted Taylor inner product, finite/divergent norm decision

#pragma once

#include <complex>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qrabi/eigenfunction.hpp"

namespace qrabi {

// ln k!; exact cumulative table for small k, lgamma above.
double log_factorial(int k);

// Coefficients kept as unit phase * exp(log magnitude): the raw Gaussian
// coefficients underflow in double near k ~ 350 while the factorial-weighted
// norm terms k!|a_k|^2 are still significant.
struct TaylorSeries {
    std::vector<cplx> unit;       // phase factors; 0 marks a zero coefficient
    std::vector<double> log_abs;  // ln|a_k|; -inf marks a zero coefficient
    bool exact = false;           // all coefficients beyond the truncation vanish

    int truncation() const { return (int)log_abs.size() - 1; }
    cplx coeff(int k) const;
    cplx eval(cplx z) const;

    static TaylorSeries from_coeffs(const std::vector<cplx>& a, bool exact = true);
    static TaylorSeries monomial(int k);
};

// First K+1 coefficients of c * exp(-beta z^2) * H_n(scale z).
TaylorSeries taylor_of_gauss_hermite(cplx beta, int n, cplx scale, cplx c, int K);
TaylorSeries taylor_of_eigenfunction(const EigenFunction& ef, int K);

// Coefficients of the explicit boundary pair at x = 1 (see degenerate_solution).
std::pair<TaylorSeries, TaylorSeries> taylor_of_degenerate_pair(const ModelParams& p, int K);

inline constexpr int kNormKMax = 4000;
inline constexpr double kNormDelta = 0.05;  // decision margin on the tail term ratio

struct NormResult {
    enum class Tag { Finite, Diverging };
    Tag tag;
    double value = 0.0;             // Finite: sum of k!|a_k|^2 plus a tail estimate
    double tail_ratio = 0.0;        // median ratio of consecutive nonzero tail terms
    bool sqrt_k_signature = false;  // Diverging via terms ~ k^{-1/2} (partial sums ~ sqrt(K))
};

// Tail behavior neither clearly summable nor clearly divergent at this K.
struct IndecisiveNormError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

NormResult bargmann_norm_sq(const TaylorSeries& s);

// sum k! conj(a_k) b_k; refuses inputs whose norms diverge. Tails are bounded
// through the Finite classification of both factors (each below 1e-12 relative).
cplx inner_product(const TaylorSeries& f, const TaylorSeries& g);

} // namespace qrabi
