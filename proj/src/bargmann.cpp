#include "qrabi/bargmann.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qrabi {

static const double kNegInf = -std::numeric_limits<double>::infinity();

double log_factorial(int k) {
    if (k < 0) throw std::invalid_argument("log_factorial: k must be non-negative");
    static const std::vector<double> table = [] {
        std::vector<double> t(151);
        t[0] = 0.0;
        long double acc = 0.0L;
        for (int i = 1; i <= 150; ++i) {
            acc += logl((long double)i);
            t[i] = (double)acc;
        }
        return t;
    }();
    if (k <= 150) return table[k];
    return std::lgamma((double)k + 1.0);
}

cplx TaylorSeries::coeff(int k) const {
    if (k < 0 || k > truncation() || log_abs[k] == kNegInf) return 0.0;
    return unit[k] * std::exp(log_abs[k]);
}

cplx TaylorSeries::eval(cplx z) const {
    cplx acc = 0.0;
    for (int k = truncation(); k >= 0; --k) acc = acc * z + coeff(k);
    return acc;
}

TaylorSeries TaylorSeries::from_coeffs(const std::vector<cplx>& a, bool exact) {
    TaylorSeries s;
    s.exact = exact;
    s.unit.reserve(a.size());
    s.log_abs.reserve(a.size());
    for (cplx v : a) {
        const double mag = std::abs(v);
        s.unit.push_back(mag > 0.0 ? v / mag : cplx(0.0));
        s.log_abs.push_back(mag > 0.0 ? std::log(mag) : kNegInf);
    }
    return s;
}

TaylorSeries TaylorSeries::monomial(int k) {
    if (k < 0) throw std::invalid_argument("monomial: k must be non-negative");
    std::vector<cplx> a(k + 1, 0.0);
    a[k] = 1.0;
    return from_coeffs(a, true);
}

// Coefficients of c * exp(-beta z^2) * sum_j poly[j] z^j, assembled in log
// space: each a_k mixes poly[j] (-beta)^m / m! over j = k mod 2, m = (k-j)/2.
static TaylorSeries gauss_times_poly(cplx beta, const std::vector<cplx>& poly, cplx c, int K) {
    if (K + 1 < (int)poly.size())
        throw std::invalid_argument("gauss_times_poly: K below the polynomial degree");
    TaylorSeries s;
    s.unit.assign(K + 1, 0.0);
    s.log_abs.assign(K + 1, kNegInf);
    s.exact = (beta == 0.0);

    const double abs_c = std::abs(c);
    if (abs_c == 0.0) return s;
    const cplx unit_c = c / abs_c;
    const double log_c = std::log(abs_c);

    const cplx mb = -beta;
    const double abs_b = std::abs(mb);
    const double log_b = abs_b > 0.0 ? std::log(abs_b) : kNegInf;
    const cplx unit_b = abs_b > 0.0 ? mb / abs_b : cplx(0.0);

    const int deg = (int)poly.size() - 1;
    std::vector<double> lmag;
    std::vector<cplx> lunit;
    for (int k = 0; k <= K; ++k) {
        lmag.clear();
        lunit.clear();
        for (int j = k % 2; j <= std::min(deg, k); j += 2) {
            const double pa = std::abs(poly[j]);
            if (pa == 0.0) continue;
            const int m = (k - j) / 2;
            if (m > 0 && abs_b == 0.0) continue;
            const double lg = std::log(pa) + (m > 0 ? m * log_b : 0.0) - log_factorial(m);
            lmag.push_back(lg);
            lunit.push_back(poly[j] / pa * (m > 0 ? std::pow(unit_b, m) : cplx(1.0)));
        }
        if (lmag.empty()) continue;
        const double top = *std::max_element(lmag.begin(), lmag.end());
        cplx acc = 0.0;
        for (size_t i = 0; i < lmag.size(); ++i) acc += lunit[i] * std::exp(lmag[i] - top);
        const double am = std::abs(acc);
        if (am == 0.0) continue;
        s.unit[k] = unit_c * acc / am;
        s.log_abs[k] = log_c + top + std::log(am);
    }
    return s;
}

TaylorSeries taylor_of_gauss_hermite(cplx beta, int n, cplx scale, cplx c, int K) {
    if (K < n) throw std::invalid_argument("taylor_of_gauss_hermite: K must be >= n");
    const std::vector<double> h = hermite_coefficients(n);
    std::vector<cplx> poly(n + 1);
    cplx sj = 1.0;
    for (int j = 0; j <= n; ++j) {
        poly[j] = h[j] * sj;
        sj *= scale;
    }
    return gauss_times_poly(beta, poly, c, K);
}

TaylorSeries taylor_of_eigenfunction(const EigenFunction& ef, int K) {
    return taylor_of_gauss_hermite(ef.beta, ef.n, ef.scale, ef.c, K);
}

std::pair<TaylorSeries, TaylorSeries> taylor_of_degenerate_pair(const ModelParams& p, int K) {
    require_uplus(p, "taylor_of_degenerate_pair");
    TaylorSeries psi1 = gauss_times_poly(0.5, {1.0}, 1.0, K);
    TaylorSeries psi2 = gauss_times_poly(
        0.5, {0.0, -p.omega0 / p.g, 0.0, 2.0 * p.omega / (3.0 * p.g)}, 1.0, K);
    return {psi1, psi2};
}

NormResult bargmann_norm_sq(const TaylorSeries& s) {
    const int K = s.truncation();
    std::vector<double> lt(K + 1, kNegInf);
    bool any = false;
    for (int k = 0; k <= K; ++k) {
        if (s.log_abs[k] == kNegInf) continue;
        lt[k] = log_factorial(k) + 2.0 * s.log_abs[k];
        any = true;
    }
    if (!any) return {NormResult::Tag::Finite, 0.0, 0.0, false};

    auto plain_sum = [&] {
        double acc = 0.0;
        for (double v : lt)
            if (v != kNegInf) acc += std::exp(v);
        return acc;
    };
    if (s.exact) return {NormResult::Tag::Finite, plain_sum(), 0.0, false};

    // Stride-2 term ratios near the truncation end; stride 2 keeps parity
    // classes comparable whether one or both are populated.
    std::vector<int> pair_k;
    for (int k = 0; k + 2 <= K; ++k)
        if (lt[k] != kNegInf && lt[k + 2] != kNegInf) pair_k.push_back(k);
    const int win = pair_k.empty()
                        ? 0
                        : std::min((int)pair_k.size(), std::max(16, (int)pair_k.size() / 4));
    if (win < 8) {
        bool tail_zero = true;
        for (int k = K / 2; k <= K; ++k)
            if (lt[k] != kNegInf) tail_zero = false;
        if (tail_zero) return {NormResult::Tag::Finite, plain_sum(), 0.0, false};
        throw IndecisiveNormError("bargmann_norm_sq: series too short to classify");
    }

    std::vector<double> ratios;
    ratios.reserve(win);
    double t_last = 0.0;
    for (int i = (int)pair_k.size() - win; i < (int)pair_k.size(); ++i) {
        const int k = pair_k[i];
        ratios.push_back(std::exp(lt[k + 2] - lt[k]));
        t_last = std::max(t_last, std::exp(lt[k + 2]));
    }
    std::vector<double> sorted = ratios;
    std::sort(sorted.begin(), sorted.end());
    const double r_med = sorted[sorted.size() / 2];
    const double r_max = sorted.back();

    if (r_med >= 1.0) return {NormResult::Tag::Diverging, 0.0, r_med, false};

    const double sum = plain_sum();
    if (!std::isfinite(sum))
        throw IndecisiveNormError("bargmann_norm_sq: partial sum overflows double range");
    const double tail_est = t_last * r_med / (1.0 - r_med);
    if (r_max < 1.0 && t_last * r_max / (1.0 - r_max) <= 1e-12 * sum)
        return {NormResult::Tag::Finite, sum + tail_est, r_med, false};
    if (r_med <= 1.0 - kNormDelta)
        return {NormResult::Tag::Finite, sum + tail_est, r_med, false};

    // Borderline: terms ~ k^{-1/2} make partial sums grow like sqrt(K);
    // lt + ln(k)/2 then flattens across the window.
    double umin = std::numeric_limits<double>::infinity(), umax = kNegInf;
    for (int i = (int)pair_k.size() - win; i < (int)pair_k.size(); ++i) {
        const int k = pair_k[i] + 2;
        const double u = lt[k] + 0.5 * std::log((double)k);
        umin = std::min(umin, u);
        umax = std::max(umax, u);
    }
    if (umax - umin <= std::log(1.1))
        return {NormResult::Tag::Diverging, 0.0, r_med, true};

    throw IndecisiveNormError("bargmann_norm_sq: tail ratio inconclusive at this truncation");
}

cplx inner_product(const TaylorSeries& f, const TaylorSeries& g) {
    const NormResult nf = bargmann_norm_sq(f);
    const NormResult ng = bargmann_norm_sq(g);
    if (nf.tag != NormResult::Tag::Finite || ng.tag != NormResult::Tag::Finite)
        throw std::invalid_argument("inner_product: a factor has a divergent norm");
    const int K = std::min(f.truncation(), g.truncation());
    double top = kNegInf;
    for (int k = 0; k <= K; ++k) {
        if (f.log_abs[k] == kNegInf || g.log_abs[k] == kNegInf) continue;
        top = std::max(top, log_factorial(k) + f.log_abs[k] + g.log_abs[k]);
    }
    if (top == kNegInf) return 0.0;
    cplx acc = 0.0;
    for (int k = 0; k <= K; ++k) {
        if (f.log_abs[k] == kNegInf || g.log_abs[k] == kNegInf) continue;
        const double l = log_factorial(k) + f.log_abs[k] + g.log_abs[k];
        acc += std::conj(f.unit[k]) * g.unit[k] * std::exp(l - top);
    }
    return std::exp(top) * acc;
}

} // namespace qrabi
