#include "qrabi/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "qrabi/io.hpp"

namespace qrabi {

const char* branch_name(Branch b) {
    return b == Branch::Upper ? "upper" : "lower";
}

static void check_domain(double x, const char* where) {
    if (!(x * x > 1.0))
        throw std::domain_error(std::string(where) + ": x^2 must exceed 1");
}

double m_value(const ModelParams& p, double x) {
    require_uplus(p, "m_value");
    check_domain(x, "m_value");
    const double num = (x - 1.0) * (p.omega * (p.omega - p.omega0) + p.g * p.g * (x - 1.0));
    return num / (p.omega * p.omega * std::sqrt(x * x - 1.0));
}

double rho_value(const ModelParams& p, double x) {
    require_uplus(p, "rho_value");
    check_domain(x, "rho_value");
    const double num = (x - 1.0) * (p.omega * (p.omega - p.omega0) + p.g * p.g * (x - 1.0));
    return -num / (4.0 * p.omega * p.omega * std::sqrt(x * x - 1.0));
}

double quantization_residual(const ModelParams& p, double x, int n, Branch branch) {
    if (branch == Branch::Upper ? !(x > 1.0) : !(x < -1.0))
        throw std::domain_error("quantization_residual: x outside the branch domain");
    const double sgn = (x > 0.0) ? 1.0 : -1.0;
    return sgn * m_value(p, x) - (2.0 * n + 1.0);
}

// Bisection run until the interval degenerates in double precision. The slope
// of the residual blows up like 1/(x^2-1) toward the branch endpoint, so a
// fixed interval width would not keep the residual itself small there.
static double bisect_to_machine(const ModelParams& p, int n, Branch branch,
                                double a, double b, double fa) {
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (a + b);
        if (mid == a || mid == b) break;
        const double fm = quantization_residual(p, mid, n, branch);
        if (fm == 0.0) return mid;
        if ((fa < 0.0) != (fm < 0.0)) {
            b = mid;
        } else {
            a = mid;
            fa = fm;
        }
    }
    return 0.5 * (a + b);
}

std::vector<SpectralPoint> solve_level(const ModelParams& p, int n, Branch branch) {
    require_uplus(p, "solve_level");
    if (n < 0) throw std::invalid_argument("solve_level: n must be non-negative");

    // Geometric scan of offsets t = |x|-1 from 1e-12 up to ~2e6: roots pile up
    // against the branch endpoint on the Lower branch and recede to infinity
    // on the Upper one, so both tails need exponential coverage.
    const double dir = (branch == Branch::Upper) ? 1.0 : -1.0;
    std::vector<SpectralPoint> out;
    double t_prev = 1e-12;
    double f_prev = quantization_residual(p, dir * (1.0 + t_prev), n, branch);
    for (double t = 2e-12; t <= 2.3e6; t *= 2.0) {
        const double f = quantization_residual(p, dir * (1.0 + t), n, branch);
        if (f == 0.0) {
            const double x = dir * (1.0 + t);
            out.push_back({n, branch, x, x_to_e(p, {x})});
        } else if ((f_prev < 0.0) != (f < 0.0)) {
            double a = dir * (1.0 + t_prev), b = dir * (1.0 + t);
            if (a > b) std::swap(a, b);
            const double x = bisect_to_machine(p, n, branch,
                                               a, b, quantization_residual(p, a, n, branch));
            out.push_back({n, branch, x, x_to_e(p, {x})});
        }
        t_prev = t;
        f_prev = f;
    }
    if (branch == Branch::Lower) {
        std::reverse(out.begin(), out.end());  // scan ran away from -1, i.e. decreasing x
    }
    return out;
}

SweepTable spectrum_sweep(const ModelParams& base, const std::vector<double>& g_grid,
                          int n_max, std::optional<Branch> branch) {
    if (g_grid.empty()) throw std::invalid_argument("spectrum_sweep: empty g grid");
    if (n_max < 0) throw std::invalid_argument("spectrum_sweep: n_max must be non-negative");
    SweepTable table;
    for (double g : g_grid) {
        ModelParams p(base.omega, base.omega0, g, base.u);
        for (Branch b : {Branch::Upper, Branch::Lower}) {
            if (branch && *branch != b) continue;
            for (int n = 0; n <= n_max; ++n)
                for (const SpectralPoint& pt : solve_level(p, n, b))
                    table.rows.push_back({g, pt});
        }
    }
    return table;
}

std::string SweepTable::to_csv() const {
    std::ostringstream os;
    os << "g,branch,n,x,E\n";
    for (const SweepRow& r : rows)
        os << fmt17(r.g) << ',' << branch_name(r.point.branch) << ',' << r.point.n << ','
           << fmt17(r.point.x) << ',' << fmt17(r.point.energy) << '\n';
    return os.str();
}

const char* spectral_class_name(SpectralClass::Tag t) {
    switch (t) {
        case SpectralClass::Tag::PointSpectrumCandidate: return "PointSpectrumCandidate";
        case SpectralClass::Tag::Continuum: return "Continuum";
        case SpectralClass::Tag::NonNormalizable: return "NonNormalizable";
        default: return "DegenerateBoundary";
    }
}

SpectralClass classify_energy(const ModelParams& p, double e) {
    require_uplus(p, "classify_energy");
    const double x = e_to_x(p, e).x;
    if (std::fabs(x - 1.0) <= kRootTol || std::fabs(x + 1.0) <= kRootTol)
        return {SpectralClass::Tag::DegenerateBoundary};
    if (std::fabs(x) < 1.0) return {SpectralClass::Tag::Continuum};
    const double sgn = (x > 0.0) ? 1.0 : -1.0;
    const double sm = sgn * m_value(p, x);
    const double n_near = std::round(0.5 * (sm - 1.0));
    if (n_near >= 0.0 && std::fabs(sm - (2.0 * n_near + 1.0)) <= kMatchTol)
        return {SpectralClass::Tag::PointSpectrumCandidate, (int)n_near,
                x > 0.0 ? Branch::Upper : Branch::Lower};
    return {SpectralClass::Tag::NonNormalizable};
}

} // namespace qrabi
