// fock.cpp - Hamiltonian assembly, blocked cyclic Jacobi, stabilization and matching

#include "qrabi/fock.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <json.hpp>

namespace qrabi {

int fock_index(int n, int s) { return 2 * n + (s > 0 ? 0 : 1); }

FockMatrix build_hamiltonian(const ModelParams& p, int n_cutoff) {
    if (n_cutoff < 1) throw std::invalid_argument("build_hamiltonian: n_cutoff must be >= 1");
    FockMatrix m;
    m.n_cutoff = n_cutoff;
    m.dim = 2 * (n_cutoff + 1);
    m.a.assign((size_t)m.dim * m.dim, 0.0);
    for (int n = 0; n <= n_cutoff; ++n)
        for (int s : {1, -1}) {
            m.at(fock_index(n, s), fock_index(n, s)) = (p.omega + 0.5 * s * p.u) * n + 0.5 * s * p.omega0;
            if (n < n_cutoff) {
                double v = p.g * std::sqrt(n + 1.0);
                m.at(fock_index(n, s), fock_index(n + 1, -s)) = v;
                m.at(fock_index(n + 1, -s), fock_index(n, s)) = v;
            }
        }
    return m;
}

std::vector<double> jacobi_eigenvalues(std::vector<double> a, int n) {
    const int kBlock = 48;
    if (n < 1 || (size_t)n * n != a.size())
        throw std::invalid_argument("jacobi_eigenvalues: size mismatch");
    double fro2 = 0.0;
    for (double v : a) fro2 += v * v;
    const double target = 1e-12 * std::sqrt(fro2);
    bool converged = false;
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off2 = 0.0, sm = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                double v = a[(size_t)i * n + j];
                off2 += 2 * v * v;
                sm += std::fabs(v);
            }
        if (std::sqrt(off2) <= target) {
            converged = true;
            break;
        }
        const double tresh = (sweep < 4) ? 0.2 * sm / ((double)n * n) : 0.0;
        const int nb = (n + kBlock - 1) / kBlock;
        for (int bi = 0; bi < nb; ++bi)
            for (int bj = bi; bj < nb; ++bj) {
                const int p0 = bi * kBlock, p1 = std::min(n, p0 + kBlock);
                const int q0 = bj * kBlock, q1 = std::min(n, q0 + kBlock);
                for (int p = p0; p < p1; ++p)
                    for (int q = std::max(p + 1, q0); q < q1; ++q) {
                        const double apq = a[(size_t)p * n + q];
                        const double g = 100.0 * std::fabs(apq);
                        if (sweep >= 4 && std::fabs(a[(size_t)p * n + p]) + g == std::fabs(a[(size_t)p * n + p])
                                       && std::fabs(a[(size_t)q * n + q]) + g == std::fabs(a[(size_t)q * n + q])) {
                            a[(size_t)p * n + q] = a[(size_t)q * n + p] = 0.0;
                            continue;
                        }
                        if (std::fabs(apq) <= tresh) continue;
                        const double theta = 0.5 * (a[(size_t)q * n + q] - a[(size_t)p * n + p]) / apq;
                        double t;
                        if (std::fabs(theta) > 1e153) t = 0.5 / theta;
                        else t = ((theta >= 0) ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(1.0 + theta * theta));
                        const double c = 1.0 / std::sqrt(1.0 + t * t), s = t * c;
                        double* rp = &a[(size_t)p * n];
                        double* rq = &a[(size_t)q * n];
                        for (int j = 0; j < n; ++j) {
                            const double x = rp[j], y = rq[j];
                            rp[j] = c * x - s * y;
                            rq[j] = s * x + c * y;
                        }
                        for (int j = 0; j < n; ++j) {
                            double* row = &a[(size_t)j * n];
                            const double x = row[p], y = row[q];
                            row[p] = c * x - s * y;
                            row[q] = s * x + c * y;
                        }
                        a[(size_t)p * n + q] = a[(size_t)q * n + p] = 0.0;
                    }
            }
    }
    if (!converged) throw std::runtime_error("jacobi_eigenvalues: no convergence after 100 sweeps");
    std::vector<double> d(n);
    for (int i = 0; i < n; ++i) d[i] = a[(size_t)i * n + i];
    std::sort(d.begin(), d.end());
    return d;
}

std::vector<double> eigenvalues_sym(const FockMatrix& m) {
    return jacobi_eigenvalues(m.a, m.dim);
}

std::vector<int> parity_permutation(int n_cutoff) {
    std::vector<int> perm;
    perm.reserve(2 * (n_cutoff + 1));
    for (int parity : {1, -1})
        for (int n = 0; n <= n_cutoff; ++n)
            for (int s : {1, -1})
                if ((n % 2 == 0 ? s : -s) == parity) perm.push_back(fock_index(n, s));
    return perm;
}

double trust_ceiling(const ModelParams& p, int n_cutoff) {
    return p.omega * n_cutoff / 4.0;
}

ConvergedLevels split_stabilized(const std::vector<double>& ev1, const std::vector<double>& ev2,
                                 double e_lo, double e_hi, double tol) {
    ConvergedLevels out;
    for (double e : ev2) {
        if (e < e_lo || e > e_hi) continue;
        auto it = std::lower_bound(ev1.begin(), ev1.end(), e);
        double best = std::numeric_limits<double>::infinity();
        if (it != ev1.end()) best = std::min(best, std::fabs(*it - e));
        if (it != ev1.begin()) best = std::min(best, std::fabs(*(it - 1) - e));
        (best <= tol ? out.stabilized : out.unstabilized).push_back(e);
    }
    return out;
}

ConvergedLevels converged_levels(const ModelParams& p, int n1, int n2,
                                 double e_lo, double e_hi, double tol) {
    if (n2 < n1 + 20) throw std::invalid_argument("converged_levels: need n2 >= n1 + 20");
    std::vector<double> ev1 = eigenvalues_sym(build_hamiltonian(p, n1));
    std::vector<double> ev2 = eigenvalues_sym(build_hamiltonian(p, n2));
    return split_stabilized(ev1, ev2, e_lo, e_hi, tol);
}

namespace {

// Nearest unclaimed entry of v to e; returns -1 when none remain.
int nearest_unclaimed(const std::vector<double>& v, const std::vector<char>& claimed, double e) {
    int best = -1;
    double bd = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < v.size(); ++i) {
        if (claimed[i]) continue;
        double d = std::fabs(v[i] - e);
        if (d < bd) {
            bd = d;
            best = (int)i;
        }
    }
    return best;
}

} // namespace

MatchReport match_spectra(const std::vector<SpectralPoint>& analytic,
                          const std::vector<double>& numeric, double tol) {
    ConvergedLevels lv;
    lv.stabilized = numeric;
    return match_spectra(analytic, lv, tol);
}

MatchReport match_spectra(const std::vector<SpectralPoint>& analytic,
                          const ConvergedLevels& levels, double tol) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    MatchReport rep;
    std::vector<char> claimed_s(levels.stabilized.size(), 0);
    std::vector<char> claimed_u(levels.unstabilized.size(), 0);
    for (const SpectralPoint& pt : analytic) {
        MatchReport::Level lv{pt.n, pt.branch, pt.energy, nan, nan, false, false};
        int i = nearest_unclaimed(levels.stabilized, claimed_s, pt.energy);
        if (i >= 0 && std::fabs(levels.stabilized[i] - pt.energy) <= tol) {
            claimed_s[i] = 1;
            lv.e_numeric = levels.stabilized[i];
            lv.delta = levels.stabilized[i] - pt.energy;
            lv.stabilized = true;
            lv.matched = true;
        } else {
            int j = nearest_unclaimed(levels.unstabilized, claimed_u, pt.energy);
            if (j >= 0 && std::fabs(levels.unstabilized[j] - pt.energy) <= tol) {
                claimed_u[j] = 1;
                lv.e_numeric = levels.unstabilized[j];
                lv.matched = true;
            }
        }
        rep.levels.push_back(lv);
    }
    for (size_t i = 0; i < levels.stabilized.size(); ++i)
        if (!claimed_s[i]) rep.unmatched_numeric.push_back(levels.stabilized[i]);
    return rep;
}

std::string MatchReport::to_json() const {
    nlohmann::json j;
    j["levels"] = nlohmann::json::array();
    for (const Level& lv : levels) {
        nlohmann::json e;
        e["n"] = lv.n;
        e["branch"] = branch_name(lv.branch);
        e["E_analytic"] = lv.e_analytic;
        e["E_numeric"] = lv.e_numeric;
        e["delta"] = lv.delta;
        e["stabilized"] = lv.stabilized;
        e["matched"] = lv.matched;
        j["levels"].push_back(e);
    }
    j["unmatched_numeric"] = unmatched_numeric;
    return j.dump(2);
}

} // namespace qrabi
