// fock.hpp - Truncated Fock-space Hamiltonian, in-house Jacobi eigensolver, spectrum matching

#pragma once

#include <string>
#include <vector>

#include "qrabi/model.hpp"
#include "qrabi/spectrum.hpp"

namespace qrabi {

// Real symmetric matrix in the interleaved basis |n,s>, n = 0..N, s = +-1.
struct FockMatrix {
    int n_cutoff;
    int dim;                // 2(N+1)
    std::vector<double> a;  // row-major

    double& at(int i, int j) { return a[(size_t)i * dim + j]; }
    double at(int i, int j) const { return a[(size_t)i * dim + j]; }
};

int fock_index(int n, int s);  // s = +1 -> 2n, s = -1 -> 2n+1

// Diagonal (omega + s U/2) n + s omega0/2; coupling g sqrt(n+1) between
// |n,s> and |n+1,-s>. Bandwidth 3 in this ordering.
FockMatrix build_hamiltonian(const ModelParams& p, int n_cutoff);

// Cyclic Jacobi on a full symmetric matrix; ascending eigenvalues. Converges
// when the off-diagonal Frobenius norm drops below 1e-12 * ||A||_F; throws
// std::runtime_error after 100 sweeps without convergence.
std::vector<double> jacobi_eigenvalues(std::vector<double> a, int dim);
std::vector<double> eigenvalues_sym(const FockMatrix& m);

// Basis permutation splitting the matrix into the two s(-1)^n parity blocks.
std::vector<int> parity_permutation(int n_cutoff);

// Truncated eigenvalues above roughly omega*N/4 are cutoff artifacts.
double trust_ceiling(const ModelParams& p, int n_cutoff);

struct ConvergedLevels {
    std::vector<double> stabilized;    // moved < tol between the two cutoffs
    std::vector<double> unstabilized;  // the rest of the window
};

// Entries of ev2 inside [e_lo, e_hi], split by whether the nearest ev1 entry
// sits within tol. Both inputs ascending.
ConvergedLevels split_stabilized(const std::vector<double>& ev1, const std::vector<double>& ev2,
                                 double e_lo, double e_hi, double tol);

// split_stabilized over the spectra of the N1 and N2 truncations.
// Requires N2 >= N1 + 20.
ConvergedLevels converged_levels(const ModelParams& p, int n1, int n2,
                                 double e_lo, double e_hi, double tol);

struct MatchReport {
    struct Level {
        int n;
        Branch branch;
        double e_analytic;
        double e_numeric;  // NaN when unmatched
        double delta;      // NaN when unmatched
        bool stabilized;
        bool matched;
    };
    std::vector<Level> levels;
    std::vector<double> unmatched_numeric;

    std::string to_json() const;
};

// Greedy nearest-neighbor matching of analytic levels against a numeric list
// treated as stabilized; each numeric level is claimed at most once.
MatchReport match_spectra(const std::vector<SpectralPoint>& analytic,
                          const std::vector<double>& numeric, double tol);

// As above, then reports near misses against the unstabilized list (numeric
// value only; no delta is claimed for an unstabilized level).
MatchReport match_spectra(const std::vector<SpectralPoint>& analytic,
                          const ConvergedLevels& levels, double tol);

} // namespace qrabi
