// spectrum.hpp - Quantization functions m and rho, discrete-spectrum roots, energy classification

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qrabi/model.hpp"

namespace qrabi {

enum class Branch { Upper, Lower };  // x > 1 / x < -1

const char* branch_name(Branch b);

inline constexpr double kRootTol = 1e-12;  // on x
inline constexpr double kMatchTol = 1e-6;  // on sgn(x)*m(x) for classification

// m(x) = (x-1)(omega(omega-omega0) + g^2(x-1)) / (omega^2 sqrt(x^2-1)),
// positive real square root; domain x^2 > 1.
double m_value(const ModelParams& p, double x);

// rho(x) = -(x-1)(omega(omega-omega0) + g^2(x-1)) / (4 omega^2 sqrt(x^2-1));
// satisfies m = -4*rho identically.
double rho_value(const ModelParams& p, double x);

// sgn(x)*m(x) - (2n+1); zero exactly at the branch eigenvalues.
double quantization_residual(const ModelParams& p, double x, int n, Branch branch);

struct SpectralPoint {
    int n;
    Branch branch;
    double x;
    double energy;
};

// All roots of the quantization condition on the branch domain, sorted by x.
// May be empty: the Lower branch has no roots once g^2 >= omega(omega-omega0)/2.
std::vector<SpectralPoint> solve_level(const ModelParams& p, int n, Branch branch);

struct SweepRow {
    double g;
    SpectralPoint point;
};

struct SweepTable {
    std::vector<SweepRow> rows;

    std::string to_csv() const;  // header g,branch,n,x,E
};

SweepTable spectrum_sweep(const ModelParams& base, const std::vector<double>& g_grid,
                          int n_max, std::optional<Branch> branch = std::nullopt);

struct SpectralClass {
    enum class Tag { PointSpectrumCandidate, Continuum, NonNormalizable, DegenerateBoundary };
    Tag tag;
    int n = -1;                     // set for PointSpectrumCandidate
    Branch branch = Branch::Upper;  // set for PointSpectrumCandidate
};

const char* spectral_class_name(SpectralClass::Tag t);

SpectralClass classify_energy(const ModelParams& p, double e);

} // namespace qrabi
