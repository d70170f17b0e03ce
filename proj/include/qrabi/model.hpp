// model.hpp - Physical parameters, coupling classification, the E <-> x map

#pragma once

#include <stdexcept>

namespace qrabi {

// Requested operation needs U = +-2*omega; anything else is outside this library.
struct OutOfScopeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class CouplingClass { UPlus, UMinus, Generic };

inline constexpr double kClassTol = 1e-12;  // relative, on the scale 2*omega

struct ModelParams {
    double omega;   // boson frequency, > 0
    double omega0;  // level splitting
    double g;       // linear coupling, != 0
    double u;       // nonlinear coupling U

    ModelParams(double omega_, double omega0_, double g_, double u_);
};

CouplingClass coupling_class(const ModelParams& p);
const char* coupling_class_name(CouplingClass c);

// Dimensionless spectral parameter x = 1 + omega*(E + omega0/2)/g^2.
struct SpectralParam {
    double x;
};

SpectralParam e_to_x(const ModelParams& p, double e);
double x_to_e(const ModelParams& p, SpectralParam x);

// U = -2*omega maps onto U = +2*omega by omega0 -> -omega0; the two
// wavefunction components are interchanged in the process.
struct UMinusReduction {
    ModelParams params;
    bool swap_components;
};

UMinusReduction reduce_uminus(const ModelParams& p);

// Throws OutOfScopeError for Generic and std::invalid_argument for UMinus
// (callers must reduce first). `where` names the calling operation.
void require_uplus(const ModelParams& p, const char* where);

} // namespace qrabi
