#include "qrabi/model.hpp"

#include <cmath>
#include <string>

namespace qrabi {

ModelParams::ModelParams(double omega_, double omega0_, double g_, double u_)
    : omega(omega_), omega0(omega0_), g(g_), u(u_) {
    if (!(std::isfinite(omega) && std::isfinite(omega0) && std::isfinite(g) && std::isfinite(u)))
        throw std::invalid_argument("ModelParams: parameters must be finite");
    if (!(omega > 0.0))
        throw std::invalid_argument("ModelParams: omega must be positive");
    if (g == 0.0)
        throw std::invalid_argument("ModelParams: g = 0 decouples the two components");
}

CouplingClass coupling_class(const ModelParams& p) {
    const double scale = 2.0 * p.omega;
    if (std::fabs(p.u - scale) <= kClassTol * scale) return CouplingClass::UPlus;
    if (std::fabs(p.u + scale) <= kClassTol * scale) return CouplingClass::UMinus;
    return CouplingClass::Generic;
}

const char* coupling_class_name(CouplingClass c) {
    switch (c) {
        case CouplingClass::UPlus: return "UPlus";
        case CouplingClass::UMinus: return "UMinus";
        default: return "Generic";
    }
}

SpectralParam e_to_x(const ModelParams& p, double e) {
    require_uplus(p, "e_to_x");
    return {1.0 + p.omega * (e + 0.5 * p.omega0) / (p.g * p.g)};
}

double x_to_e(const ModelParams& p, SpectralParam x) {
    require_uplus(p, "x_to_e");
    return p.g * p.g * (x.x - 1.0) / p.omega - 0.5 * p.omega0;
}

UMinusReduction reduce_uminus(const ModelParams& p) {
    if (coupling_class(p) != CouplingClass::UMinus)
        throw std::invalid_argument("reduce_uminus: coupling class is not UMinus");
    return {ModelParams(p.omega, -p.omega0, p.g, 2.0 * p.omega), true};
}

void require_uplus(const ModelParams& p, const char* where) {
    switch (coupling_class(p)) {
        case CouplingClass::UPlus: return;
        case CouplingClass::UMinus:
            throw std::invalid_argument(std::string(where) +
                                        ": UMinus parameters; apply reduce_uminus() first");
        default:
            throw OutOfScopeError(std::string(where) +
                                  ": generic coupling U^2 != 4 omega^2 is out of scope");
    }
}

} // namespace qrabi
