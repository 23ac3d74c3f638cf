#pragma once

#include "gawqed/core.hpp"
#include "gawqed/scattering.hpp"

namespace gawqed {

// r(delta) = sum over +- of chi * Gamma / (i (delta - Delta) - Gamma)
struct LorentzPair {
    double delta_plus = 0, delta_minus = 0;
    double gamma_plus = 0, gamma_minus = 0;
    cplx chi_plus, chi_minus;
};

// Nested-geometry coefficients, including the branch actually used.
struct NestedCoefficients {
    double A = 0;
    double zeta = 0;
    double lambda1 = 0, lambda2 = 0, lambda3 = 0;
    double chi = 0;
    double vartheta = 0;
    double residual = 0;  // max |r_+ + r_- - r| over the probe grid
};

struct FanoFit {
    double q = 0;
    double f_scale = 0;
    double center = 0;
    double width = 0;
    bool plus_dominant = true;
};

enum class FanoRegime { PlusDominant, MinusDominant, None };

std::string to_string(FanoRegime r);

LorentzPair lorentz_decompose(Topology topo, double phi, double gamma = 1.0);
NestedCoefficients nested_coefficients(double phi, double gamma = 1.0);

cplx reconstruct_reflection(const LorentzPair& p, double delta);

FanoFit fano_fit(const LorentzPair& p);
// F (q + eps)^2 / (1 + eps^2), eps = (delta - center) / width
double fano_reflectance(const FanoFit& f, double delta);

FanoRegime fano_regime(Topology topo, double phi, double gamma = 1.0);

// Braided geometry at phi = pi/2 + dev, |dev| <= 0.1.
ScatterPoint rabi_approximation(double dev, double delta, double gamma = 1.0);

}  // namespace gawqed
