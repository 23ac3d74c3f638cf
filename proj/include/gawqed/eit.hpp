#pragma once

#include "gawqed/core.hpp"
#include "gawqed/scattering.hpp"

#include <optional>
#include <string>

namespace gawqed {

struct SABasisQuantities {
    double g_sa = 0;
    double gamma_s = 0, gamma_a_mode = 0, gamma_sa = 0;
    double delta_s = 0, delta_a_mode = 0;
    cplx omega_s, omega_a_mode;  // per unit drive amplitude alpha
};

enum class DarkMode { S, A };
enum class EitScheme { CollectiveSA, SingleAtom, None };
enum class DarkState { S, A, eg, ge, none };
enum class EitRegime { EIT, ATS, Boundary, NotApplicable };

std::string to_string(EitScheme s);
std::string to_string(DarkState d);
std::string to_string(EitRegime r);

struct EitVerdict {
    EitScheme scheme = EitScheme::None;
    DarkState dark_state = DarkState::none;
    EitRegime regime = EitRegime::NotApplicable;
    double control_strength = 0;
    double bright_width = 0;
    std::optional<double> transparency_delta_a;
    std::string note;
};

SABasisQuantities sa_basis(const SystemConfig& cfg, double delta_a);

// Widths and couplings at delta_a = 0, so delta_s / delta_a_mode hold the static offsets.
SABasisQuantities maximum_symmetric_quantities(Topology topo, double phi, double delta_ab, double gamma = 1.0);

ScatterPoint collective_eit_amplitudes(const SABasisQuantities& q, DarkMode dark, double tol = 1e-9);
ScatterPoint single_atom_eit_amplitudes(const SystemConfig& cfg, double delta_a);

EitVerdict classify_eit(const SystemConfig& cfg);

ScatterPoint lambda_reference(double delta_p, double delta_c, double omega_c, double gamma_20, double gamma_21);

}  // namespace gawqed
