#pragma once

#include <array>
#include <complex>
#include <stdexcept>
#include <string>

namespace gawqed {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Inputs that violate an operation's contract.
class PreconditionError : public Error {
public:
    using Error::Error;
};

// Poles, singular systems, degenerate steady states.
class NumericalError : public Error {
public:
    using Error::Error;
};

// Phases are stored pre-multiplied: theta = omega_a * x / v_g.
struct CouplingPoint {
    double phase = 0.0;
    double rate = 1.0;
};

enum class AtomLabel { a, b };

struct GiantAtom {
    AtomLabel label = AtomLabel::a;
    std::array<CouplingPoint, 2> points{};  // left, right
};

// Detunings are not stored: a sweep supplies delta_a and delta_b = delta_a + delta_ab.
struct SystemConfig {
    GiantAtom atom_a{AtomLabel::a, {}};
    GiantAtom atom_b{AtomLabel::b, {}};
    double delta_ab = 0.0;
    double rate_unit = 1.0;
};

enum class Topology { Separate, Braided, Nested };

std::string to_string(Topology t);
Topology topology_from_string(const std::string& s);

struct CharQuantities {
    double lamb_a = 0, lamb_b = 0;
    double gamma_a = 0, gamma_b = 0;
    double g_ab = 0;
    double gamma_ab = 0;
    double alpha_a = 0, alpha_b = 0;
    // s_j / |s_j| with s_j = sum_n sqrt(gamma_jn) exp(i theta_jn).  Its square is
    // exp(i alpha_j); the amplitudes need this particular square root.
    cplx root_a{1, 0}, root_b{1, 0};
};

struct LabeledPoint {
    AtomLabel atom;
    int index;  // 0 = left, 1 = right within the atom
    CouplingPoint point;
};

void validate(const SystemConfig& cfg);
Topology classify_topology(const SystemConfig& cfg);
CharQuantities characteristics(const SystemConfig& cfg);

// Four points in phase order; ties keep a1, a2, b1, b2 order.
std::array<LabeledPoint, 4> sorted_points(const SystemConfig& cfg);

// Equal rates gamma, neighbour spacing phi, leftmost phase 0.
SystemConfig symmetric_config(Topology topo, double phi, double gamma = 1.0);

// Tolerance used for analytic zeros (widths, controls): 1e-9 * rate_unit.
inline double zero_tol(const SystemConfig& cfg) { return 1e-9 * cfg.rate_unit; }

// Rabi couplings per unit drive amplitude: Omega_j / alpha = sum_n sqrt(2 gamma_jn) exp(i (theta_jn - theta_a1)).
std::array<cplx, 2> drive_couplings(const SystemConfig& cfg);

inline double detuning_b(const SystemConfig& cfg, double delta_a) { return delta_a + cfg.delta_ab; }

}  // namespace gawqed
