#include "gawqed/eit.hpp"

#include <cmath>
#include <sstream>

namespace gawqed {

namespace {

const cplx I(0, 1);

ScatterPoint finish(double delta_a, cplx t, cplx r)
{
    ScatterPoint p;
    p.delta_a = delta_a;
    p.t = t;
    p.r = r;
    p.T = std::norm(t);
    p.R = std::norm(r);
    return p;
}

// Two coupled modes, one of them dark: the bright mode has width gb and detuning db,
// the dark one detuning dd.  r vanishes at dd = 0.
void two_mode(double dd, double db, double gb, double g, cplx& t, cplx& r)
{
    const cplx den = I * dd * (I * db - gb / 2) + g * g;
    t = (-dd * db + g * g) / den;
    r = 0.5 * I * gb * dd / den;
}

EitRegime regime_of(double control, double width, double tol)
{
    if (control <= tol) return EitRegime::NotApplicable;
    const double d = 4 * control - width;
    if (std::abs(d) <= tol) return EitRegime::Boundary;
    return d < 0 ? EitRegime::EIT : EitRegime::ATS;
}

}  // namespace

std::string to_string(EitScheme s)
{
    switch (s) {
    case EitScheme::CollectiveSA: return "CollectiveSA";
    case EitScheme::SingleAtom: return "SingleAtom";
    case EitScheme::None: return "None";
    }
    return "?";
}

std::string to_string(DarkState d)
{
    switch (d) {
    case DarkState::S: return "S";
    case DarkState::A: return "A";
    case DarkState::eg: return "eg";
    case DarkState::ge: return "ge";
    case DarkState::none: return "none";
    }
    return "?";
}

std::string to_string(EitRegime r)
{
    switch (r) {
    case EitRegime::EIT: return "EIT";
    case EitRegime::ATS: return "ATS";
    case EitRegime::Boundary: return "Boundary";
    case EitRegime::NotApplicable: return "NotApplicable";
    }
    return "?";
}

SABasisQuantities sa_basis(const SystemConfig& cfg, double delta_a)
{
    const CharQuantities c = characteristics(cfg);
    const double da = delta_a - c.lamb_a;
    const double db = detuning_b(cfg, delta_a) - c.lamb_b;
    SABasisQuantities q;
    q.g_sa = -0.5 * (da - db);
    q.gamma_s = 0.5 * (c.gamma_a + c.gamma_b) + c.gamma_ab;
    q.gamma_a_mode = 0.5 * (c.gamma_a + c.gamma_b) - c.gamma_ab;
    q.gamma_sa = 0.5 * (c.gamma_a - c.gamma_b);
    q.delta_s = 0.5 * (da + db) - c.g_ab;
    q.delta_a_mode = 0.5 * (da + db) + c.g_ab;
    const auto om = drive_couplings(cfg);
    q.omega_s = (om[0] + om[1]) / std::sqrt(2.0);
    q.omega_a_mode = (om[0] - om[1]) / std::sqrt(2.0);
    return q;
}

SABasisQuantities maximum_symmetric_quantities(Topology topo, double phi, double delta_ab, double gamma)
{
    if (!(phi >= 0))
        throw PreconditionError("maximum-symmetric forms assume phi >= 0");
    const double s1 = std::sin(phi), s2 = std::sin(2 * phi), s3 = std::sin(3 * phi);
    const double c1 = std::cos(phi), c2 = std::cos(2 * phi), c3 = std::cos(3 * phi);
    SABasisQuantities q;
    double lamb_a = 0, lamb_b = 0, g_ab = 0;
    switch (topo) {
    case Topology::Separate:
        lamb_a = lamb_b = gamma * s1;
        g_ab = 0.5 * gamma * (s1 + 2 * s2 + s3);
        q.gamma_s = gamma * (2 + 3 * c1 + 2 * c2 + c3);
        q.gamma_a_mode = gamma * (2 + c1 - 2 * c2 - c3);
        q.gamma_sa = 0;
        break;
    case Topology::Braided:
        lamb_a = lamb_b = gamma * s2;
        g_ab = 0.5 * gamma * (3 * s1 + s3);
        q.gamma_s = 2 * gamma * (1 + c2) + gamma * (3 * c1 + c3);
        q.gamma_a_mode = 2 * gamma * (1 + c2) - gamma * (3 * c1 + c3);
        q.gamma_sa = 0;
        break;
    case Topology::Nested:
        lamb_a = gamma * s3;
        lamb_b = gamma * s1;
        g_ab = gamma * (s1 + s2);
        q.gamma_s = gamma * (2 + 3 * c1 + 2 * c2 + c3);
        q.gamma_a_mode = gamma * (2 - c1 - 2 * c2 + c3);
        q.gamma_sa = gamma * (c3 - c1);
        break;
    }
    // g_SA = (delta_ab + lamb_a - lamb_b) / 2; for nested this is delta_ab/2 + gamma (sin 3phi - sin phi)/2
    q.g_sa = 0.5 * (delta_ab + lamb_a - lamb_b);
    const double da = -lamb_a, db = delta_ab - lamb_b;
    q.delta_s = 0.5 * (da + db) - g_ab;
    q.delta_a_mode = 0.5 * (da + db) + g_ab;
    const auto om = drive_couplings(symmetric_config(topo, phi, gamma));
    q.omega_s = (om[0] + om[1]) / std::sqrt(2.0);
    q.omega_a_mode = (om[0] - om[1]) / std::sqrt(2.0);
    return q;
}

ScatterPoint collective_eit_amplitudes(const SABasisQuantities& q, DarkMode dark, double tol)
{
    const double dark_width = dark == DarkMode::S ? q.gamma_s : q.gamma_a_mode;
    if (std::abs(dark_width) > tol) {
        std::ostringstream os;
        os << "dark-mode width " << dark_width << " is not zero";
        throw PreconditionError(os.str());
    }
    if (std::abs(q.gamma_sa) > tol) {
        std::ostringstream os;
        os << "cross decay Gamma_SA = " << q.gamma_sa << " is not zero";
        throw PreconditionError(os.str());
    }
    if (std::abs(q.g_sa) <= tol)
        throw PreconditionError("control g_SA is zero; the dark mode is not coupled");
    cplx t, r;
    if (dark == DarkMode::S)
        two_mode(q.delta_s, q.delta_a_mode, q.gamma_a_mode, q.g_sa, t, r);
    else
        two_mode(q.delta_a_mode, q.delta_s, q.gamma_s, q.g_sa, t, r);
    // the caller owns delta_a
    return finish(0.0, t, r);
}

ScatterPoint single_atom_eit_amplitudes(const SystemConfig& cfg, double delta_a)
{
    const CharQuantities c = characteristics(cfg);
    const double tol = zero_tol(cfg);
    if (std::abs(c.gamma_ab) > tol) {
        std::ostringstream os;
        os << "collective decay Gamma_ab = " << c.gamma_ab << " is not zero";
        throw PreconditionError(os.str());
    }
    const bool dark_a = c.gamma_a <= tol;
    if (!dark_a && c.gamma_b > tol)
        throw PreconditionError("neither atom is decoupled from the waveguide");
    if (std::abs(c.g_ab) <= tol) {
        if (classify_topology(cfg) == Topology::Separate)
            throw PreconditionError("separate topology: a decoupled atom has no exchange interaction (g_ab = 0), "
                                    "so single-atom EIT cannot occur");
        throw PreconditionError("exchange interaction g_ab is zero");
    }
    const double da = delta_a - c.lamb_a;
    const double db = detuning_b(cfg, delta_a) - c.lamb_b;
    cplx t, r;
    if (dark_a)
        two_mode(da, db, c.gamma_b, c.g_ab, t, r);
    else
        two_mode(db, da, c.gamma_a, c.g_ab, t, r);
    return finish(delta_a, t, r);
}

EitVerdict classify_eit(const SystemConfig& cfg)
{
    const double tol = zero_tol(cfg);
    const CharQuantities c = characteristics(cfg);
    const SABasisQuantities q = sa_basis(cfg, 0.0);
    EitVerdict v;

    const bool sa_ok = std::abs(q.gamma_sa) <= tol &&
                       ((q.gamma_s <= tol && q.gamma_a_mode > tol) || (q.gamma_a_mode <= tol && q.gamma_s > tol));
    const bool single_ok =
        std::abs(c.gamma_ab) <= tol && ((c.gamma_a <= tol && c.gamma_b > tol) || (c.gamma_b <= tol && c.gamma_a > tol));

    if (sa_ok) {
        const bool dark_s = q.gamma_s <= tol;
        v.scheme = EitScheme::CollectiveSA;
        v.dark_state = dark_s ? DarkState::S : DarkState::A;
        v.control_strength = std::abs(q.g_sa);
        v.bright_width = dark_s ? q.gamma_a_mode : q.gamma_s;
        v.regime = regime_of(v.control_strength, v.bright_width, tol);
        if (v.regime != EitRegime::NotApplicable)
            v.transparency_delta_a = (dark_s ? c.g_ab : -c.g_ab) + 0.5 * (c.lamb_a + c.lamb_b - cfg.delta_ab);
        else
            v.note = "g_SA = 0: no control coupling to the dark mode";
        if (single_ok) v.note += std::string(v.note.empty() ? "" : "; ") + "single-atom scheme preconditions also hold";
    } else if (single_ok) {
        const bool dark_a = c.gamma_a <= tol;
        v.scheme = EitScheme::SingleAtom;
        v.dark_state = dark_a ? DarkState::eg : DarkState::ge;
        v.control_strength = std::abs(c.g_ab);
        v.bright_width = dark_a ? c.gamma_b : c.gamma_a;
        v.regime = regime_of(v.control_strength, v.bright_width, tol);
        if (v.regime != EitRegime::NotApplicable)
            v.transparency_delta_a = dark_a ? c.lamb_a : c.lamb_b - cfg.delta_ab;
        else
            v.note = "g_ab = 0: no exchange coupling to the dark atom";
    }
    return v;
}

ScatterPoint lambda_reference(double delta_p, double delta_c, double omega_c, double gamma_20, double gamma_21)
{
    if (!(gamma_20 > 0))
        throw PreconditionError("gamma_20 must be > 0");
    const double two = delta_p - delta_c;
    const double oc = omega_c * omega_c / 4;
    const cplx den = I * two * (I * delta_p - (gamma_20 + gamma_21) / 2) + oc;
    const cplx t = (I * two * (I * delta_p - gamma_21 / 2) + oc) / den;
    const cplx r = 0.5 * I * gamma_20 * two / den;
    return finish(delta_p, t, r);
}

}  // namespace gawqed
