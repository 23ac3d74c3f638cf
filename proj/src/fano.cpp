#include "gawqed/fano.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <complex>
#include <sstream>
#include <vector>

namespace gawqed {

namespace {

const cplx I(0, 1);

double wrap_abs(double phi)
{
    return std::abs(std::remainder(phi, 2 * pi));
}

// Symmetric nested reflection in extended precision.  Near phi = 0 and pi one
// collective width collapses like the square of the offset and the double
// evaluation loses digits against it; the branch check needs better than that.
cplx nested_reflection_ld(double phi, double delta, double gamma)
{
    using ld = long double;
    using lc = std::complex<ld>;
    const ld f = phi, g = gamma, d = delta;
    const lc e1 = std::polar(1.0L, f), e2 = std::polar(1.0L, 2 * f), e3 = std::polar(1.0L, 3 * f);
    const lc sa = 1.0L + e3, sb = e1 + e2;
    const lc ea = lc(0, d - g * std::imag(e3)) - g * std::norm(sa) / 2;
    const lc eb = lc(0, d - g * std::imag(e1)) - g * std::norm(sb) / 2;
    const lc c = g * (e1 + e2);
    const lc D = ea * eb - c * c;
    const lc Nr = g / 2 * (ea * sb * sb + eb * sa * sa) + c * g * sa * sb;
    if (std::abs(D) < 1e-30L * g * g)  // removable pole, the double path takes the limit
        return amplitudes_topology(Topology::Nested, phi, delta, gamma).r;
    const lc r = Nr / D;
    return cplx(static_cast<double>(r.real()), static_cast<double>(r.imag()));
}

struct NestedCandidate {
    LorentzPair pair;
    NestedCoefficients co;
};

// Poles and prefactors for one choice of the zeta / vartheta branches.
NestedCandidate nested_candidate(double phi, double gamma, double zeta, bool flip, bool neg)
{
    // multiple angles from phi itself: rounding 3 phi costs more than a narrow width
    const double s1 = std::sin(phi), c1 = std::cos(phi);
    const double s2 = 2 * s1 * c1, c2 = 1 - 2 * s1 * s1;
    const double s3 = s1 * (3 - 4 * s1 * s1);
    const double s4 = 2 * s2 * c2, s5 = s1 * (16 * c1 * c1 * c1 * c1 - 12 * c1 * c1 + 1);
    const double A = std::sqrt((1 - 3 * c1) * (1 - 3 * c1) + 4 * s1 * s1);
    const double h = std::abs(std::cos(phi / 2));
    const double w = std::sqrt(2 * A) * h;

    // 1 + (cos phi + cos 3phi)/2 written so that it keeps relative accuracy near phi = pi
    const double ch = std::cos(phi / 2), ch3 = ch * (4 * ch * ch - 3);
    const double base = ch * ch + ch3 * ch3;
    const bool decoupled = base < 1e-24;

    NestedCandidate c;
    auto& p = c.pair;
    p.delta_plus = gamma * (0.5 * (s1 + s3) - w * std::cos(2 * phi + zeta));
    p.delta_minus = gamma * (0.5 * (s1 + s3) + w * std::cos(2 * phi + zeta));
    p.gamma_plus = decoupled ? 0.0 : gamma * (base + w * std::sin(2 * phi + zeta));
    p.gamma_minus = decoupled ? 0.0 : gamma * (base - w * std::sin(2 * phi + zeta));
    if (!decoupled) {
        // The narrow pole from the product of the roots, which every factor keeps
        // to relative accuracy; base -/+ w sin(.) cancels down to it.
        const double g1 = s1 + s2;
        const cplx prod = gamma * gamma *
                          cplx(s3 * s1 - g1 * g1, -2 * (s3 * ch * ch + s1 * ch3 * ch3) + 4 * ch3 * ch * g1);
        const cplx pp(p.delta_plus, -p.gamma_plus), pm(p.delta_minus, -p.gamma_minus);
        if (p.gamma_plus < p.gamma_minus) {
            const cplx n = prod / pm;
            p.delta_plus = n.real(), p.gamma_plus = -n.imag();
        } else {
            const cplx n = prod / pp;
            p.delta_minus = n.real(), p.gamma_minus = -n.imag();
        }
    }

    auto& k = c.co;
    k.A = A;
    k.zeta = zeta;
    const double e = 2 * c1 - c2 - 2;
    k.lambda1 = -h * (5 * s3 - 2 * s4 + s5) / (4 * std::sqrt(2 * A));
    k.lambda2 = std::sqrt(2 / A) * h * h * h * e * e;
    k.lambda3 = std::sqrt(2 / A) * h * e;

    double X;
    const double u = wrap_abs(phi);
    const double gg = p.gamma_plus * p.gamma_minus;
    if (u < 0.02) {
        // the closed form cancels catastrophically near phi = 0 mod 2 pi
        const double u2 = u * u;
        X = u * (1.5 + u2 * (-11.0 / 16 + u2 * (261.0 / 1280 - u2 * 5671.0 / 215040)));
    } else if (decoupled) {
        X = -1;  // phi = pi mod 2 pi: both widths vanish and r is identically zero
    } else if (const double e = std::remainder(phi - pi, 2 * pi); std::abs(e) < 1e-3) {
        // and near pi, where it divides two products of vanishing widths; the sign
        // goes with the zeta branch, so both are offered
        const double e2 = e * e;
        X = (neg ? -1 : 1) * (1 - e2 * (49.0 / 32 - e2 * 2737.0 / 6144));
    } else {
        X = gamma * (k.lambda1 * (p.gamma_plus - p.gamma_minus) + k.lambda2 * (p.delta_plus - p.delta_minus)) / gg;
    }
    const cplx Z(X, k.lambda3);
    k.chi = std::abs(Z);
    k.vartheta = std::arg(Z) + (flip ? pi : 0.0);
    p.chi_plus = std::polar(k.chi, phi - zeta + k.vartheta);
    p.chi_minus = std::polar(k.chi, phi - zeta - k.vartheta);
    return c;
}

// Rounding in a pole position is amplified by gamma / width on that line.
double line_tolerance(double width, double gamma)
{
    return width > 0 ? std::max(1e-10, 100 * DBL_EPSILON * gamma / width) : 1e-10;
}

struct Residual {
    double grid = 0;   // regular detuning grid
    double lines = 0;  // on and next to each line, in units of that line's tolerance
    double worst = 0;
};

Residual decomposition_residual(const LorentzPair& p, double phi, double gamma)
{
    auto err = [&](double d) { return std::abs(reconstruct_reflection(p, d) - nested_reflection_ld(phi, d, gamma)); };
    Residual r;
    for (int i = 0; i <= 32; ++i) r.grid = std::max(r.grid, err(gamma * (-8.0 + 0.5 * i)));
    r.worst = r.grid;
    for (auto [d, w] : {std::pair{p.delta_plus, p.gamma_plus}, std::pair{p.delta_minus, p.gamma_minus}})
        for (double x : {d - w, d, d + w}) {
            const double e = err(x);
            r.worst = std::max(r.worst, e);
            r.lines = std::max(r.lines, e / line_tolerance(w, gamma));
        }
    return r;
}

void check_widths(LorentzPair& p, double gamma)
{
    if (p.gamma_plus < -1e-12 * gamma || p.gamma_minus < -1e-12 * gamma) {
        std::ostringstream os;
        os << "negative Lorentz width (" << p.gamma_plus << ", " << p.gamma_minus << ")";
        throw NumericalError(os.str());
    }
    p.gamma_plus = std::max(p.gamma_plus, 0.0);
    p.gamma_minus = std::max(p.gamma_minus, 0.0);
}

NestedCandidate nested_select(double phi, double gamma)
{
    const double zeta0 = 0.5 * std::atan2(2 * std::sin(phi), 1 - 3 * std::cos(phi));
    NestedCandidate best;
    Residual best_res{INFINITY, INFINITY, INFINITY};
    const bool near_pi = std::abs(std::remainder(phi - pi, 2 * pi)) < 1e-3;
    for (int k = 0; k < 4; ++k)
        for (int v = 0; v < (near_pi ? 4 : 2); ++v) {
            NestedCandidate c = nested_candidate(phi, gamma, zeta0 + k * pi / 2, v & 1, v & 2);
            if (c.pair.gamma_plus < -1e-12 * gamma || c.pair.gamma_minus < -1e-12 * gamma) continue;
            const Residual r = decomposition_residual(c.pair, phi, gamma);
            c.co.residual = r.worst;
            if (r.worst < 1e-10) return c;
            if (r.grid < best_res.grid) {
                best_res = r;
                best = c;
            }
        }
    // Close to phi = 0 or pi a line can be only a few ulps of delta wide and no
    // double evaluation resolves it; such lines get the rounding allowance.
    if (best_res.grid < 1e-10 && best_res.lines < 1) return best;
    std::ostringstream os;
    os.precision(17);
    os << "no zeta/vartheta branch reproduces the nested reflection at phi=" << phi << " (best residual "
       << best_res.worst << ")";
    throw NumericalError(os.str());
}

}  // namespace

std::string to_string(FanoRegime r)
{
    switch (r) {
    case FanoRegime::PlusDominant: return "plus_dominant";
    case FanoRegime::MinusDominant: return "minus_dominant";
    case FanoRegime::None: return "none";
    }
    return "?";
}

cplx reconstruct_reflection(const LorentzPair& p, double delta)
{
    cplx r = 0;
    if (p.gamma_plus > 0) r += p.chi_plus * p.gamma_plus / (I * (delta - p.delta_plus) - p.gamma_plus);
    if (p.gamma_minus > 0) r += p.chi_minus * p.gamma_minus / (I * (delta - p.delta_minus) - p.gamma_minus);
    return r;
}

NestedCoefficients nested_coefficients(double phi, double gamma)
{
    return nested_select(phi, gamma).co;
}

LorentzPair lorentz_decompose(Topology topo, double phi, double gamma)
{
    // 1 + cos x = 2 cos^2(x/2) and friends keep the widths relatively accurate at their zeros
    const double s1 = std::sin(phi), c1 = std::cos(phi);
    const double s2 = 2 * s1 * c1, s3 = s1 * (3 - 4 * s1 * s1);
    const double ch = std::cos(phi / 2), sh = std::sin(phi / 2);
    LorentzPair p;
    switch (topo) {
    case Topology::Separate:
        p.delta_plus = gamma * s1 * (1 + 2 * c1 + 2 * c1 * c1);
        p.delta_minus = gamma * s1 * (1 - 2 * c1 - 2 * c1 * c1);
        p.gamma_plus = gamma * 4 * ch * ch * c1 * c1;
        p.gamma_minus = gamma * 4 * ch * ch * s1 * s1;
        break;
    case Topology::Braided:
        p.delta_plus = gamma * (s2 + 1.5 * s1 + 0.5 * s3);
        p.delta_minus = gamma * (s2 - 1.5 * s1 - 0.5 * s3);
        p.gamma_plus = gamma * 4 * c1 * c1 * ch * ch;
        p.gamma_minus = gamma * 4 * c1 * c1 * sh * sh;
        break;
    case Topology::Nested:
        p = nested_select(phi, gamma).pair;
        check_widths(p, gamma);
        return p;
    }
    p.chi_plus = std::polar(1.0, 3 * phi);
    p.chi_minus = -p.chi_plus;
    check_widths(p, gamma);
    return p;
}

FanoFit fano_fit(const LorentzPair& p)
{
    FanoFit f;
    double d_big, d_narrow, g_big, g_narrow;
    if (p.gamma_plus >= 10 * p.gamma_minus) {
        f.plus_dominant = true;
        d_big = p.delta_plus, g_big = p.gamma_plus;
        d_narrow = p.delta_minus, g_narrow = p.gamma_minus;
    } else if (p.gamma_minus >= 10 * p.gamma_plus) {
        f.plus_dominant = false;
        d_big = p.delta_minus, g_big = p.gamma_minus;
        d_narrow = p.delta_plus, g_narrow = p.gamma_plus;
    } else {
        std::ostringstream os;
        os << "width ratio " << std::max(p.gamma_plus, p.gamma_minus) / std::min(p.gamma_plus, p.gamma_minus)
           << " is below 10; the Fano approximation does not apply";
        throw PreconditionError(os.str());
    }
    if (!(g_narrow > 0))
        throw PreconditionError("narrow Lorentz width is zero; reduced detuning undefined");

    // 2 vartheta = arg(chi_+ / chi_-); it is pi for separate and braided
    const cplx ratio = p.chi_plus / p.chi_minus;
    const double two_theta = std::arg(ratio);
    const double chi2 = std::abs(p.chi_plus) * std::abs(p.chi_minus);
    const double s = f.plus_dominant ? 1.0 : -1.0;
    const double dd = d_big - d_narrow;
    f.q = std::cos(two_theta) * (d_narrow - d_big) / g_big + s * std::sin(two_theta);
    f.f_scale = chi2 * g_big * g_big / (dd * dd + g_big * g_big);
    f.center = d_narrow;
    f.width = g_narrow;
    return f;
}

double fano_reflectance(const FanoFit& f, double delta)
{
    const double eps = (delta - f.center) / f.width;
    return f.f_scale * (f.q + eps) * (f.q + eps) / (1 + eps * eps);
}

FanoRegime fano_regime(Topology topo, double phi, double gamma)
{
    const LorentzPair p = lorentz_decompose(topo, phi, gamma);
    // both widths at rounding level: decoupled, no lineshape at all
    if (std::max(p.gamma_plus, p.gamma_minus) < 1e-12 * gamma) return FanoRegime::None;
    // a narrow mode that is exactly dark leaves a single Lorentzian
    if (std::min(p.gamma_plus, p.gamma_minus) < 1e-12 * gamma) return FanoRegime::None;
    if (p.gamma_plus > 10 * p.gamma_minus) return FanoRegime::PlusDominant;
    if (p.gamma_minus > 10 * p.gamma_plus) return FanoRegime::MinusDominant;
    return FanoRegime::None;
}

ScatterPoint rabi_approximation(double dev, double delta, double gamma)
{
    if (!(std::abs(dev) <= 0.1))
        throw PreconditionError("vacuum-Rabi approximation needs |phi - pi/2| <= 0.1");
    ScatterPoint p;
    p.delta_a = delta;
    if (dev == 0) return p;  // decoupled: t = 1 identically
    const double x = delta + 2 * gamma * dev;
    const cplx den = I * x * (I * x - 4 * gamma * dev * dev) + gamma * gamma;
    p.t = (-x * x + gamma * gamma) / den;
    p.r = 4 * gamma * gamma * dev * dev / den;
    p.T = std::norm(p.t);
    p.R = std::norm(p.r);
    return p;
}

}  // namespace gawqed
