#include "gawqed/scattering.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gawqed {

namespace {

const cplx I(0, 1);

ScatterPoint finish(double delta_a, cplx t, cplx r, bool pole = false)
{
    ScatterPoint p;
    p.delta_a = delta_a;
    p.t = t;
    p.r = r;
    p.T = std::norm(t);
    p.R = std::norm(r);
    p.pole_limit = pole;
    return p;
}

}  // namespace

ScatterPoint amplitudes_general(const SystemConfig& cfg, double delta_a)
{
    return amplitudes_general(cfg, characteristics(cfg), delta_a);
}

ScatterPoint amplitudes_general(const SystemConfig& cfg, const CharQuantities& q, double delta_a)
{
    const double g2 = cfg.rate_unit * cfg.rate_unit;
    const double da = delta_a - q.lamb_a;
    const double db = detuning_b(cfg, delta_a) - q.lamb_b;
    const cplx ea = I * da - q.gamma_a / 2;
    const cplx eb = I * db - q.gamma_b / 2;
    const cplx c = q.gamma_ab / 2 + I * q.g_ab;
    const cplx ua2 = q.root_a * q.root_a, ub2 = q.root_b * q.root_b, uab = q.root_a * q.root_b;
    const double sab = std::sqrt(q.gamma_a * q.gamma_b);

    const cplx D = ea * eb - c * c;
    const cplx Nt = -da * db + 0.25 * (q.gamma_ab * q.gamma_ab - q.gamma_a * q.gamma_b) + q.g_ab * q.g_ab;
    const cplx Nr = 0.5 * q.gamma_b * ea * ub2 + 0.5 * q.gamma_a * eb * ua2 + c * sab * uab;

    if (std::abs(D) >= 1e-14 * g2)
        return finish(delta_a, Nt / D, Nr / D);

    if (std::abs(Nt) > 1e-12 * g2 || std::abs(Nr) > 1e-12 * g2) {
        std::ostringstream os;
        os.precision(17);
        os << "real-axis pole of the scattering amplitudes at delta_a=" << delta_a << " (|D|=" << std::abs(D) << ")";
        throw NumericalError(os.str());
    }
    // 0/0: all three are quadratics in delta_a, take the first non-vanishing derivative
    const cplx dD = I * eb + I * ea;
    if (std::abs(dD) > 1e-7 * cfg.rate_unit) {
        const cplx dNt = -(da + db);
        const cplx dNr = 0.5 * I * q.gamma_b * ub2 + 0.5 * I * q.gamma_a * ua2;
        return finish(delta_a, dNt / dD, dNr / dD, true);
    }
    return finish(delta_a, 1.0, 0.0, true);
}

ScatterPoint amplitudes_topology(Topology topo, double phi, double delta, double gamma)
{
    const double s1 = std::sin(phi), s2 = std::sin(2 * phi), s3 = std::sin(3 * phi);
    const double c1 = std::cos(phi), c2 = std::cos(2 * phi);
    const cplx e1 = std::polar(1.0, phi), e2 = std::polar(1.0, 2 * phi), e3 = std::polar(1.0, 3 * phi);
    const cplx iD = I * delta;
    cplx den, nt, nr;
    switch (topo) {
    case Topology::Separate: {
        const cplx x = iD - gamma * (1.0 + e1);
        const cplx y = gamma / 2 * e1 * (1.0 + e1) * (1.0 + e1);
        den = x * x - y * y;
        nt = -(delta - gamma * s1) * (delta - gamma * s1);
        const double h = std::cos(phi / 2);
        nr = 4.0 * I * e3 * gamma * h * h * (delta * c2 + gamma * (s1 + s2));
        break;
    }
    case Topology::Braided: {
        const cplx x = iD - gamma * (1.0 + e2);
        const cplx y = gamma / 2 * (3.0 * e1 + e3);
        den = x * x - y * y;
        nt = -(delta - gamma * s2) * (delta - gamma * s2) + gamma * gamma * (s2 * s2 + s1 * s1);
        nr = 4.0 * I * e3 * gamma * c1 * c1 * (delta * c1 + gamma * s1);
        break;
    }
    case Topology::Nested: {
        const cplx y = gamma * e1 * (1.0 + e1);
        den = (iD - gamma * (1.0 + e3)) * (iD - gamma * (1.0 + e1)) - y * y;
        nt = -(delta - gamma * s3) * (delta - gamma * s1) + gamma * gamma * (s1 + s2) * (s1 + s2);
        const double h = std::cos(phi / 2);
        nr = 4.0 * I * e3 * gamma * h * h * (delta * (2 - 2 * c1 + c2) - gamma * (s1 - s2));
        break;
    }
    }
    if (std::abs(den) < 1e-14 * gamma * gamma)
        return amplitudes_general(symmetric_config(topo, phi, gamma), delta);
    return finish(delta, nt / den, nr / den);
}

ScatterPoint amplitudes_topology(const SystemConfig& cfg, double delta, double phi)
{
    const Topology topo = classify_topology(cfg);
    const double gamma = cfg.atom_a.points[0].rate;
    if (!(gamma > 0))
        throw PreconditionError("symmetric closed form needs a positive common rate");
    if (std::abs(cfg.delta_ab) > 1e-12 * gamma)
        throw PreconditionError("symmetric closed form needs delta_ab = 0");
    const SystemConfig ref = symmetric_config(topo, phi, gamma);
    const double ptol = 1e-9 * std::max(1.0, std::abs(phi));
    const GiantAtom* got[2] = {&cfg.atom_a, &cfg.atom_b};
    const GiantAtom* want[2] = {&ref.atom_a, &ref.atom_b};
    for (int j = 0; j < 2; ++j)
        for (int n = 0; n < 2; ++n) {
            const auto& g = got[j]->points[n];
            const auto& w = want[j]->points[n];
            if (std::abs(g.rate - w.rate) > 1e-12 * gamma)
                throw PreconditionError("symmetric closed form needs equal bare rates");
            if (std::abs(g.phase - w.phase) > ptol)
                throw PreconditionError("coupling points are not equally spaced by phi from phase 0");
        }
    return amplitudes_topology(topo, phi, delta, gamma);
}

Loci peak_minimum_loci(Topology topo, double phi, double gamma)
{
    Loci out;
    const double s1 = std::sin(phi), s2 = std::sin(2 * phi), s3 = std::sin(3 * phi);
    const double c1 = std::cos(phi), c2 = std::cos(2 * phi), c3 = std::cos(3 * phi);
    const bool decoupled =
        topo == Topology::Braided ? std::abs(c1) < 1e-8 : std::abs(std::cos(phi / 2)) < 1e-8;
    if (decoupled) return out;
    const bool degenerate = std::abs(s1) < 1e-9;

    auto pair = [&](double centre, double rad) {
        if (rad < 1e-12 * gamma)
            out.peaks = {centre};
        else
            out.peaks = {centre - rad, centre + rad};
    };
    switch (topo) {
    case Topology::Separate:
        out.peaks = {gamma * s1};
        if (!degenerate && std::abs(c2) > 1e-12) out.minimum = -gamma * (s1 + s2) / c2;
        break;
    case Topology::Braided:
        pair(gamma * s2, gamma * std::sqrt(std::max(0.0, 1 - c1 * c3)));
        if (!degenerate) out.minimum = -gamma * std::tan(phi);
        break;
    case Topology::Nested:
        pair(0.5 * gamma * (s3 + s1), gamma * std::sqrt((s1 + s2) * (s1 + s2) + 0.25 * (s3 - s1) * (s3 - s1)));
        if (!degenerate) out.minimum = gamma * (s1 - s2) / (2 - 2 * c1 + c2);
        break;
    }
    return out;
}

RealSpaceSolution solve_real_space(const SystemConfig& cfg, double delta_a)
{
    validate(cfg);
    using Mat = Eigen::Matrix<cplx, 10, 10>;
    using Vec = Eigen::Matrix<cplx, 10, 1>;
    Mat A = Mat::Zero();
    Vec b = Vec::Zero();

    // unknowns: t_1..t_4 -> 0..3, r_1..r_4 -> 4..7, f_a -> 8, f_b -> 9.
    // t_0 = 1 (incident), r_5 = 0 (nothing enters from the right).
    auto T = [](int k) { return k - 1; };
    auto R = [](int k) { return 3 + k; };
    const auto pts = sorted_points(cfg);
    const double det[2] = {delta_a, detuning_b(cfg, delta_a)};

    for (int m = 1; m <= 4; ++m) {
        const auto& lp = pts[m - 1];
        const int fj = lp.atom == AtomLabel::a ? 8 : 9;
        const cplx e = std::polar(1.0, lp.point.phase);
        const cplx ec = std::conj(e);
        const double V = std::sqrt(lp.point.rate / 2);

        // jump of the right-moving field
        const int rt = 2 * (m - 1);
        A(rt, T(m)) += -I * e;
        if (m > 1)
            A(rt, T(m - 1)) += I * e;
        else
            b(rt) -= I * e;
        A(rt, fj) += V;

        // jump of the left-moving field
        const int rr = rt + 1;
        if (m < 4) A(rr, R(m + 1)) += I * ec;
        A(rr, R(m)) += -I * ec;
        A(rr, fj) += V;

        // atom equation; the field at the point is the mean of both one-sided limits
        if (m > 1)
            A(fj, T(m - 1)) += V * e / 2.0;
        else
            b(fj) -= V * e / 2.0;
        A(fj, T(m)) += V * e / 2.0;
        A(fj, R(m)) += V * ec / 2.0;
        if (m < 4) A(fj, R(m + 1)) += V * ec / 2.0;
    }
    A(8, 8) += -det[0];
    A(9, 9) += -det[1];

    Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double cut = 1e-12 * sv(0);
    svd.setThreshold(1e-12);
    Vec x = svd.solve(b);
    if (sv(9) <= cut) {
        // A resonant dark mode (trapped between legs, or inside coincident points) leaves
        // the inner fields free but must not reach the outgoing t and r.
        for (int k = 0; k < 10; ++k) {
            if (sv(k) > cut) continue;
            const auto v = svd.matrixV().col(k);
            if (std::max(std::abs(v(T(4))), std::abs(v(R(1)))) > 1e-8)
                throw NumericalError("real-space system is singular in the outgoing amplitudes");
        }
        if ((A * x - b).norm() > 1e-9 * std::max(1.0, b.norm()))
            throw NumericalError("real-space system is singular and inconsistent");
    }

    RealSpaceSolution s;
    for (int k = 0; k < 3; ++k) {
        s.segment_t[k] = x(T(k + 1));
        s.segment_r[k] = x(R(k + 2));
    }
    s.t = x(T(4));
    s.r = x(R(1));
    s.f_a = x(8);
    s.f_b = x(9);
    return s;
}

}  // namespace gawqed
