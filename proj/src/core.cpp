#include "gawqed/core.hpp"

#include <algorithm>
#include <cmath>

namespace gawqed {

std::string to_string(Topology t)
{
    switch (t) {
    case Topology::Separate: return "separate";
    case Topology::Braided: return "braided";
    case Topology::Nested: return "nested";
    }
    return "?";
}

Topology topology_from_string(const std::string& s)
{
    std::string l = s;
    std::transform(l.begin(), l.end(), l.begin(), [](unsigned char c) { return std::tolower(c); });
    if (l == "separate") return Topology::Separate;
    if (l == "braided") return Topology::Braided;
    if (l == "nested") return Topology::Nested;
    throw PreconditionError("unknown topology '" + s + "'");
}

void validate(const SystemConfig& cfg)
{
    if (!std::isfinite(cfg.rate_unit) || cfg.rate_unit <= 0)
        throw PreconditionError("rate_unit must be finite and > 0");
    if (!std::isfinite(cfg.delta_ab))
        throw PreconditionError("delta_ab must be finite");
    for (const GiantAtom* atom : {&cfg.atom_a, &cfg.atom_b}) {
        const char* name = atom == &cfg.atom_a ? "a" : "b";
        for (const auto& p : atom->points) {
            if (!std::isfinite(p.phase))
                throw PreconditionError(std::string("atom ") + name + ": phase must be finite");
            if (!std::isfinite(p.rate) || p.rate < 0)
                throw PreconditionError(std::string("atom ") + name + ": rate must be finite and >= 0");
        }
        if (atom->points[0].phase > atom->points[1].phase)
            throw PreconditionError(std::string("atom ") + name + ": left point lies right of right point");
    }
}

Topology classify_topology(const SystemConfig& cfg)
{
    validate(cfg);
    const double a1 = cfg.atom_a.points[0].phase, a2 = cfg.atom_a.points[1].phase;
    const double b1 = cfg.atom_b.points[0].phase, b2 = cfg.atom_b.points[1].phase;
    if (b1 < a1)
        throw PreconditionError("atom b owns the leftmost coupling point; relabel so that a is leftmost");
    if (b2 <= a2) return Topology::Nested;
    if (a2 <= b1) return Topology::Separate;
    return Topology::Braided;
}

CharQuantities characteristics(const SystemConfig& cfg)
{
    validate(cfg);
    CharQuantities q;
    const auto& pa = cfg.atom_a.points;
    const auto& pb = cfg.atom_b.points;

    auto self = [](const std::array<CouplingPoint, 2>& p, double& lamb, double& gamma, double& alpha, cplx& root) {
        const double s12 = std::sqrt(p[0].rate * p[1].rate);
        const double d = p[1].phase - p[0].phase;
        lamb = s12 * std::sin(std::abs(d));
        gamma = p[0].rate + p[1].rate + 2 * s12 * std::cos(d);
        double ys = 0, xs = 0;
        for (int n = 0; n < 2; ++n)
            for (int m = 0; m < 2; ++m) {
                const double w = std::sqrt(p[n].rate * p[m].rate);
                ys += w * std::sin(p[n].phase + p[m].phase);
                xs += w * std::cos(p[n].phase + p[m].phase);
            }
        alpha = std::atan2(ys, xs);
        cplx s = std::sqrt(p[0].rate) * std::polar(1.0, p[0].phase) + std::sqrt(p[1].rate) * std::polar(1.0, p[1].phase);
        // a dark atom (s = 0) leaves root multiplied by zero everywhere
        root = std::abs(s) > 0 ? s / std::abs(s) : std::polar(1.0, alpha / 2);
    };
    self(pa, q.lamb_a, q.gamma_a, q.alpha_a, q.root_a);
    self(pb, q.lamb_b, q.gamma_b, q.alpha_b, q.root_b);
    // rounding can leave -1e-17 at exact cancellations
    q.gamma_a = std::max(q.gamma_a, 0.0);
    q.gamma_b = std::max(q.gamma_b, 0.0);

    for (int n = 0; n < 2; ++n)
        for (int m = 0; m < 2; ++m) {
            const double w = std::sqrt(pa[m].rate * pb[n].rate);
            const double d = pb[n].phase - pa[m].phase;
            q.g_ab += 0.5 * w * std::sin(std::abs(d));
            q.gamma_ab += w * std::cos(d);
        }
    return q;
}

std::array<LabeledPoint, 4> sorted_points(const SystemConfig& cfg)
{
    std::array<LabeledPoint, 4> pts{{
        {AtomLabel::a, 0, cfg.atom_a.points[0]},
        {AtomLabel::a, 1, cfg.atom_a.points[1]},
        {AtomLabel::b, 0, cfg.atom_b.points[0]},
        {AtomLabel::b, 1, cfg.atom_b.points[1]},
    }};
    std::stable_sort(pts.begin(), pts.end(),
                     [](const LabeledPoint& x, const LabeledPoint& y) { return x.point.phase < y.point.phase; });
    return pts;
}

std::array<cplx, 2> drive_couplings(const SystemConfig& cfg)
{
    const double ref = cfg.atom_a.points[0].phase;
    std::array<cplx, 2> om{};
    const GiantAtom* atoms[2] = {&cfg.atom_a, &cfg.atom_b};
    for (int j = 0; j < 2; ++j)
        for (const auto& p : atoms[j]->points) om[j] += std::sqrt(2 * p.rate) * std::polar(1.0, p.phase - ref);
    return om;
}

SystemConfig symmetric_config(Topology topo, double phi, double gamma)
{
    if (!std::isfinite(phi) || !std::isfinite(gamma) || gamma <= 0)
        throw PreconditionError("symmetric geometry needs finite phi and gamma > 0");
    SystemConfig cfg;
    cfg.rate_unit = gamma;
    auto set = [&](GiantAtom& atom, int l, int r) {
        atom.points[0] = {l * phi, gamma};
        atom.points[1] = {r * phi, gamma};
    };
    switch (topo) {
    case Topology::Separate: set(cfg.atom_a, 0, 1); set(cfg.atom_b, 2, 3); break;
    case Topology::Braided: set(cfg.atom_a, 0, 2); set(cfg.atom_b, 1, 3); break;
    case Topology::Nested: set(cfg.atom_a, 0, 3); set(cfg.atom_b, 1, 2); break;
    }
    return cfg;
}

}  // namespace gawqed
