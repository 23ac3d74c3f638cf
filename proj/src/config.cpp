#include "gawqed/config.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace gawqed {

using nlohmann::json;

namespace {

void only_keys(const json& j, const std::set<std::string>& allowed, const std::string& where)
{
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key())) throw SchemaError(where + ": unknown key '" + it.key() + "'");
}

double number(const json& j, const char* key, const std::string& where)
{
    if (!j.contains(key)) throw SchemaError(where + ": missing '" + key + "'");
    const json& v = j.at(key);
    if (!v.is_number()) throw SchemaError(where + "." + key + ": expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw SchemaError(where + "." + key + ": not finite");
    return x;
}

GiantAtom parse_atom(const json& j, AtomLabel label, const std::string& where)
{
    if (!j.is_object()) throw SchemaError(where + ": expected an object");
    only_keys(j, {"points"}, where);
    if (!j.contains("points") || !j["points"].is_array() || j["points"].size() != 2)
        throw SchemaError(where + ".points: expected exactly two coupling points");
    GiantAtom atom;
    atom.label = label;
    for (int n = 0; n < 2; ++n) {
        const json& p = j["points"][n];
        const std::string w = where + ".points[" + std::to_string(n) + "]";
        if (!p.is_object()) throw SchemaError(w + ": expected an object");
        only_keys(p, {"phase", "rate"}, w);
        atom.points[n] = {number(p, "phase", w), number(p, "rate", w)};
    }
    return atom;
}

bool same_geometry(const SystemConfig& x, const SystemConfig& y)
{
    const GiantAtom* gx[2] = {&x.atom_a, &x.atom_b};
    const GiantAtom* gy[2] = {&y.atom_a, &y.atom_b};
    for (int j = 0; j < 2; ++j)
        for (int n = 0; n < 2; ++n) {
            const auto& p = gx[j]->points[n];
            const auto& q = gy[j]->points[n];
            if (std::abs(p.phase - q.phase) > 1e-12 * std::max(1.0, std::abs(q.phase))) return false;
            if (std::abs(p.rate - q.rate) > 1e-12 * std::max(1.0, q.rate)) return false;
        }
    return true;
}

json atom_json(const GiantAtom& a)
{
    json pts = json::array();
    for (const auto& p : a.points) pts.push_back({{"phase", p.phase}, {"rate", p.rate}});
    return {{"points", pts}};
}

}  // namespace

SystemConfig expand_symmetric(const SymmetricShortcut& s, double delta_ab)
{
    SystemConfig cfg = symmetric_config(s.topology, s.phi, s.gamma);
    cfg.delta_ab = delta_ab;
    return cfg;
}

ConfigFile parse_config(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw SchemaError("config: expected a JSON object");
    only_keys(j, {"atoms", "delta_ab", "rate_unit", "drive", "symmetric"}, "config");

    ConfigFile out;
    out.system.delta_ab = j.contains("delta_ab") ? number(j, "delta_ab", "config") : 0.0;
    if (j.contains("rate_unit")) {
        out.system.rate_unit = number(j, "rate_unit", "config");
        if (out.system.rate_unit <= 0) throw SchemaError("config.rate_unit: must be > 0");
    }

    if (j.contains("symmetric")) {
        const json& s = j["symmetric"];
        if (!s.is_object()) throw SchemaError("symmetric: expected an object");
        only_keys(s, {"topology", "phi", "gamma"}, "symmetric");
        if (!s.contains("topology") || !s["topology"].is_string())
            throw SchemaError("symmetric.topology: expected one of separate, braided, nested");
        SymmetricShortcut sc;
        try {
            sc.topology = topology_from_string(s["topology"].get<std::string>());
        } catch (const PreconditionError& e) {
            throw SchemaError(std::string("symmetric.topology: ") + e.what());
        }
        sc.phi = number(s, "phi", "symmetric");
        sc.gamma = s.contains("gamma") ? number(s, "gamma", "symmetric") : 1.0;
        if (sc.gamma <= 0) throw SchemaError("symmetric.gamma: must be > 0");
        if (sc.phi < 0) throw SchemaError("symmetric.phi: must be >= 0");
        out.symmetric = sc;
    }

    if (j.contains("atoms")) {
        const json& a = j["atoms"];
        if (!a.is_array() || a.size() != 2) throw SchemaError("atoms: expected exactly two atoms");
        SystemConfig explicit_cfg = out.system;
        explicit_cfg.atom_a = parse_atom(a[0], AtomLabel::a, "atoms[0]");
        explicit_cfg.atom_b = parse_atom(a[1], AtomLabel::b, "atoms[1]");
        if (out.symmetric) {
            const SystemConfig e = expand_symmetric(*out.symmetric, out.system.delta_ab);
            if (!same_geometry(explicit_cfg, e))
                throw SchemaError("atoms disagree with the symmetric shortcut");
        }
        out.system.atom_a = explicit_cfg.atom_a;
        out.system.atom_b = explicit_cfg.atom_b;
    } else if (!out.symmetric) {
        throw SchemaError("config: needs 'atoms' or 'symmetric'");
    }
    if (out.symmetric) {
        const SystemConfig e = expand_symmetric(*out.symmetric, out.system.delta_ab);
        out.system.atom_a = e.atom_a;
        out.system.atom_b = e.atom_b;
        if (!j.contains("rate_unit")) out.system.rate_unit = out.symmetric->gamma;
    }

    if (j.contains("drive")) {
        const json& d = j["drive"];
        if (!d.is_object()) throw SchemaError("drive: expected an object");
        only_keys(d, {"alpha_sq", "detuning"}, "drive");
        DriveSpec ds;
        ds.amplitude_sq = number(d, "alpha_sq", "drive");
        ds.detuning = d.contains("detuning") ? number(d, "detuning", "drive") : 0.0;
        if (ds.amplitude_sq < 0) throw SchemaError("drive.alpha_sq: must be >= 0");
        out.drive = ds;
    }

    try {
        classify_topology(out.system);
    } catch (const PreconditionError& e) {
        throw SchemaError(std::string("config: ") + e.what());
    }
    return out;
}

ConfigFile load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("cannot read config file '" + path + "'");
    return parse_config(ss.str());
}

std::string dump_config(const ConfigFile& cfg)
{
    json j;
    j["atoms"] = json::array({atom_json(cfg.system.atom_a), atom_json(cfg.system.atom_b)});
    j["delta_ab"] = cfg.system.delta_ab;
    j["rate_unit"] = cfg.system.rate_unit;
    if (cfg.drive) j["drive"] = {{"alpha_sq", cfg.drive->amplitude_sq}, {"detuning", cfg.drive->detuning}};
    if (cfg.symmetric)
        j["symmetric"] = {{"topology", to_string(cfg.symmetric->topology)},
                          {"phi", cfg.symmetric->phi},
                          {"gamma", cfg.symmetric->gamma}};
    return j.dump(2) + "\n";
}

void save_config(const ConfigFile& cfg, const std::string& path)
{
    std::ofstream out(path);
    if (!out) throw IoError("cannot write config file '" + path + "'");
    out << dump_config(cfg);
    if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace gawqed
