#include "gawqed/run.hpp"

#include "gawqed/eit.hpp"
#include "gawqed/fano.hpp"
#include "gawqed/lindblad.hpp"
#include "gawqed/scattering.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>
#include <variant>

namespace gawqed {

namespace {

using Cell = std::variant<std::monostate, double, std::string, bool>;
using Row = std::vector<Cell>;

struct Table {
    std::vector<std::string> columns;
    std::vector<Row> rows;
    bool record = false;  // single verdict: JSON object rather than column/row arrays
};

std::string fmt(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

Cell opt(const std::optional<double>& x)
{
    return x ? Cell(*x) : Cell();
}

std::string cell_csv(const Cell& c)
{
    if (std::holds_alternative<double>(c)) {
        const double x = std::get<double>(c);
        return std::isnan(x) ? "" : fmt(x);
    }
    if (std::holds_alternative<bool>(c)) return std::get<bool>(c) ? "true" : "false";
    if (std::holds_alternative<std::string>(c)) {
        const std::string& s = std::get<std::string>(c);
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
        return q + "\"";
    }
    return "";
}

std::string cell_json(const Cell& c)
{
    if (std::holds_alternative<double>(c)) {
        const double x = std::get<double>(c);
        return std::isfinite(x) ? fmt(x) : "null";
    }
    if (std::holds_alternative<bool>(c)) return std::get<bool>(c) ? "true" : "false";
    if (std::holds_alternative<std::string>(c)) return nlohmann::json(std::get<std::string>(c)).dump();
    return "null";
}

std::string write_csv(const Table& t)
{
    std::string out;
    for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
    out += "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + cell_csv(row[i]);
        out += "\n";
    }
    return out;
}

std::string write_json(const Table& t, Command cmd)
{
    std::string out;
    if (t.record && t.rows.size() == 1) {
        out = "{";
        for (std::size_t i = 0; i < t.columns.size(); ++i)
            out += (i ? ", " : "") + nlohmann::json(t.columns[i]).dump() + ": " + cell_json(t.rows[0][i]);
        return out + "}\n";
    }
    out = "{\"command\": " + nlohmann::json(to_string(cmd)).dump() + ",\n \"columns\": [";
    for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? ", " : "") + nlohmann::json(t.columns[i]).dump();
    out += "],\n \"rows\": [";
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        out += r ? ",\n  [" : "\n  [";
        for (std::size_t i = 0; i < t.rows[r].size(); ++i) out += (i ? ", " : "") + cell_json(t.rows[r][i]);
        out += "]";
    }
    return out + "\n ]}\n";
}

const ConfigFile& need(const ConfigFile* cfg, Command c)
{
    if (!cfg) throw SchemaError("command '" + to_string(c) + "' needs --config");
    return *cfg;
}

const SymmetricShortcut& need_shortcut(const ConfigFile& cfg, Command c)
{
    if (!cfg.symmetric) throw SchemaError("command '" + to_string(c) + "' needs the 'symmetric' shortcut in the config");
    return *cfg.symmetric;
}

// Grid for commands that take either variable; phi re-expands the shortcut per point.
struct Grid {
    std::string variable;
    std::vector<double> x;
};

Grid grid_for(const RunSpec& spec, const ConfigFile& cfg, const std::vector<std::string>& allowed,
              const std::string& fallback)
{
    Grid g;
    if (spec.sweep) {
        g.variable = spec.sweep->variable;
        g.x = linspace(spec.sweep->start, spec.sweep->stop, spec.sweep->points);
    } else if (fallback == "phi") {
        g.variable = "phi";
        g.x = {need_shortcut(cfg, spec.command).phi};
    } else {
        g.variable = fallback;
        g.x = linspace(-6, 6, 2001);
    }
    bool ok = false;
    for (const auto& a : allowed) ok = ok || a == g.variable;
    if (!ok) throw SchemaError("sweep variable '" + g.variable + "' is not valid for '" + to_string(spec.command) + "'");
    if (g.variable == "phi") need_shortcut(cfg, spec.command);
    return g;
}

ConfigFile at_phi(const ConfigFile& cfg, double phi)
{
    ConfigFile c = cfg;
    c.symmetric->phi = phi;
    const SystemConfig e = expand_symmetric(*c.symmetric, cfg.system.delta_ab);
    c.system.atom_a = e.atom_a;
    c.system.atom_b = e.atom_b;
    return c;
}

template <class F>
std::vector<Row> sweep_rows(const RunSpec& spec, std::size_t n, F fn)
{
    std::vector<Row> rows(n);
    parallel_for(n, spec.jobs, [&](std::size_t i) { rows[i] = fn(i); });
    return rows;
}

Row amp_cells(const ScatterPoint& p)
{
    return {p.t.real(), p.t.imag(), p.r.real(), p.r.imag(), p.T, p.R};
}

Table cmd_characteristics(const RunSpec& spec, const ConfigFile& cfg)
{
    Table t;
    t.columns = {"topology", "lamb_a", "lamb_b", "gamma_a", "gamma_b", "g_ab", "gamma_ab", "alpha_a", "alpha_b"};
    auto one = [](const ConfigFile& c) -> Row {
        const CharQuantities q = characteristics(c.system);
        return {to_string(classify_topology(c.system)), q.lamb_a, q.lamb_b, q.gamma_a, q.gamma_b,
                q.g_ab, q.gamma_ab, q.alpha_a, q.alpha_b};
    };
    if (!spec.sweep) {
        t.rows = {one(cfg)};
        t.record = true;
        return t;
    }
    const Grid g = grid_for(spec, cfg, {"phi"}, "phi");
    t.columns.insert(t.columns.begin(), "phi");
    t.rows = sweep_rows(spec, g.x.size(), [&](std::size_t i) {
        Row r = one(at_phi(cfg, g.x[i]));
        r.insert(r.begin(), g.x[i]);
        return r;
    });
    return t;
}

Table cmd_spectrum(const RunSpec& spec, const ConfigFile& cfg)
{
    const Grid g = grid_for(spec, cfg, {"delta_a", "phi"}, "delta_a");
    Table t;
    if (g.variable == "delta_a") {
        t.columns = {"delta_a", "re_t", "im_t", "re_r", "im_r", "T", "R"};
        const CharQuantities q = characteristics(cfg.system);
        t.rows = sweep_rows(spec, g.x.size(), [&](std::size_t i) {
            Row r = amp_cells(amplitudes_general(cfg.system, q, g.x[i]));
            r.insert(r.begin(), g.x[i]);
            return r;
        });
    } else {
        const double da = cfg.drive ? cfg.drive->detuning : 0.0;
        t.columns = {"phi", "delta_a", "re_t", "im_t", "re_r", "im_r", "T", "R"};
        t.rows = sweep_rows(spec, g.x.size(), [&](std::size_t i) {
            Row r = amp_cells(amplitudes_general(at_phi(cfg, g.x[i]).system, da));
            r.insert(r.begin(), {g.x[i], da});
            return r;
        });
    }
    return t;
}

Table cmd_loci(const RunSpec& spec, const ConfigFile& cfg)
{
    const SymmetricShortcut& s = need_shortcut(cfg, spec.command);
    const Grid g = grid_for(spec, cfg, {"phi"}, "phi");
    Table t;
    t.columns = {"phi", "peak_1", "peak_2", "minimum"};
    t.rows = sweep_rows(spec, g.x.size(), [&](std::size_t i) -> Row {
        const Loci l = peak_minimum_loci(s.topology, g.x[i], s.gamma);
        Row r{g.x[i], Cell(), Cell(), opt(l.minimum)};
        for (std::size_t k = 0; k < l.peaks.size() && k < 2; ++k) r[1 + k] = l.peaks[k];
        return r;
    });
    return t;
}

Table cmd_fano(const RunSpec& spec, const ConfigFile& cfg)
{
    const SymmetricShortcut& s = need_shortcut(cfg, spec.command);
    const Grid g = grid_for(spec, cfg, {"phi"}, "phi");
    Table t;
    t.columns = {"phi",          "regime",      "delta_plus",   "delta_minus", "gamma_plus",
                 "gamma_minus",  "re_chi_plus", "im_chi_plus",  "re_chi_minus", "im_chi_minus",
                 "q",            "f_scale",     "center",       "width"};
    t.rows = sweep_rows(spec, g.x.size(), [&](std::size_t i) -> Row {
        const double phi = g.x[i];
        const LorentzPair p = lorentz_decompose(s.topology, phi, s.gamma);
        const FanoRegime reg = fano_regime(s.topology, phi, s.gamma);
        Row r{phi,
              to_string(reg),
              p.delta_plus,
              p.delta_minus,
              p.gamma_plus,
              p.gamma_minus,
              p.chi_plus.real(),
              p.chi_plus.imag(),
              p.chi_minus.real(),
              p.chi_minus.imag(),
              Cell(),
              Cell(),
              Cell(),
              Cell()};
        if (reg != FanoRegime::None) {
            const FanoFit f = fano_fit(p);
            r[10] = f.q;
            r[11] = f.f_scale;
            r[12] = f.center;
            r[13] = f.width;
        }
        return r;
    });
    return t;
}

Row verdict_row(const EitVerdict& v)
{
    return {to_string(v.scheme),  to_string(v.dark_state), to_string(v.regime), v.control_strength,
            v.bright_width,       opt(v.transparency_delta_a), v.note};
}

Table cmd_eit_classify(const RunSpec& spec, const ConfigFile& cfg)
{
    Table t;
    t.columns = {"scheme", "dark_state", "regime", "control_strength", "bright_width", "transparency_delta_a", "note"};
    if (!spec.sweep) {
        t.rows = {verdict_row(classify_eit(cfg.system))};
        t.record = true;
        return t;
    }
    const Grid g = grid_for(spec, cfg, {"phi"}, "phi");
    t.columns.insert(t.columns.begin(), "phi");
    t.rows = sweep_rows(spec, g.x.size(), [&](std::size_t i) {
        Row r = verdict_row(classify_eit(at_phi(cfg, g.x[i]).system));
        r.insert(r.begin(), g.x[i]);
        return r;
    });
    return t;
}

Table cmd_eit_spectrum(const RunSpec& spec, const ConfigFile& cfg)
{
    const Grid g = grid_for(spec, cfg, {"delta_a"}, "delta_a");
    const EitVerdict v = classify_eit(cfg.system);
    if (v.scheme == EitScheme::None)
        throw PreconditionError("no EIT scheme applies to this configuration (see eit-classify)");
    const double tol = zero_tol(cfg.system);
    Table t;
    t.columns = {"delta_a", "re_t", "im_t", "re_r", "im_r", "T", "R"};
    t.rows = sweep_rows(spec, g.x.size(), [&](std::size_t i) {
        const double da = g.x[i];
        ScatterPoint p;
        if (v.scheme == EitScheme::CollectiveSA)
            p = collective_eit_amplitudes(sa_basis(cfg.system, da),
                                          v.dark_state == DarkState::S ? DarkMode::S : DarkMode::A, tol);
        else
            p = single_atom_eit_amplitudes(cfg.system, da);
        Row r = amp_cells(p);
        r.insert(r.begin(), da);
        return r;
    });
    return t;
}

DriveSpec drive_or_default(const ConfigFile& cfg)
{
    if (cfg.drive) return *cfg.drive;
    DriveSpec d;
    d.amplitude_sq = 0.04;
    return d;
}

Table cmd_master_sweep(const RunSpec& spec, const ConfigFile& cfg)
{
    const Grid g = grid_for(spec, cfg, {"delta_a"}, "delta_a");
    const DriveSpec base = drive_or_default(cfg);
    Table t;
    t.columns = {"delta_a", "T", "R", "F", "residual"};
    t.rows = sweep_rows(spec, g.x.size(), [&](std::size_t i) -> Row {
        DriveSpec d = base;
        d.detuning = g.x[i];
        const LindbladResult res = scattering_from_master(cfg.system, d);
        return {g.x[i], res.T, res.R, res.inelastic_flux, res.conservation_residual};
    });
    return t;
}

Table cmd_inelastic(const RunSpec& spec, const ConfigFile& cfg)
{
    const Grid g = grid_for(spec, cfg, {"nu"}, "nu");
    const DriveSpec d = drive_or_default(cfg);
    Table t;
    t.columns = {"nu", "S_t", "S_r"};
    t.rows = sweep_rows(spec, g.x.size(), [&](std::size_t i) -> Row {
        const InelasticSpectrum s = inelastic_spectrum(cfg.system, d, {g.x[i]});
        return {g.x[i], s.transmitted[0], s.reflected[0]};
    });
    return t;
}

Table cmd_oracle(const RunSpec& spec)
{
    if (spec.samples < 1) throw SchemaError("--samples must be >= 1");
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> det(-6, 6);
    std::vector<SystemConfig> cfgs;
    std::vector<double> dets;
    for (int i = 0; i < spec.samples; ++i) {
        cfgs.push_back(random_config(rng));
        dets.push_back(det(rng));
    }
    std::vector<double> dt(cfgs.size()), dr(cfgs.size());
    parallel_for(cfgs.size(), spec.jobs, [&](std::size_t i) {
        const ScatterPoint a = amplitudes_general(cfgs[i], dets[i]);
        const RealSpaceSolution o = solve_real_space(cfgs[i], dets[i]);
        dt[i] = std::abs(a.t - o.t);
        dr[i] = std::abs(a.r - o.r);
    });
    double mt = 0, mr = 0;
    for (std::size_t i = 0; i < cfgs.size(); ++i) {
        mt = std::max(mt, dt[i]);
        mr = std::max(mr, dr[i]);
    }
    Table t;
    t.record = true;
    t.columns = {"samples", "seed", "tolerance", "max_dev_t", "max_dev_r", "pass"};
    const bool pass = mt < spec.tol && mr < spec.tol;
    t.rows = {{double(spec.samples), double(spec.seed), spec.tol, mt, mr, pass}};
    return t;
}

bool is_record_command(Command c)
{
    return c == Command::Characteristics || c == Command::EitClassify || c == Command::OracleCheck;
}

}  // namespace

Command command_from_string(const std::string& s)
{
    static const std::pair<const char*, Command> names[] = {
        {"characteristics", Command::Characteristics},
        {"spectrum", Command::Spectrum},
        {"loci", Command::Loci},
        {"fano", Command::Fano},
        {"eit-classify", Command::EitClassify},
        {"eit-spectrum", Command::EitSpectrum},
        {"master-sweep", Command::MasterSweep},
        {"inelastic-spectrum", Command::InelasticSpectrum},
        {"oracle-check", Command::OracleCheck},
    };
    for (const auto& [n, c] : names)
        if (s == n) return c;
    throw SchemaError("unknown command '" + s + "'");
}

std::string to_string(Command c)
{
    switch (c) {
    case Command::Characteristics: return "characteristics";
    case Command::Spectrum: return "spectrum";
    case Command::Loci: return "loci";
    case Command::Fano: return "fano";
    case Command::EitClassify: return "eit-classify";
    case Command::EitSpectrum: return "eit-spectrum";
    case Command::MasterSweep: return "master-sweep";
    case Command::InelasticSpectrum: return "inelastic-spectrum";
    case Command::OracleCheck: return "oracle-check";
    }
    return "?";
}

SweepSpec parse_sweep(const std::string& s)
{
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() != 4) throw SchemaError("--sweep expects VAR:START:STOP:POINTS, got '" + s + "'");
    SweepSpec sw;
    sw.variable = parts[0];
    if (sw.variable != "delta_a" && sw.variable != "phi" && sw.variable != "nu")
        throw SchemaError("--sweep variable must be delta_a, phi or nu");
    try {
        std::size_t used = 0;
        sw.start = std::stod(parts[1], &used);
        if (used != parts[1].size()) throw std::invalid_argument("start");
        sw.stop = std::stod(parts[2], &used);
        if (used != parts[2].size()) throw std::invalid_argument("stop");
        sw.points = std::stoi(parts[3], &used);
        if (used != parts[3].size()) throw std::invalid_argument("points");
    } catch (const std::exception&) {
        throw SchemaError("--sweep has a malformed number in '" + s + "'");
    }
    if (sw.points < 2) throw SchemaError("--sweep needs at least 2 points");
    if (!(sw.start < sw.stop)) throw SchemaError("--sweep needs START < STOP");
    return sw;
}

std::vector<double> linspace(double start, double stop, int points)
{
    std::vector<double> x(points);
    for (int i = 0; i < points; ++i) x[i] = start + (stop - start) * i / (points - 1);
    if (points > 1) x.back() = stop;
    return x;
}

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn)
{
    if (jobs <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < n;) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    const std::size_t nt = std::min<std::size_t>(jobs, n);
    for (std::size_t k = 0; k < nt; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

SystemConfig random_config(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> phase(0, 4 * pi), rate(0.2, 2.0), dab(-3, 3);
    std::uniform_int_distribution<int> topo(0, 2);
    std::array<double, 4> p;
    for (auto& x : p) x = phase(rng);
    std::sort(p.begin(), p.end());
    SystemConfig cfg;
    cfg.delta_ab = dab(rng);
    int ia[2], ib[2];
    switch (topo(rng)) {
    case 0: ia[0] = 0, ia[1] = 1, ib[0] = 2, ib[1] = 3; break;
    case 1: ia[0] = 0, ia[1] = 2, ib[0] = 1, ib[1] = 3; break;
    default: ia[0] = 0, ia[1] = 3, ib[0] = 1, ib[1] = 2; break;
    }
    for (int n = 0; n < 2; ++n) {
        cfg.atom_a.points[n] = {p[ia[n]], rate(rng)};
        cfg.atom_b.points[n] = {p[ib[n]], rate(rng)};
    }
    return cfg;
}

std::string run_to_string(const RunSpec& spec, const ConfigFile* cfg)
{
    Table t;
    switch (spec.command) {
    case Command::Characteristics: t = cmd_characteristics(spec, need(cfg, spec.command)); break;
    case Command::Spectrum: t = cmd_spectrum(spec, need(cfg, spec.command)); break;
    case Command::Loci: t = cmd_loci(spec, need(cfg, spec.command)); break;
    case Command::Fano: t = cmd_fano(spec, need(cfg, spec.command)); break;
    case Command::EitClassify: t = cmd_eit_classify(spec, need(cfg, spec.command)); break;
    case Command::EitSpectrum: t = cmd_eit_spectrum(spec, need(cfg, spec.command)); break;
    case Command::MasterSweep: t = cmd_master_sweep(spec, need(cfg, spec.command)); break;
    case Command::InelasticSpectrum: t = cmd_inelastic(spec, need(cfg, spec.command)); break;
    case Command::OracleCheck: t = cmd_oracle(spec); break;
    }
    const OutputFormat f = spec.format.value_or(is_record_command(spec.command) ? OutputFormat::Json : OutputFormat::Csv);
    std::string text = f == OutputFormat::Csv ? write_csv(t) : write_json(t, spec.command);
    if (spec.command == Command::OracleCheck && !std::get<bool>(t.rows[0][5])) {
        std::ostringstream os;
        os << "oracle deviation exceeds tolerance " << fmt(spec.tol) << ":\n" << text;
        throw NumericalError(os.str());
    }
    return text;
}

int run(const RunSpec& spec, std::ostream& err)
{
    auto fail = [&](const char* kind, int code, const std::string& msg) {
        nlohmann::json rec = {{"error", {{"kind", kind}, {"exit_code", code}, {"message", msg}}}};
        err << rec.dump() << std::endl;
        return code;
    };
    try {
        std::optional<ConfigFile> cfg;
        if (!spec.config_path.empty()) cfg = load_config(spec.config_path);
        else if (spec.command != Command::OracleCheck) throw SchemaError("--config is required for '" + to_string(spec.command) + "'");
        const std::string text = run_to_string(spec, cfg ? &*cfg : nullptr);
        if (spec.out_path.empty() || spec.out_path == "-") {
            std::cout << text << std::flush;
        } else {
            std::ofstream out(spec.out_path, std::ios::binary);
            if (!out) throw IoError("cannot open output file '" + spec.out_path + "'");
            out << text;
            out.close();
            if (!out) throw IoError("write failed for '" + spec.out_path + "'");
        }
        return 0;
    } catch (const SchemaError& e) {
        return fail("schema", 2, e.what());
    } catch (const IoError& e) {
        return fail("io", 4, e.what());
    } catch (const PreconditionError& e) {
        return fail("precondition", 3, e.what());
    } catch (const std::exception& e) {
        return fail("numerical", 3, e.what());
    }
}

}  // namespace gawqed
