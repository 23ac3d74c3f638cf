#include "gawqed/run.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <iostream>

int main(int argc, char** argv)
{
    CLI::App app{"Single-photon scattering off two giant atoms in a waveguide"};
    std::string config, command, sweep, out, format;
    int jobs = 1, samples = 100;
    std::uint64_t seed = 1;
    app.add_option("--config", config, "JSON configuration file");
    app.add_option("--command", command,
                   "characteristics | spectrum | loci | fano | eit-classify | eit-spectrum | master-sweep | "
                   "inelastic-spectrum | oracle-check")
        ->required();
    app.add_option("--sweep", sweep, "VAR:START:STOP:POINTS with VAR in delta_a, phi, nu");
    app.add_option("--out", out, "output file (default stdout)");
    app.add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--samples", samples, "oracle-check sample count")->check(CLI::PositiveNumber);
    app.add_option("--seed", seed, "oracle-check RNG seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        nlohmann::json rec = {{"error", {{"kind", "schema"}, {"exit_code", 2}, {"message", e.what()}}}};
        std::cerr << rec.dump() << std::endl;
        return 2;
    }

    gawqed::RunSpec spec;
    try {
        spec.command = gawqed::command_from_string(command);
        if (!sweep.empty()) spec.sweep = gawqed::parse_sweep(sweep);
        if (const char* tol = std::getenv("GAWQED_TOL")) {
            char* end = nullptr;
            spec.tol = std::strtod(tol, &end);
            if (end == tol || *end != '\0' || !(spec.tol > 0))
                throw gawqed::SchemaError(std::string("GAWQED_TOL is not a positive number: '") + tol + "'");
        }
    } catch (const gawqed::Error& e) {
        nlohmann::json rec = {{"error", {{"kind", "schema"}, {"exit_code", 2}, {"message", e.what()}}}};
        std::cerr << rec.dump() << std::endl;
        return 2;
    }
    spec.config_path = config;
    spec.out_path = out;
    if (format == "csv") spec.format = gawqed::OutputFormat::Csv;
    if (format == "json") spec.format = gawqed::OutputFormat::Json;
    spec.jobs = jobs;
    spec.samples = samples;
    spec.seed = seed;
    return gawqed::run(spec, std::cerr);
}
