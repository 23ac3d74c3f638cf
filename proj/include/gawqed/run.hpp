#pragma once

#include "gawqed/config.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

namespace gawqed {

enum class Command {
    Characteristics,
    Spectrum,
    Loci,
    Fano,
    EitClassify,
    EitSpectrum,
    MasterSweep,
    InelasticSpectrum,
    OracleCheck,
};

enum class OutputFormat { Csv, Json };

struct SweepSpec {
    std::string variable = "delta_a";  // delta_a, phi, or nu (inelastic-spectrum)
    double start = -6;
    double stop = 6;
    int points = 2001;
};

struct RunSpec {
    std::string config_path;
    Command command = Command::Spectrum;
    std::optional<SweepSpec> sweep;
    std::string out_path;  // empty or "-" writes to stdout
    std::optional<OutputFormat> format;
    int jobs = 1;
    double tol = 1e-10;  // oracle tolerance
    int samples = 100;   // oracle-check
    std::uint64_t seed = 1;
};

Command command_from_string(const std::string& s);
std::string to_string(Command c);
SweepSpec parse_sweep(const std::string& s);

std::vector<double> linspace(double start, double stop, int points);

// Evaluates fn(i) for i in [0, n) on `jobs` threads; the lowest-index exception wins.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);

// Random valid configuration of any topology with unequal rates and delta_ab != 0.
SystemConfig random_config(std::mt19937_64& rng);

// Runs the command and writes the output; never throws.  Errors are written to `err`
// as a one-line JSON record and mapped to exit codes 2 (schema), 3 (numerical), 4 (I/O).
int run(const RunSpec& spec, std::ostream& err);

// Same, on an already-parsed config; output text is returned instead of written.
std::string run_to_string(const RunSpec& spec, const ConfigFile* cfg);

}  // namespace gawqed
