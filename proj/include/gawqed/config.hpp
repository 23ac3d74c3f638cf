#pragma once

#include "gawqed/core.hpp"
#include "gawqed/lindblad.hpp"

#include <optional>
#include <string>

namespace gawqed {

class SchemaError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

struct SymmetricShortcut {
    Topology topology = Topology::Separate;
    double phi = 0;
    double gamma = 1;
};

struct ConfigFile {
    SystemConfig system;
    std::optional<DriveSpec> drive;
    std::optional<SymmetricShortcut> symmetric;
};

// Four points (0, phi, 2phi, 3phi) assigned per topology, all rates gamma.
SystemConfig expand_symmetric(const SymmetricShortcut& s, double delta_ab = 0.0);

// Throws SchemaError on any structural or validation problem.
ConfigFile parse_config(const std::string& json_text);
ConfigFile load_config(const std::string& path);

// Explicit atoms are always written; the shortcut is kept when present.
std::string dump_config(const ConfigFile& cfg);
void save_config(const ConfigFile& cfg, const std::string& path);

}  // namespace gawqed
