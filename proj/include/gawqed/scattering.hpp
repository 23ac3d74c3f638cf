#pragma once

#include "gawqed/core.hpp"

#include <optional>
#include <vector>

namespace gawqed {

struct ScatterPoint {
    double delta_a = 0;
    cplx t{1, 0};
    cplx r{0, 0};
    double T = 1;
    double R = 0;
    // Set when the denominator vanished and the value is the removable-pole limit.
    bool pole_limit = false;
};

struct RealSpaceSolution {
    // between consecutive points, left to right; minimum-norm when a dark mode is resonant
    std::array<cplx, 3> segment_t{};
    std::array<cplx, 3> segment_r{};
    cplx t, r;
    cplx f_a, f_b;
};

struct Loci {
    std::vector<double> peaks;  // ascending
    std::optional<double> minimum;
};

ScatterPoint amplitudes_general(const SystemConfig& cfg, double delta_a);
ScatterPoint amplitudes_general(const SystemConfig& cfg, const CharQuantities& q, double delta_a);

// Closed forms of the symmetric geometry (leftmost phase 0, equal rates, delta_ab = 0).
ScatterPoint amplitudes_topology(Topology topo, double phi, double delta, double gamma = 1.0);
// Checks that cfg is symmetric_config(topology, phi, gamma) with delta_ab = 0 before evaluating.
ScatterPoint amplitudes_topology(const SystemConfig& cfg, double delta, double phi);

Loci peak_minimum_loci(Topology topo, double phi, double gamma = 1.0);

RealSpaceSolution solve_real_space(const SystemConfig& cfg, double delta_a);

}  // namespace gawqed
