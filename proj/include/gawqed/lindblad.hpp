#pragma once

#include "gawqed/core.hpp"

#include <Eigen/Dense>

#include <vector>

namespace gawqed {

// Basis {gg, ge, eg, ee}: index = 2 * (atom a excited) + (atom b excited).
// Superoperators act on column-stacked vec(rho): vec(A X B) = (B^T kron A) vec(X).
using Matrix4c = Eigen::Matrix<cplx, 4, 4>;
using Matrix16c = Eigen::Matrix<cplx, 16, 16>;

struct DriveSpec {
    double amplitude_sq = 0;  // |alpha|^2, photons per unit time
    double detuning = 0;      // delta_a of the drive
};

struct SteadyState {
    Matrix4c rho = Matrix4c::Zero();
};

struct LindbladResult {
    SteadyState steady;
    cplx t, r;
    double T = 0, R = 0;
    double inelastic_flux = 0;  // F, absolute; F / |alpha|^2 = 1 - T - R
    double conservation_residual = 0;
};

struct InelasticSpectrum {
    std::vector<double> nu;
    std::vector<double> transmitted;
    std::vector<double> reflected;
};

Matrix4c lowering_a();
Matrix4c lowering_b();

Matrix16c build_liouvillian(const SystemConfig& cfg, const DriveSpec& drive);
SteadyState steady_state(const Matrix16c& liouvillian);
LindbladResult scattering_from_master(const SystemConfig& cfg, const DriveSpec& drive);

// S(nu) = (1/2pi) int exp(-i nu t) <db^dag(t) db(0)> dt, so int S dnu is the incoherent flux.
// nu is measured from the drive frequency.
InelasticSpectrum inelastic_spectrum(const SystemConfig& cfg, const DriveSpec& drive, const std::vector<double>& nu_grid);

// Equal-time incoherent flux per channel, {transmitted, reflected}.
std::array<double, 2> incoherent_flux(const SystemConfig& cfg, const SteadyState& ss);

}  // namespace gawqed
