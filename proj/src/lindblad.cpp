#include "gawqed/lindblad.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gawqed {

namespace {

const cplx I(0, 1);

Matrix16c kron(const Matrix4c& A, const Matrix4c& B)
{
    Matrix16c K;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) K.block<4, 4>(4 * i, 4 * j) = A(i, j) * B;
    return K;
}

Matrix16c spre(const Matrix4c& A) { return kron(Matrix4c::Identity(), A); }
Matrix16c spost(const Matrix4c& A) { return kron(A.transpose(), Matrix4c::Identity()); }

Eigen::Matrix<cplx, 16, 1> vec(const Matrix4c& X)
{
    return Eigen::Map<const Eigen::Matrix<cplx, 16, 1>>(X.data());
}

Matrix4c unvec(const Eigen::Matrix<cplx, 16, 1>& v)
{
    return Eigen::Map<const Matrix4c>(v.data());
}

// Output-operator coefficients: b = const + sum_j c_j sigma_j for each channel.
struct Channels {
    std::array<cplx, 2> trans{}, refl{};
    cplx trans_free;  // exp(i (theta_N' - theta_a1))
};

Channels channels(const SystemConfig& cfg)
{
    const auto pts = sorted_points(cfg);
    const double a1 = cfg.atom_a.points[0].phase;
    const double last = pts[3].point.phase;
    Channels c;
    c.trans_free = std::polar(1.0, last - a1);
    const GiantAtom* atoms[2] = {&cfg.atom_a, &cfg.atom_b};
    for (int j = 0; j < 2; ++j)
        for (const auto& p : atoms[j]->points) {
            const double w = std::sqrt(p.rate / 2);
            c.trans[j] += w * std::polar(1.0, last - p.phase);
            c.refl[j] += w * std::polar(1.0, p.phase - a1);
        }
    return c;
}

Matrix4c channel_operator(const std::array<cplx, 2>& c)
{
    return c[0] * lowering_a() + c[1] * lowering_b();
}

double flux_of(const Matrix4c& B, const Matrix4c& rho)
{
    const cplx mean = (rho * B).trace();
    return ((rho * B.adjoint() * B).trace() - std::norm(mean)).real();
}

}  // namespace

Matrix4c lowering_a()
{
    Matrix4c s = Matrix4c::Zero();
    s(0, 2) = 1;  // eg -> gg
    s(1, 3) = 1;  // ee -> ge
    return s;
}

Matrix4c lowering_b()
{
    Matrix4c s = Matrix4c::Zero();
    s(0, 1) = 1;  // ge -> gg
    s(2, 3) = 1;  // ee -> eg
    return s;
}

Matrix16c build_liouvillian(const SystemConfig& cfg, const DriveSpec& drive)
{
    if (!(drive.amplitude_sq >= 0) || !std::isfinite(drive.amplitude_sq))
        throw PreconditionError("drive amplitude_sq must be finite and >= 0");
    const CharQuantities q = characteristics(cfg);
    const double da = drive.detuning - q.lamb_a;
    const double db = detuning_b(cfg, drive.detuning) - q.lamb_b;
    const double alpha = std::sqrt(drive.amplitude_sq);
    const auto om = drive_couplings(cfg);
    const Matrix4c S[2] = {lowering_a(), lowering_b()};

    Matrix4c H = -da * S[0].adjoint() * S[0] - db * S[1].adjoint() * S[1] +
                 q.g_ab * (S[0].adjoint() * S[1] + S[1].adjoint() * S[0]);
    for (int j = 0; j < 2; ++j) {
        const cplx w = alpha * om[j];
        H += -0.5 * I * (w * S[j].adjoint() - std::conj(w) * S[j]);
    }

    Matrix16c L = -I * (spre(H) - spost(H));
    const double G[2][2] = {{q.gamma_a, q.gamma_ab}, {q.gamma_ab, q.gamma_b}};
    for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) {
            if (G[j][k] == 0) continue;
            const Matrix4c kj = S[k].adjoint() * S[j];
            // S_j rho S_k^dag - {S_k^dag S_j, rho}/2
            L += G[j][k] * (kron(S[k].conjugate(), S[j]) - 0.5 * spre(kj) - 0.5 * spost(kj));
        }
    return L;
}

SteadyState steady_state(const Matrix16c& liouvillian)
{
    Eigen::ComplexEigenSolver<Matrix16c> es(liouvillian, false);
    const auto& ev = es.eigenvalues();
    int zeros = 0;
    for (int i = 0; i < 16; ++i)
        if (std::abs(ev(i)) < 1e-10) ++zeros;
    if (zeros != 1) {
        std::ostringstream os;
        os << "steady state is not unique: " << zeros << " Liouvillian eigenvalues with |lambda| < 1e-10";
        throw NumericalError(os.str());
    }

    // trace condition replaces one redundant row
    Matrix16c M = liouvillian;
    M.row(0) = vec(Matrix4c::Identity()).transpose();
    Eigen::Matrix<cplx, 16, 1> b = Eigen::Matrix<cplx, 16, 1>::Zero();
    b(0) = 1;
    SteadyState ss;
    ss.rho = unvec(M.partialPivLu().solve(b));
    ss.rho = 0.5 * (ss.rho + ss.rho.adjoint());
    return ss;
}

std::array<double, 2> incoherent_flux(const SystemConfig& cfg, const SteadyState& ss)
{
    const Channels c = channels(cfg);
    return {flux_of(channel_operator(c.trans), ss.rho), flux_of(channel_operator(c.refl), ss.rho)};
}

LindbladResult scattering_from_master(const SystemConfig& cfg, const DriveSpec& drive)
{
    if (!(drive.amplitude_sq > 0))
        throw PreconditionError("master-equation scattering needs amplitude_sq > 0");
    LindbladResult out;
    out.steady = steady_state(build_liouvillian(cfg, drive));
    const Matrix4c& rho = out.steady.rho;
    const double alpha = std::sqrt(drive.amplitude_sq);
    const Channels c = channels(cfg);
    const cplx ex[2] = {(rho * lowering_a()).trace(), (rho * lowering_b()).trace()};

    out.t = c.trans_free + (c.trans[0] * ex[0] + c.trans[1] * ex[1]) / alpha;
    out.r = (c.refl[0] * ex[0] + c.refl[1] * ex[1]) / alpha;
    out.T = std::norm(out.t);
    out.R = std::norm(out.r);
    const auto f = incoherent_flux(cfg, out.steady);
    out.inelastic_flux = f[0] + f[1];
    out.conservation_residual = std::abs(out.inelastic_flux / drive.amplitude_sq - (1 - out.T - out.R));
    return out;
}

InelasticSpectrum inelastic_spectrum(const SystemConfig& cfg, const DriveSpec& drive, const std::vector<double>& nu_grid)
{
    const Matrix16c L = build_liouvillian(cfg, drive);
    const SteadyState ss = steady_state(L);
    const Channels c = channels(cfg);
    const auto vrho = vec(ss.rho);
    // projector onto the steady state regularises nu = 0 without touching traceless vectors
    const Matrix16c P = vrho * vec(Matrix4c::Identity()).transpose();

    const Matrix4c B[2] = {channel_operator(c.trans), channel_operator(c.refl)};
    Eigen::Matrix<cplx, 16, 1> X[2];
    for (int i = 0; i < 2; ++i) {
        const cplx mean = (ss.rho * B[i]).trace();
        X[i] = vec(B[i] * ss.rho - mean * ss.rho);
    }

    InelasticSpectrum out;
    out.nu = nu_grid;
    out.transmitted.reserve(nu_grid.size());
    out.reflected.reserve(nu_grid.size());
    for (double nu : nu_grid) {
        const Matrix16c M = I * nu * Matrix16c::Identity() - L + P;
        const Eigen::PartialPivLU<Matrix16c> lu(M);
        if (lu.rcond() < 1e-14) {
            std::ostringstream os;
            os.precision(17);
            os << "resolvent singular at nu=" << nu << " (undamped Liouvillian mode)";
            throw NumericalError(os.str());
        }
        for (int i = 0; i < 2; ++i) {
            const Matrix4c y = unvec(lu.solve(X[i]));
            const double s = 2 * (B[i].adjoint() * y).trace().real() / (2 * pi);
            (i == 0 ? out.transmitted : out.reflected).push_back(s);
        }
    }
    return out;
}

}  // namespace gawqed
