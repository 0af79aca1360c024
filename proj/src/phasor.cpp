#include "kronred/phasor.hpp"

#include "kronred/error.hpp"
#include "kronred/numerics.hpp"

#include <cmath>
#include <numbers>

namespace kronred {

double normalize_phase(double phase_rad) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double p = std::fmod(phase_rad, two_pi);
    if (p <= -std::numbers::pi) p += two_pi;
    if (p > std::numbers::pi) p -= two_pi;
    return p;
}

Phasor Phasor::from_complex(std::complex<double> z) {
    const double mag = std::abs(z);
    return {mag, mag == 0.0 ? 0.0 : normalize_phase(std::arg(z))};
}

Phasor Phasor::polar(double magnitude, double phase_rad) {
    if (magnitude < 0.0) return {-magnitude, normalize_phase(phase_rad + std::numbers::pi)};
    return {magnitude, normalize_phase(phase_rad)};
}

AdmittanceMatrix admittance(const ValidatedNetwork& network, double omega) {
    if (!(omega > 0.0) || !std::isfinite(omega)) {
        throw Error(ErrorCode::InvalidArgument, "omega must be positive", {}, omega);
    }
    const Matrix B = build_incidence(network).as_real();
    const Vector r = network.resistances();
    const Vector l = network.inductances();
    CVector y(network.edge_count());
    for (Index e = 0; e < y.size(); ++e) y(e) = 1.0 / std::complex<double>(r(e), omega * l(e));

    const CMatrix Bc = B.cast<std::complex<double>>();
    AdmittanceMatrix out;
    out.Y = Bc * y.asDiagonal() * Bc.transpose();
    out.omega = omega;
    out.interior_count = network.interior_count();
    return out;
}

InteriorInvertibility check_interior_invertibility(const ValidatedNetwork& network) {
    InteriorInvertibility c{true, true};
    for (const auto& e : network.network().edges) {
        c.c1 = c.c1 && e.r > 0.0;
        c.c2 = c.c2 && e.l > 0.0;
    }
    return c;
}

KronReduction kron_reduce(const AdmittanceMatrix& Y) {
    const Index n = Y.Y.rows();
    const Index n0 = Y.interior_count;
    const Index n1 = n - n0;
    if (Y.Y.cols() != n || n0 < 0 || n0 > n) throw Error(ErrorCode::DimensionMismatch, "kron_reduce: bad partition");

    KronReduction out;
    if (n0 == 0) {
        out.Yr = Y.Y;
        out.recovery = CMatrix(0, n1);
        return out;
    }
    const CMatrix y00 = Y.Y.bottomRightCorner(n0, n0);
    const CMatrix y10 = Y.Y.topRightCorner(n1, n0);
    Eigen::PartialPivLU<CMatrix> lu(y00);
    const double rcond = lu.rcond();
    if (!(rcond >= kSingularRcond)) {
        throw Error(ErrorCode::SingularBlock, "interior admittance block is singular", {}, rcond);
    }
    out.recovery = -lu.solve(CMatrix(y10.transpose()));
    out.Yr = Y.Y.topLeftCorner(n1, n1) + y10 * out.recovery;
    return out;
}

CVector to_complex(const std::vector<Phasor>& phasors) {
    CVector v(static_cast<Index>(phasors.size()));
    for (std::size_t k = 0; k < phasors.size(); ++k) v(static_cast<Index>(k)) = phasors[k].to_complex();
    return v;
}

std::vector<Phasor> to_phasors(const CVector& values) {
    std::vector<Phasor> out;
    out.reserve(static_cast<std::size_t>(values.size()));
    for (Index k = 0; k < values.size(); ++k) out.push_back(Phasor::from_complex(values(k)));
    return out;
}

std::vector<Phasor> phasor_solve(const CMatrix& Yr, const std::vector<Phasor>& v1) {
    if (Yr.rows() != Yr.cols() || Yr.cols() != static_cast<Index>(v1.size())) {
        throw Error(ErrorCode::DimensionMismatch, "phasor_solve: voltage count does not match Yr");
    }
    return to_phasors(Yr * to_complex(v1));
}

std::vector<Phasor> recover_interior(const CMatrix& recovery, const std::vector<Phasor>& v1) {
    if (recovery.cols() != static_cast<Index>(v1.size())) {
        throw Error(ErrorCode::DimensionMismatch, "recover_interior: voltage count does not match");
    }
    return to_phasors(recovery * to_complex(v1));
}

}  // namespace kronred
