#pragma once

// Sinusoidal steady-state (phasor) Kron reduction.

#include "kronred/network.hpp"

#include <complex>
#include <vector>

namespace kronred {

/// x(t) = magnitude * cos(omega t + phase). Phase kept in (-pi, pi].
struct Phasor {
    double magnitude = 0.0;
    double phase = 0.0;  // rad

    [[nodiscard]] static Phasor from_complex(std::complex<double> z);
    [[nodiscard]] static Phasor polar(double magnitude, double phase_rad);
    [[nodiscard]] std::complex<double> to_complex() const { return std::polar(magnitude, phase); }
};

[[nodiscard]] double normalize_phase(double phase_rad);

struct AdmittanceMatrix {
    CMatrix Y;                // N x N, boundary rows first
    double omega = 0.0;       // rad/s
    Index interior_count = 0; // trailing N0 rows/cols form Y00

    [[nodiscard]] Index boundary_count() const { return Y.rows() - interior_count; }
};

/// Y = B (R + j omega L)^{-1} B^T. Throws InvalidArgument for omega <= 0.
[[nodiscard]] AdmittanceMatrix admittance(const ValidatedNetwork& network, double omega);

struct InteriorInvertibility {
    bool c1 = false;  // every r_e > 0
    bool c2 = false;  // every l_e > 0
    [[nodiscard]] bool guaranteed() const { return c1 || c2; }
};

[[nodiscard]] InteriorInvertibility check_interior_invertibility(const ValidatedNetwork& network);

struct KronReduction {
    CMatrix Yr;        // (N-N0) x (N-N0)
    CMatrix recovery;  // N0 x (N-N0): v0 = recovery * v1
};

/// Yr = Y11 - Y10 Y00^{-1} Y10^T and recovery = -Y00^{-1} Y10^T.
/// Throws SingularBlock when Y00 is numerically singular.
[[nodiscard]] KronReduction kron_reduce(const AdmittanceMatrix& Y);

/// i1 = Yr v1 on phasors. Throws DimensionMismatch.
[[nodiscard]] std::vector<Phasor> phasor_solve(const CMatrix& Yr, const std::vector<Phasor>& v1);

/// Interior voltages v0 = recovery * v1.
[[nodiscard]] std::vector<Phasor> recover_interior(const CMatrix& recovery, const std::vector<Phasor>& v1);

[[nodiscard]] CVector to_complex(const std::vector<Phasor>& phasors);
[[nodiscard]] std::vector<Phasor> to_phasors(const CVector& values);

}  // namespace kronred
