#pragma once

// Green's functions G(E; x, y) = <(H - E)^{-1} delta_x, delta_y> of box
// operators, by direct LU solve and by spectral expansion, and the recovery
// of eigenfunction values from boundary data.

#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "msalab/hamiltonian.hpp"

namespace msalab {

/// Energies closer than this (relative to 1 + ||H||) to an eigenvalue are
/// treated as resonant; callers should classify the box instead.
inline constexpr double kResonanceGuard = 1e-12;

struct GreenColumn {
    double energy = 0.0;
    std::size_t source = 0;  // row index of the source point
    Eigen::VectorXd values;  // G(E; source, x) indexed like the operator
    double residual = 0.0;   // ||(H - E) c - delta_source||

    double at(const FiniteOperator& op, const Point2& x) const { return values(op.index(x)); }
};

/// LU factorisation of H - E, reusable for many source points.
class Resolvent {
public:
    /// Throws ResonantEnergy when E is within the guard of spec(H) (exactly when
    /// spectral data is supplied, otherwise through a pivot test on the LU).
    Resolvent(const FiniteOperator& op, double energy, const SpectralData* spectral = nullptr);

    double energy() const noexcept { return energy_; }
    GreenColumn column(std::size_t source) const;
    GreenColumn column(const Point2& source) const { return column(op_->index(source)); }

private:
    const FiniteOperator* op_;
    double energy_;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
};

GreenColumn green_column(const FiniteOperator& op, double E, const Point2& x,
                         const SpectralData* spectral = nullptr);

/// Distance from E to the spectrum.
double spectral_gap(const SpectralData& spectral, double E);

/// G(E; u, y) on a non-interactive box from the factor spectra:
///   sum_{s1,s2} psi1(u1) psi1(y1) psi2(u2) psi2(y2) / (E1 + E2 - E).
/// Throws ResonantEnergy when some E1 + E2 is within the guard of E.
double green_spectral(const FiniteOperator& h1, const SpectralData& s1, const FiniteOperator& h2,
                      const SpectralData& s2, double E, const Point2& u, const Point2& y);

/// G(E; source, .) at selected targets via the eigen-expansion of one operator;
/// cheap when many energies are scanned for the same box.
Eigen::VectorXd green_expansion(const SpectralData& spectral, double E, std::size_t source,
                                std::span<const std::size_t> targets);

struct RecoveryResult {
    std::vector<Point2> points;         // all points of the box, operator order
    std::vector<double> reconstructed;  // -sum G(E;u,v) Psi(v') over boundary pairs
    std::vector<double> original;       // Psi(u)
    double max_error = 0.0;
    double psi_sup = 0.0;  // ||Psi||_inf over box plus exterior boundary
};

/// Reconstructs Psi on the box from its values on the exterior boundary:
///   Psi(u) = - sum_{v in dLambda} sum_{v' in d+Lambda, v ~ v'} G(E; u, v) Psi(v'),
/// valid whenever (H Psi)(x) = E Psi(x) holds for x in the box.  The minus sign
/// comes from moving the hops across the boundary to the right-hand side.
RecoveryResult boundary_recovery(const FiniteOperator& op, double E,
                                 const std::function<double(const Point2&)>& psi,
                                 const SpectralData* spectral = nullptr);

}  // namespace msalab
