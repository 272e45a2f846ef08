#pragma once

// Finite-volume Hamiltonians H^(2)_Lambda and H^(1)_Lambda with Dirichlet
// restriction (hops leaving the box are dropped).

#include <iosfwd>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "msalab/disorder.hpp"
#include "msalab/geometry.hpp"

namespace msalab {

/// Dense real symmetric matrix of a box operator together with its index map.
/// Row i corresponds to box.point_at(i) (lexicographic order).
struct FiniteOperator {
    std::variant<Box1, Box2> box;
    Adjacency adjacency = Adjacency::SupNorm;
    double coupling = 0.0;
    int particle = 0;  // 0 for two-particle operators, 1 or 2 for H^(1)_{j;Lambda}
    Eigen::MatrixXd matrix;

    bool two_particle() const noexcept { return std::holds_alternative<Box2>(box); }
    const Box2& box2() const { return std::get<Box2>(box); }
    const Box1& box1() const { return std::get<Box1>(box); }
    std::size_t dimension() const noexcept { return static_cast<std::size_t>(matrix.rows()); }

    std::size_t index(const Point2& x) const { return box2().index_of(x); }
    std::size_t index(const Point1& x) const { return box1().index_of(x); }
};

FiniteOperator assemble_two_particle(const Box2& box, const DisorderSample& sample,
                                     const InteractionSpec& interaction, double g,
                                     Adjacency adjacency = Adjacency::SupNorm);

FiniteOperator assemble_single_particle(const Box1& box, const DisorderSample& sample, double g,
                                        int particle = 1,
                                        Adjacency adjacency = Adjacency::SupNorm);

struct SpectralData {
    Eigen::VectorXd eigenvalues;   // ascending
    Eigen::MatrixXd eigenvectors;  // orthonormal columns
    Eigen::VectorXd residuals;     // ||H psi_s - E_s psi_s||
    double norm = 0.0;             // spectral norm max |E_s|

    std::size_t size() const noexcept { return static_cast<std::size_t>(eigenvalues.size()); }
    std::span<const double> values() const noexcept {
        return {eigenvalues.data(), static_cast<std::size_t>(eigenvalues.size())};
    }
    /// max over s of ||H psi_s - E_s psi_s|| / max(1, ||H||)
    double max_relative_residual() const;
    /// max |V^T V - I|
    double orthonormality_defect() const;
};

/// Full dense symmetric eigendecomposition.  Throws NumericError on non-finite
/// entries and InvalidInput on an empty matrix.
SpectralData diagonalize(const Eigen::MatrixXd& matrix);
SpectralData diagonalize(const FiniteOperator& op);

/// Sorted pairwise sums {a_i + b_j}.
std::vector<double> pairwise_sums(std::span<const double> a, std::span<const double> b);

/// Spectrum of a non-interactive box from its two single-particle factors.
/// Throws PreconditionViolation when the box is interactive for range r0.
std::vector<double> tensor_spectrum(const Box2& box, const DisorderSample& sample, double g,
                                    int r0, Adjacency adjacency = Adjacency::L1);

/// max_s |E_s(Lambda) - E_s(sigma Lambda)| over the sorted spectra.
double permutation_conjugate_check(const Box2& box, const DisorderSample& sample,
                                   const InteractionSpec& interaction, double g,
                                   Adjacency adjacency = Adjacency::SupNorm);

/// Writes "row col value" triplets of the non-zero entries (17 significant
/// digits), preceded by a header line "# dim N".
void write_triplets(std::ostream& os, const FiniteOperator& op);

}  // namespace msalab
