#include "msalab/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "msalab/errors.hpp"

namespace msalab {

namespace {

double operator_scale(const FiniteOperator& op) {
    // Row-sum norm bounds the spectral norm; cheap and good enough for a guard.
    return op.matrix.cwiseAbs().rowwise().sum().maxCoeff();
}

}  // namespace

double spectral_gap(const SpectralData& spectral, double E) {
    return (spectral.eigenvalues.array() - E).abs().minCoeff();
}

Resolvent::Resolvent(const FiniteOperator& op, double energy, const SpectralData* spectral)
    : op_(&op), energy_(energy) {
    if (!std::isfinite(energy)) throw InvalidInput("energy must be finite");
    const double scale = 1.0 + std::abs(energy) + operator_scale(op);
    if (spectral != nullptr && spectral_gap(*spectral, energy) <= kResonanceGuard * scale) {
        throw ResonantEnergy("energy " + std::to_string(energy) + " is an eigenvalue of the box");
    }
    const auto n = op.matrix.rows();
    lu_.compute(op.matrix - energy * Eigen::MatrixXd::Identity(n, n));
    const Eigen::VectorXd pivots = lu_.matrixLU().diagonal().cwiseAbs();
    if (pivots.minCoeff() <= kResonanceGuard * scale) {
        throw ResonantEnergy("H - E is numerically singular at E = " + std::to_string(energy));
    }
}

GreenColumn Resolvent::column(std::size_t source) const {
    const auto n = op_->matrix.rows();
    if (source >= static_cast<std::size_t>(n)) throw OutOfDomain("source index outside box");
    Eigen::VectorXd delta = Eigen::VectorXd::Zero(n);
    delta(static_cast<Eigen::Index>(source)) = 1.0;
    GreenColumn out;
    out.energy = energy_;
    out.source = source;
    out.values = lu_.solve(delta);
    if (!out.values.allFinite()) throw NumericError("non-finite Green's function values");
    const Eigen::VectorXd r =
        op_->matrix * out.values - energy_ * out.values - delta;
    out.residual = r.norm();
    return out;
}

GreenColumn green_column(const FiniteOperator& op, double E, const Point2& x,
                         const SpectralData* spectral) {
    return Resolvent(op, E, spectral).column(op.index(x));
}

double green_spectral(const FiniteOperator& h1, const SpectralData& s1, const FiniteOperator& h2,
                      const SpectralData& s2, double E, const Point2& u, const Point2& y) {
    const auto iu1 = static_cast<Eigen::Index>(h1.index(u.x1));
    const auto iy1 = static_cast<Eigen::Index>(h1.index(y.x1));
    const auto iu2 = static_cast<Eigen::Index>(h2.index(u.x2));
    const auto iy2 = static_cast<Eigen::Index>(h2.index(y.x2));
    const double scale = 1.0 + std::abs(E) + s1.norm + s2.norm;
    double acc = 0.0;
    for (Eigen::Index a = 0; a < s1.eigenvalues.size(); ++a) {
        const double w1 = s1.eigenvectors(iu1, a) * s1.eigenvectors(iy1, a);
        for (Eigen::Index b = 0; b < s2.eigenvalues.size(); ++b) {
            const double denom = s1.eigenvalues(a) + s2.eigenvalues(b) - E;
            if (std::abs(denom) <= kResonanceGuard * scale) {
                throw ResonantEnergy("E coincides with a sum of single-particle eigenvalues");
            }
            acc += w1 * s2.eigenvectors(iu2, b) * s2.eigenvectors(iy2, b) / denom;
        }
    }
    return acc;
}

Eigen::VectorXd green_expansion(const SpectralData& spectral, double E, std::size_t source,
                                std::span<const std::size_t> targets) {
    const double scale = 1.0 + std::abs(E) + spectral.norm;
    const Eigen::ArrayXd denom = spectral.eigenvalues.array() - E;
    if (denom.abs().minCoeff() <= kResonanceGuard * scale) {
        throw ResonantEnergy("E coincides with an eigenvalue");
    }
    const Eigen::ArrayXd weights =
        spectral.eigenvectors.row(static_cast<Eigen::Index>(source)).transpose().array() / denom;
    Eigen::VectorXd out(static_cast<Eigen::Index>(targets.size()));
    for (std::size_t t = 0; t < targets.size(); ++t) {
        out(static_cast<Eigen::Index>(t)) =
            (spectral.eigenvectors.row(static_cast<Eigen::Index>(targets[t])).transpose().array() *
             weights)
                .sum();
    }
    return out;
}

RecoveryResult boundary_recovery(const FiniteOperator& op, double E,
                                 const std::function<double(const Point2&)>& psi,
                                 const SpectralData* spectral) {
    const Box2& box = op.box2();
    const Resolvent resolvent(op, E, spectral);

    // Boundary source term b(v) = sum_{v' outside, v ~ v'} Psi(v').
    const auto n = static_cast<Eigen::Index>(op.dimension());
    Eigen::VectorXd source = Eigen::VectorXd::Zero(n);
    RecoveryResult out;
    out.points = enumerate_box(box);
    const auto exterior = exterior_boundary(box);
    // The shell ||v - u|| = L, or the single site when L = 0.
    const auto shell = box.radius == 0 ? out.points : interior_boundary(box);
    for (const auto& v : shell) {
        double acc = 0.0;
        for (const auto& w : exterior) {
            if (adjacent(v, w, op.adjacency)) acc += psi(w);
        }
        source(static_cast<Eigen::Index>(box.index_of(v))) = acc;
    }
    for (const auto& w : exterior) out.psi_sup = std::max(out.psi_sup, std::abs(psi(w)));

    out.reconstructed.resize(out.points.size());
    out.original.resize(out.points.size());
    for (std::size_t i = 0; i < out.points.size(); ++i) {
        // G is symmetric, so G(E; u, .) is the column with source u.
        const auto col = resolvent.column(i);
        out.reconstructed[i] = -col.values.dot(source);
        out.original[i] = psi(out.points[i]);
        out.psi_sup = std::max(out.psi_sup, std::abs(out.original[i]));
        out.max_error = std::max(out.max_error, std::abs(out.reconstructed[i] - out.original[i]));
    }
    return out;
}

}  // namespace msalab
