#include "msalab/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

#include "msalab/errors.hpp"

namespace msalab {

namespace {

// Adds the hopping part to m: entry 1 between box points at adjacency distance 1.
// Works on flattened coordinates so one routine serves Z^d and Z^{2d}.
void add_hopping(Eigen::MatrixXd& m, const std::vector<int>& center, int radius,
                 Adjacency adjacency) {
    const int n = static_cast<int>(center.size());
    const auto offsets = neighbour_offsets(n, adjacency);
    const std::size_t side = 2 * static_cast<std::size_t>(radius) + 1;
    const auto dim = static_cast<std::size_t>(m.rows());
    std::vector<int> local(n);
    for (std::size_t row = 0; row < dim; ++row) {
        std::size_t rem = row;
        for (int i = n; i-- > 0;) {
            local[i] = static_cast<int>(rem % side);
            rem /= side;
        }
        for (const auto& off : offsets) {
            std::size_t col = 0;
            bool inside = true;
            for (int i = 0; i < n; ++i) {
                const int c = local[i] + off[i];
                if (c < 0 || c >= static_cast<int>(side)) {
                    inside = false;
                    break;
                }
                col = col * side + static_cast<std::size_t>(c);
            }
            if (inside) m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = 1.0;
        }
    }
}

}  // namespace

FiniteOperator assemble_two_particle(const Box2& box, const DisorderSample& sample,
                                     const InteractionSpec& interaction, double g,
                                     Adjacency adjacency) {
    const auto n = static_cast<Eigen::Index>(box.size());
    FiniteOperator op{box, adjacency, g, 0, Eigen::MatrixXd::Zero(n, n)};
    std::vector<int> center(box.center.x1.coords);
    center.insert(center.end(), box.center.x2.coords.begin(), box.center.x2.coords.end());
    add_hopping(op.matrix, center, box.radius, adjacency);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Point2 x = box.point_at(static_cast<std::size_t>(i));
        op.matrix(i, i) = interaction_u(interaction, x) + g * field_w(sample, x);
    }
    return op;
}

FiniteOperator assemble_single_particle(const Box1& box, const DisorderSample& sample, double g,
                                        int particle, Adjacency adjacency) {
    const auto n = static_cast<Eigen::Index>(box.size());
    FiniteOperator op{box, adjacency, g, particle, Eigen::MatrixXd::Zero(n, n)};
    add_hopping(op.matrix, box.center.coords, box.radius, adjacency);
    for (Eigen::Index i = 0; i < n; ++i) {
        op.matrix(i, i) = g * sample.at(box.point_at(static_cast<std::size_t>(i)));
    }
    return op;
}

double SpectralData::max_relative_residual() const {
    if (residuals.size() == 0) return 0.0;
    return residuals.maxCoeff() / std::max(1.0, norm);
}

double SpectralData::orthonormality_defect() const {
    const auto n = eigenvectors.cols();
    const Eigen::MatrixXd gram = eigenvectors.transpose() * eigenvectors;
    return (gram - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
}

SpectralData diagonalize(const Eigen::MatrixXd& matrix) {
    if (matrix.rows() == 0) throw InvalidInput("cannot diagonalize an empty operator");
    if (!matrix.allFinite()) throw NumericError("operator has non-finite entries");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(matrix);
    if (solver.info() != Eigen::Success) throw NumericError("eigensolver did not converge");
    SpectralData out;
    out.eigenvalues = solver.eigenvalues();
    out.eigenvectors = solver.eigenvectors();
    out.norm = out.eigenvalues.cwiseAbs().maxCoeff();
    const Eigen::MatrixXd r =
        matrix * out.eigenvectors - out.eigenvectors * out.eigenvalues.asDiagonal();
    out.residuals = r.colwise().norm().transpose();
    return out;
}

SpectralData diagonalize(const FiniteOperator& op) { return diagonalize(op.matrix); }

std::vector<double> pairwise_sums(std::span<const double> a, std::span<const double> b) {
    std::vector<double> out;
    out.reserve(a.size() * b.size());
    for (double x : a) {
        for (double y : b) out.push_back(x + y);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<double> tensor_spectrum(const Box2& box, const DisorderSample& sample, double g,
                                    int r0, Adjacency adjacency) {
    if (is_interactive(box, r0)) {
        throw PreconditionViolation("tensor_spectrum requires a non-interactive box");
    }
    const auto p = projections(box);
    const auto s1 = diagonalize(assemble_single_particle(p.first, sample, g, 1, adjacency));
    const auto s2 = diagonalize(assemble_single_particle(p.second, sample, g, 2, adjacency));
    return pairwise_sums(s1.values(), s2.values());
}

double permutation_conjugate_check(const Box2& box, const DisorderSample& sample,
                                   const InteractionSpec& interaction, double g,
                                   Adjacency adjacency) {
    const auto a = diagonalize(assemble_two_particle(box, sample, interaction, g, adjacency));
    const auto b =
        diagonalize(assemble_two_particle(permute(box), sample, interaction, g, adjacency));
    return (a.eigenvalues - b.eigenvalues).cwiseAbs().maxCoeff();
}

void write_triplets(std::ostream& os, const FiniteOperator& op) {
    const auto flags = os.flags();
    const auto prec = os.precision();
    os << "# dim " << op.dimension() << '\n' << std::setprecision(17);
    for (Eigen::Index i = 0; i < op.matrix.rows(); ++i) {
        for (Eigen::Index j = 0; j < op.matrix.cols(); ++j) {
            if (op.matrix(i, j) != 0.0) os << i << ' ' << j << ' ' << op.matrix(i, j) << '\n';
        }
    }
    os.flags(flags);
    os.precision(prec);
}

}  // namespace msalab
