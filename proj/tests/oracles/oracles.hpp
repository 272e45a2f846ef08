#pragma once

// Brute-force references for the test suite.  Nothing here calls into the
// library's numerics: plain vectors, textbook loops.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace oracle {

struct OracleResult {
    std::string quantity;
    std::vector<double> values;
    std::string method;
};

class Singular : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class Refused : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Matrix = std::vector<std::vector<double>>;

/// Entry (x, y) of (H - E)^{-1} by full Gauss-Jordan elimination with partial pivoting.
double dense_inverse_green(const Matrix& h, double E, std::size_t x, std::size_t y);
/// Whole inverse, same method.
Matrix dense_inverse(const Matrix& h, double E);

/// True iff some grid energy lo + i*spacing in [lo, hi] lies within
/// e^{-L^beta} of both spectra.
bool grid_resonant_pair(const std::vector<double>& spec1, const std::vector<double>& spec2,
                        double lo, double hi, int L, double beta, double spacing);

/// Centre of a two-particle box as flat coordinates (x1..., x2...).
struct Centre {
    std::vector<int> x1;
    std::vector<int> x2;
};

/// Largest subset with pairwise min(|u - v|, |sigma u - v|) > 8 Lk (sup norm).
int exhaustive_separated_subset(const std::vector<Centre>& centres, int Lk);

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
std::vector<double> jacobi_eigenvalues(Matrix a, double tol = 1e-13);

}  // namespace oracle
