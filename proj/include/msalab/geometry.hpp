#pragma once

// Lattice geometry for the two-particle model on Z^d x Z^d.
//
// All distances are sup-norm distances. Boxes are closed sup-norm balls with
// integer radius; point enumeration is lexicographic on (x1 coords, x2 coords),
// which fixes the row order of every assembled matrix.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace msalab {

/// Neighbour relation used by the hopping term.
///   SupNorm - ||y - x||_inf == 1 (3^n - 1 neighbours in Z^n), literal reading of H^(2).
///   L1      - ||y - x||_1 == 1 (2n neighbours), the conventional lattice Laplacian.
enum class Adjacency { SupNorm, L1 };

std::string to_string(Adjacency a);
Adjacency adjacency_from_string(const std::string& s);

/// A site of Z^d.
struct Point1 {
    std::vector<int> coords;

    Point1() = default;
    explicit Point1(std::vector<int> c) : coords(std::move(c)) {}
    Point1(std::initializer_list<int> c) : coords(c) {}

    int dim() const noexcept { return static_cast<int>(coords.size()); }
    int operator[](std::size_t i) const { return coords[i]; }

    auto operator<=>(const Point1&) const = default;
    bool operator==(const Point1&) const = default;
};

/// A configuration (x1, x2) of the two particles.
struct Point2 {
    Point1 x1;
    Point1 x2;

    Point2() = default;
    Point2(Point1 a, Point1 b);

    int dim() const noexcept { return x1.dim(); }

    auto operator<=>(const Point2&) const = default;
    bool operator==(const Point2&) const = default;
};

struct Point1Hash {
    std::size_t operator()(const Point1& p) const noexcept;
};
struct Point2Hash {
    std::size_t operator()(const Point2& p) const noexcept;
};

int sup_norm(const Point1& v);
/// max over both particles of max over coordinates; throws InvalidInput when
/// the two components have different dimension.
int sup_norm(const Point2& v);

int distance(const Point1& a, const Point1& b);
int distance(const Point2& a, const Point2& b);
int l1_distance(const Point1& a, const Point1& b);
int l1_distance(const Point2& a, const Point2& b);

/// sigma(x1, x2) = (x2, x1)
Point2 permute(const Point2& x);

/// min(||u - v||, ||sigma u - v||), the separation entering the R-distance test.
int pair_separation(const Point2& u, const Point2& v);

bool adjacent(const Point1& a, const Point1& b, Adjacency adj);
bool adjacent(const Point2& a, const Point2& b, Adjacency adj);

/// Neighbour offsets in Z^n for the given adjacency, lexicographic order.
std::vector<std::vector<int>> neighbour_offsets(int n, Adjacency adj);

/// Single-particle box {x : ||x - center|| <= radius}.
struct Box1 {
    Point1 center;
    int radius = 0;

    Box1() = default;
    Box1(Point1 c, int r);

    int dim() const noexcept { return center.dim(); }
    int side() const noexcept { return 2 * radius + 1; }
    std::size_t size() const;
    bool contains(const Point1& x) const;
    /// Lexicographic index of x inside the box; x must be contained.
    std::size_t index_of(const Point1& x) const;
    Point1 point_at(std::size_t index) const;

    bool operator==(const Box1&) const = default;
};

/// Two-particle box Lambda_L(u) = {x : ||x - u|| <= L}.
struct Box2 {
    Point2 center;
    int radius = 0;

    Box2() = default;
    Box2(Point2 c, int r);

    int dim() const noexcept { return center.dim(); }
    int side() const noexcept { return 2 * radius + 1; }
    std::size_t size() const;
    bool contains(const Point2& x) const;
    std::size_t index_of(const Point2& x) const;
    Point2 point_at(std::size_t index) const;

    bool operator==(const Box2&) const = default;
};

/// sigma Lambda_L(u) = Lambda_L(sigma u)
Box2 permute(const Box2& b);

/// Smallest integer radius containing a real radius (ceil with a tolerance so
/// exact powers such as 4^1.5 are not bumped up by rounding noise).
int ceil_radius(double r);

std::vector<Point1> enumerate_box(const Box1& b);
std::vector<Point2> enumerate_box(const Box2& b);

/// Points y of the box having a neighbour outside at sup-distance 1: the shell
/// ||y - center|| == radius, empty for radius 0.
std::vector<Point1> interior_boundary(const Box1& b);
std::vector<Point2> interior_boundary(const Box2& b);

/// Points outside the box at sup-distance 1 from it.
std::vector<Point2> exterior_boundary(const Box2& b);

/// Sup-norm distance between the point sets of two boxes.
int box_distance(const Box1& a, const Box1& b);
int box_distance(const Box2& a, const Box2& b);

/// Inclusion of point sets.
bool box_contains(const Box2& outer, const Box2& inner);

/// min(||u - v||, ||sigma u - v||) > 8R for the centres u, v.
bool is_r_distant(const Box2& b1, const Box2& b2, int R);

/// Does the box meet D_r0 = {x : ||x1 - x2|| <= r0}?  Equivalent to
/// ||u1 - u2|| <= 2L + r0.
bool is_interactive(const Box2& b, int r0);

struct Projections {
    Box1 first;
    Box1 second;
    std::vector<Point1> merged;  // sorted union of both point sets
};

Projections projections(const Box2& b);

/// M_k(u) = Lambda_{L}(u) u sigma Lambda_{L}(u), listed sorted.
std::vector<Point2> symmetrized_box(const Point2& u, int radius);

/// A_{k+1}(u) = Lambda_{b_{k+1} L_{k+1}}(u) \ Lambda_{b_k L_k}(u) with
/// b L = L + R(u), R(u) = ||sigma u - u||.  inner/outer are the integer scale
/// lengths L_k and L_{k+1}.
std::vector<Point2> annulus(const Point2& u, int inner_length, int outer_length);
/// Radius b L = L + R(u) of the box enclosing M(u) at scale length L.
int enlarged_radius(const Point2& u, int length);

std::string to_string(const Point1& p);
std::string to_string(const Point2& p);

}  // namespace msalab
