#include "msalab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "msalab/errors.hpp"

namespace msalab {

namespace {

void require_same_dim(const Point1& a, const Point1& b) {
    if (a.dim() != b.dim()) {
        throw InvalidInput("dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                           std::to_string(b.dim()));
    }
}

std::size_t ipow(std::size_t base, int exp) {
    std::size_t r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

// Coordinates of a two-particle point as one vector of length 2d.
std::vector<int> flatten(const Point2& p) {
    std::vector<int> out(p.x1.coords);
    out.insert(out.end(), p.x2.coords.begin(), p.x2.coords.end());
    return out;
}

Point2 unflatten(const std::vector<int>& v) {
    const auto d = v.size() / 2;
    return Point2(Point1(std::vector<int>(v.begin(), v.begin() + d)),
                  Point1(std::vector<int>(v.begin() + d, v.end())));
}

// Mixed-radix decode of a lexicographic index around a centre.
std::vector<int> decode(const std::vector<int>& center, int radius, std::size_t index) {
    const std::size_t side = 2 * static_cast<std::size_t>(radius) + 1;
    std::vector<int> out(center.size());
    for (std::size_t i = center.size(); i-- > 0;) {
        out[i] = center[i] - radius + static_cast<int>(index % side);
        index /= side;
    }
    return out;
}

std::size_t encode(const std::vector<int>& center, int radius, const std::vector<int>& x) {
    const std::size_t side = 2 * static_cast<std::size_t>(radius) + 1;
    std::size_t idx = 0;
    for (std::size_t i = 0; i < center.size(); ++i) {
        idx = idx * side + static_cast<std::size_t>(x[i] - center[i] + radius);
    }
    return idx;
}

}  // namespace

std::string to_string(Adjacency a) { return a == Adjacency::SupNorm ? "sup" : "l1"; }

Adjacency adjacency_from_string(const std::string& s) {
    if (s == "sup" || s == "sup-literal" || s == "supnorm") return Adjacency::SupNorm;
    if (s == "l1" || s == "L1") return Adjacency::L1;
    throw InvalidInput("unknown adjacency '" + s + "' (expected 'sup' or 'l1')");
}

Point2::Point2(Point1 a, Point1 b) : x1(std::move(a)), x2(std::move(b)) {}

std::size_t Point1Hash::operator()(const Point1& p) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (int c : p.coords) {
        h ^= static_cast<std::uint32_t>(c);
        h *= 0x100000001b3ULL;
    }
    return static_cast<std::size_t>(h);
}

std::size_t Point2Hash::operator()(const Point2& p) const noexcept {
    const auto a = Point1Hash{}(p.x1);
    const auto b = Point1Hash{}(p.x2);
    return a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
}

int sup_norm(const Point1& v) {
    int m = 0;
    for (int c : v.coords) m = std::max(m, std::abs(c));
    return m;
}

int sup_norm(const Point2& v) {
    require_same_dim(v.x1, v.x2);
    return std::max(sup_norm(v.x1), sup_norm(v.x2));
}

int distance(const Point1& a, const Point1& b) {
    require_same_dim(a, b);
    int m = 0;
    for (std::size_t i = 0; i < a.coords.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

int distance(const Point2& a, const Point2& b) {
    return std::max(distance(a.x1, b.x1), distance(a.x2, b.x2));
}

int l1_distance(const Point1& a, const Point1& b) {
    require_same_dim(a, b);
    int s = 0;
    for (std::size_t i = 0; i < a.coords.size(); ++i) s += std::abs(a[i] - b[i]);
    return s;
}

int l1_distance(const Point2& a, const Point2& b) {
    return l1_distance(a.x1, b.x1) + l1_distance(a.x2, b.x2);
}

Point2 permute(const Point2& x) { return Point2(x.x2, x.x1); }

int pair_separation(const Point2& u, const Point2& v) {
    return std::min(distance(u, v), distance(permute(u), v));
}

bool adjacent(const Point1& a, const Point1& b, Adjacency adj) {
    return adj == Adjacency::SupNorm ? distance(a, b) == 1 : l1_distance(a, b) == 1;
}

bool adjacent(const Point2& a, const Point2& b, Adjacency adj) {
    return adj == Adjacency::SupNorm ? distance(a, b) == 1 : l1_distance(a, b) == 1;
}

std::vector<std::vector<int>> neighbour_offsets(int n, Adjacency adj) {
    std::vector<std::vector<int>> out;
    if (adj == Adjacency::L1) {
        for (int i = 0; i < n; ++i) {
            for (int s : {-1, 1}) {
                std::vector<int> off(n, 0);
                off[i] = s;
                out.push_back(std::move(off));
            }
        }
        std::sort(out.begin(), out.end());
        return out;
    }
    const std::size_t total = ipow(3, n);
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::vector<int> off = decode(std::vector<int>(n, 0), 1, idx);
        if (std::any_of(off.begin(), off.end(), [](int c) { return c != 0; })) {
            out.push_back(std::move(off));
        }
    }
    return out;
}

Box1::Box1(Point1 c, int r) : center(std::move(c)), radius(r) {
    if (r < 0) throw InvalidInput("box radius must be >= 0");
}

std::size_t Box1::size() const { return ipow(side(), dim()); }

bool Box1::contains(const Point1& x) const { return distance(x, center) <= radius; }

std::size_t Box1::index_of(const Point1& x) const {
    if (!contains(x)) throw OutOfDomain("point " + to_string(x) + " outside box");
    return encode(center.coords, radius, x.coords);
}

Point1 Box1::point_at(std::size_t index) const {
    return Point1(decode(center.coords, radius, index));
}

Box2::Box2(Point2 c, int r) : center(std::move(c)), radius(r) {
    if (r < 0) throw InvalidInput("box radius must be >= 0");
    require_same_dim(center.x1, center.x2);
}

std::size_t Box2::size() const { return ipow(side(), 2 * dim()); }

bool Box2::contains(const Point2& x) const { return distance(x, center) <= radius; }

std::size_t Box2::index_of(const Point2& x) const {
    if (!contains(x)) throw OutOfDomain("point " + to_string(x) + " outside box");
    return encode(flatten(center), radius, flatten(x));
}

Point2 Box2::point_at(std::size_t index) const {
    return unflatten(decode(flatten(center), radius, index));
}

Box2 permute(const Box2& b) { return Box2(permute(b.center), b.radius); }

int ceil_radius(double r) {
    const double nearest = std::round(r);
    if (std::abs(r - nearest) <= 1e-9 * std::max(1.0, std::abs(r))) {
        return static_cast<int>(nearest);
    }
    return static_cast<int>(std::ceil(r));
}

std::vector<Point1> enumerate_box(const Box1& b) {
    std::vector<Point1> out;
    out.reserve(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) out.push_back(b.point_at(i));
    return out;
}

std::vector<Point2> enumerate_box(const Box2& b) {
    std::vector<Point2> out;
    const auto n = b.size();
    out.reserve(n);
    const auto c = flatten(b.center);
    for (std::size_t i = 0; i < n; ++i) out.push_back(unflatten(decode(c, b.radius, i)));
    return out;
}

std::vector<Point1> interior_boundary(const Box1& b) {
    std::vector<Point1> out;
    if (b.radius == 0) return out;
    for (auto& p : enumerate_box(b)) {
        if (distance(p, b.center) == b.radius) out.push_back(std::move(p));
    }
    return out;
}

std::vector<Point2> interior_boundary(const Box2& b) {
    std::vector<Point2> out;
    if (b.radius == 0) return out;
    for (auto& p : enumerate_box(b)) {
        if (distance(p, b.center) == b.radius) out.push_back(std::move(p));
    }
    return out;
}

std::vector<Point2> exterior_boundary(const Box2& b) {
    std::vector<Point2> out;
    for (auto& p : enumerate_box(Box2(b.center, b.radius + 1))) {
        if (distance(p, b.center) == b.radius + 1) out.push_back(std::move(p));
    }
    return out;
}

int box_distance(const Box1& a, const Box1& b) {
    return std::max(0, distance(a.center, b.center) - a.radius - b.radius);
}

int box_distance(const Box2& a, const Box2& b) {
    return std::max(0, distance(a.center, b.center) - a.radius - b.radius);
}

bool box_contains(const Box2& outer, const Box2& inner) {
    return distance(outer.center, inner.center) + inner.radius <= outer.radius;
}

bool is_r_distant(const Box2& b1, const Box2& b2, int R) {
    return pair_separation(b1.center, b2.center) > 8 * R;
}

bool is_interactive(const Box2& b, int r0) {
    return distance(b.center.x1, b.center.x2) <= 2 * b.radius + r0;
}

Projections projections(const Box2& b) {
    Projections p{Box1(b.center.x1, b.radius), Box1(b.center.x2, b.radius), {}};
    auto first = enumerate_box(p.first);
    auto second = enumerate_box(p.second);
    std::vector<Point1> merged;
    merged.reserve(first.size() + second.size());
    std::set_union(first.begin(), first.end(), second.begin(), second.end(),
                   std::back_inserter(merged));
    p.merged = std::move(merged);
    return p;
}

std::vector<Point2> symmetrized_box(const Point2& u, int radius) {
    auto a = enumerate_box(Box2(u, radius));
    auto b = enumerate_box(Box2(permute(u), radius));
    std::vector<Point2> out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

int enlarged_radius(const Point2& u, int length) {
    return length + distance(permute(u), u);
}

std::vector<Point2> annulus(const Point2& u, int inner_length, int outer_length) {
    const int inner = enlarged_radius(u, inner_length);
    const int outer = enlarged_radius(u, outer_length);
    std::vector<Point2> out;
    for (auto& p : enumerate_box(Box2(u, outer))) {
        if (distance(p, u) > inner) out.push_back(std::move(p));
    }
    return out;
}

std::string to_string(const Point1& p) {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < p.coords.size(); ++i) os << (i ? "," : "") << p.coords[i];
    os << ')';
    return os.str();
}

std::string to_string(const Point2& p) {
    return "(" + to_string(p.x1) + "," + to_string(p.x2) + ")";
}

}  // namespace msalab
