#pragma once

#include <vector>

#include "msalab/classify.hpp"
#include "msalab/errors.hpp"
#include "msalab/disorder.hpp"
#include "msalab/geometry.hpp"
#include "oracles.hpp"

namespace th {

using namespace msalab;

inline Point1 p1(std::vector<int> c) { return Point1(std::move(c)); }
inline Point2 p2(std::vector<int> a, std::vector<int> b) { return Point2(p1(std::move(a)), p1(std::move(b))); }
inline Point2 origin2(int d) {
    return Point2(p1(std::vector<int>(d, 0)), p1(std::vector<int>(d, 0)));
}

// Sample covering the box and its exterior shell.
inline DisorderSample sample_around(const Box2& b, std::uint64_t seed, std::uint64_t trial = 0,
                                    DistributionSpec dist = DistributionSpec::uniform()) {
    const Box2 boxes[] = {Box2(b.center, b.radius + 1)};
    return sample_potential(dist, seed, trial, covering_box(boxes));
}

inline oracle::Matrix to_oracle(const Eigen::MatrixXd& m) {
    oracle::Matrix out(static_cast<std::size_t>(m.rows()),
                       std::vector<double>(static_cast<std::size_t>(m.cols())));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m(i, j);
    return out;
}

inline ModelContext ctx_for(const DisorderSample& s, double g, Adjacency adj = Adjacency::SupNorm,
                            InteractionSpec u = InteractionSpec::linear(1, 1.0)) {
    ModelContext c;
    c.sample = &s;
    c.interaction = u;
    c.g = g;
    c.adjacency = adj;
    return c;
}

}  // namespace th
