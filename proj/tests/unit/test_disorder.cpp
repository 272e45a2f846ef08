#include <doctest.h>

#include <cmath>

#include "helpers.hpp"

using namespace msalab;
using th::p1;
using th::p2;

TEST_CASE("uniform samples stay in the support and are reproducible") {
    const Box1 dom(p1({0}), 50);
    const auto a = sample_potential(DistributionSpec::uniform(), 11, 0, dom);
    const auto b = sample_potential(DistributionSpec::uniform(), 11, 0, dom);
    CHECK(a.values() == b.values());
    for (double v : a.values()) CHECK((v >= 0.0 && v <= 1.0));
    const auto c = sample_potential(DistributionSpec::uniform(), 11, 1, dom);
    CHECK(a.values() != c.values());
}

TEST_CASE("site-keyed values do not depend on the domain") {
    const auto small = sample_potential(DistributionSpec::uniform(), 4, 2, Box1(p1({0, 0}), 1));
    const auto big = sample_potential(DistributionSpec::uniform(), 4, 2, Box1(p1({3, -1}), 5));
    for (const auto& s : small.sites()) CHECK(small.at(s) == big.at(s));
}

TEST_CASE("uniform mean over 1e6 draws") {
    const auto s = sample_potential(DistributionSpec::uniform(), 99, 0, Box1(p1({0}), 500000));
    double sum = 0.0;
    for (double v : s.values()) sum += v;
    CHECK(std::abs(sum / static_cast<double>(s.size()) - 0.5) < 0.002);
}

TEST_CASE("distinct sites are uncorrelated across trials") {
    const int n = 100000;
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    const auto a = p1({0}), b = p1({1});
    for (int t = 0; t < n; ++t) {
        const double x = site_uniform(5, static_cast<std::uint64_t>(t), a);
        const double y = site_uniform(5, static_cast<std::uint64_t>(t), b);
        sx += x;
        sy += y;
        sxx += x * x;
        syy += y * y;
        sxy += x * y;
    }
    const double cov = sxy / n - (sx / n) * (sy / n);
    const double corr = cov / std::sqrt((sxx / n - sx * sx / n / n) * (syy / n - sy * sy / n / n));
    CHECK(std::abs(corr) < 0.01);
}

TEST_CASE("W shares the V(x) summand at a common coordinate") {
    const int n = 40000;
    double s1 = 0, s2 = 0, s12 = 0, sq = 0;
    for (int t = 0; t < n; ++t) {
        const auto s = sample_potential(DistributionSpec::uniform(), 8, static_cast<std::uint64_t>(t),
                                        Box1(p1({0}), 2));
        const double w1 = field_w(s, p2({0}, {1}));
        const double w2 = field_w(s, p2({0}, {2}));
        s1 += w1;
        s2 += w2;
        s12 += w1 * w2;
        sq += (w1 - 1.0) * (w1 - 1.0) * (w2 - 1.0) * (w2 - 1.0);
    }
    const double cov = s12 / n - (s1 / n) * (s2 / n);
    // Var(V) = 1/12 for uniform[0,1]
    const double sd = std::sqrt((sq / n - cov * cov) / n);
    CHECK(std::abs(cov - 1.0 / 12.0) < 3.0 * sd);
}

TEST_CASE("field W") {
    const auto s = make_sample({p1({0}), p1({1}), p1({2})}, {0.3, 0.4, 0.9});
    CHECK(field_w(s, p2({2}, {2})) == doctest::Approx(1.8));
    CHECK(field_w(s, p2({0}, {1})) == doctest::Approx(0.7));
    CHECK(field_w(s, p2({1}, {0})) == field_w(s, p2({0}, {1})));
    CHECK_THROWS_AS(s.at(p1({7})), OutOfDomain);
}

TEST_CASE("interaction U") {
    InteractionSpec u;
    u.r0 = 1;
    u.profile = {2.0, 1.0};
    CHECK(interaction_u(u, p2({0}, {0})) == 2.0);
    CHECK(interaction_u(u, p2({0}, {1})) == 1.0);
    CHECK(interaction_u(u, p2({0}, {5})) == 0.0);
    CHECK(interaction_u(u, p2({3}, {4})) == interaction_u(u, p2({4}, {3})));
    const auto lin = InteractionSpec::linear(3, 2.0);
    CHECK(lin.at_separation(0) == doctest::Approx(2.0));
    CHECK(lin.at_separation(2) == doctest::Approx(1.0));
    CHECK(lin.at_separation(4) == 0.0);
}

TEST_CASE("other admitted densities") {
    const auto tg = DistributionSpec::truncated_gaussian(-1.0, 1.0, 0.0, 0.5);
    CHECK(integrate_density(tg) == doctest::Approx(1.0).epsilon(1e-6));
    const auto s = sample_potential(tg, 3, 0, Box1(p1({0}), 1000));
    for (double v : s.values()) CHECK((v >= -1.0 && v <= 1.0));
    const auto pw = DistributionSpec::piecewise(0.0, 2.0, {1.0, 3.0});
    // jump at the bin edge costs Simpson its order
    CHECK(integrate_density(pw) == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(pw.cdf(1.0) == doctest::Approx(0.25));
    CHECK(pw.quantile(0.25) == doctest::Approx(1.0));
    CHECK_THROWS_AS(DistributionSpec::uniform(1.0, 0.0).validate(), InvalidInput);
}
