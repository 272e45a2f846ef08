#pragma once

// Random external potential V, the two-particle field W and the interaction U.

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "msalab/geometry.hpp"

namespace msalab {

enum class DistributionKind { Uniform, TruncatedGaussian, PiecewiseDensity };

std::string to_string(DistributionKind k);
DistributionKind distribution_kind_from_string(const std::string& s);

/// Marginal law of V(x): bounded density with compact support [a, b].
struct DistributionSpec {
    DistributionKind kind = DistributionKind::Uniform;
    double a = 0.0;
    double b = 1.0;
    double mean = 0.0;    // truncated-gaussian: location of the parent normal
    double stddev = 1.0;  // truncated-gaussian: scale of the parent normal
    std::vector<double> weights;  // piecewise-density: relative mass of equal-width bins

    static DistributionSpec uniform(double a = 0.0, double b = 1.0);
    static DistributionSpec truncated_gaussian(double a, double b, double mean, double stddev);
    static DistributionSpec piecewise(double a, double b, std::vector<double> weights);

    /// Throws InvalidInput unless the parameters describe a bounded, compactly
    /// supported, normalisable density.
    void validate() const;

    double density(double x) const;
    double max_density() const;
    double cdf(double x) const;
    /// Inverse CDF of u in [0, 1).
    double quantile(double u) const;
    double expectation() const;
    double variance() const;

    bool operator==(const DistributionSpec&) const = default;
};

/// Numerical integral of the density over [a, b] (composite Simpson); used to
/// check normalisation.
double integrate_density(const DistributionSpec& spec, int panels = 20000);

/// One realisation of {V(x)} on a finite set of sites.  The value at a site is
/// a pure function of (seed, trial, coordinates).
class DisorderSample {
public:
    DisorderSample() = default;
    DisorderSample(std::uint64_t seed, std::uint64_t trial, std::vector<Point1> sites,
                   std::vector<double> values);

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t trial() const noexcept { return trial_; }
    const std::vector<Point1>& sites() const noexcept { return sites_; }
    const std::vector<double>& values() const noexcept { return values_; }
    std::size_t size() const noexcept { return sites_.size(); }
    bool empty() const noexcept { return sites_.empty(); }

    bool contains(const Point1& x) const;
    /// V(x); throws OutOfDomain for sites outside the sampled domain.
    double at(const Point1& x) const;

    /// Copy with V replaced at one site (used by tests to build hand-made fields).
    DisorderSample with_value(const Point1& x, double v) const;

private:
    std::uint64_t seed_ = 0;
    std::uint64_t trial_ = 0;
    std::vector<Point1> sites_;
    std::vector<double> values_;
    std::unordered_map<Point1, std::size_t, Point1Hash> index_;
};

/// Uniform [0, 1) variate keyed by (seed, trial, site, draw).
double site_uniform(std::uint64_t seed, std::uint64_t trial, const Point1& site,
                    std::uint32_t draw = 0);

DisorderSample sample_potential(const DistributionSpec& spec, std::uint64_t seed,
                                std::uint64_t trial, std::span<const Point1> domain);
DisorderSample sample_potential(const DistributionSpec& spec, std::uint64_t seed,
                                std::uint64_t trial, const Box1& domain);

/// Build a sample from explicit values (no randomness); sites must be distinct.
DisorderSample make_sample(std::vector<Point1> sites, std::vector<double> values);

/// W(x) = V(x1) + V(x2)
double field_w(const DisorderSample& sample, const Point2& x);

/// Finite-range interaction depending on x only through s = ||x1 - x2||.
struct InteractionSpec {
    int r0 = 1;
    std::vector<double> profile;  // profile[s] for s = 0..r0

    /// U(s) = u0 (1 - s / (r0 + 1)).
    static InteractionSpec linear(int r0, double u0);
    static InteractionSpec none(int r0 = 1);

    void validate() const;
    double bound() const;
    double at_separation(int s) const;

    bool operator==(const InteractionSpec&) const = default;
};

double interaction_u(const InteractionSpec& spec, const Point2& x);

/// Smallest single-particle box containing both projections of every given box.
Box1 covering_box(std::span<const Box2> boxes);

}  // namespace msalab
