#include "msalab/disorder.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "msalab/errors.hpp"
#include "msalab/rng.hpp"

namespace msalab {

namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double normal_pdf(double z) {
    constexpr double kInvSqrt2Pi = 0.39894228040143267794;
    return kInvSqrt2Pi * std::exp(-0.5 * z * z);
}

// Packs the coordinates into 64 bits; injective for d <= 2 and mixed otherwise.
std::uint64_t site_key(const Point1& site) {
    if (site.dim() == 1) return static_cast<std::uint32_t>(site[0]);
    if (site.dim() == 2) {
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(site[0])) << 32) |
               static_cast<std::uint32_t>(site[1]);
    }
    std::uint64_t h = 0x243f6a8885a308d3ULL ^ static_cast<std::uint64_t>(site.dim());
    for (int c : site.coords) {
        h ^= static_cast<std::uint32_t>(c);
        h += 0x9e3779b97f4a7c15ULL;
        h = (h ^ (h >> 30)) * 0xbf58476d1ce4e5b9ULL;
        h = (h ^ (h >> 27)) * 0x94d049bb133111ebULL;
        h ^= h >> 31;
    }
    return h;
}

}  // namespace

std::string to_string(DistributionKind k) {
    switch (k) {
        case DistributionKind::Uniform: return "uniform";
        case DistributionKind::TruncatedGaussian: return "truncated-gaussian";
        case DistributionKind::PiecewiseDensity: return "piecewise-density";
    }
    return "uniform";
}

DistributionKind distribution_kind_from_string(const std::string& s) {
    if (s == "uniform") return DistributionKind::Uniform;
    if (s == "truncated-gaussian") return DistributionKind::TruncatedGaussian;
    if (s == "piecewise-density") return DistributionKind::PiecewiseDensity;
    throw InvalidInput("unknown distribution kind '" + s + "'");
}

DistributionSpec DistributionSpec::uniform(double a, double b) {
    DistributionSpec s;
    s.kind = DistributionKind::Uniform;
    s.a = a;
    s.b = b;
    return s;
}

DistributionSpec DistributionSpec::truncated_gaussian(double a, double b, double mean,
                                                      double stddev) {
    DistributionSpec s;
    s.kind = DistributionKind::TruncatedGaussian;
    s.a = a;
    s.b = b;
    s.mean = mean;
    s.stddev = stddev;
    return s;
}

DistributionSpec DistributionSpec::piecewise(double a, double b, std::vector<double> weights) {
    DistributionSpec s;
    s.kind = DistributionKind::PiecewiseDensity;
    s.a = a;
    s.b = b;
    s.weights = std::move(weights);
    return s;
}

void DistributionSpec::validate() const {
    if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) {
        throw InvalidInput("distribution support must be a finite interval with a < b");
    }
    switch (kind) {
        case DistributionKind::Uniform: break;
        case DistributionKind::TruncatedGaussian:
            if (!std::isfinite(mean) || !(stddev > 0.0) || !std::isfinite(stddev)) {
                throw InvalidInput("truncated-gaussian needs finite mean and stddev > 0");
            }
            if (normal_cdf((b - mean) / stddev) - normal_cdf((a - mean) / stddev) <= 1e-300) {
                throw InvalidInput("truncated-gaussian has no mass on the support");
            }
            break;
        case DistributionKind::PiecewiseDensity: {
            if (weights.empty()) throw InvalidInput("piecewise-density needs at least one bin");
            double total = 0.0;
            for (double w : weights) {
                if (!(w >= 0.0) || !std::isfinite(w)) {
                    throw InvalidInput("piecewise-density weights must be finite and >= 0");
                }
                total += w;
            }
            if (!(total > 0.0)) throw InvalidInput("piecewise-density weights sum to zero");
            break;
        }
    }
}

double DistributionSpec::density(double x) const {
    if (x < a || x > b) return 0.0;
    switch (kind) {
        case DistributionKind::Uniform: return 1.0 / (b - a);
        case DistributionKind::TruncatedGaussian: {
            const double z = normal_cdf((b - mean) / stddev) - normal_cdf((a - mean) / stddev);
            return normal_pdf((x - mean) / stddev) / (stddev * z);
        }
        case DistributionKind::PiecewiseDensity: {
            const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
            const double width = (b - a) / static_cast<double>(weights.size());
            auto bin = static_cast<std::size_t>((x - a) / width);
            bin = std::min(bin, weights.size() - 1);
            return weights[bin] / (total * width);
        }
    }
    return 0.0;
}

double DistributionSpec::max_density() const {
    switch (kind) {
        case DistributionKind::Uniform: return 1.0 / (b - a);
        case DistributionKind::TruncatedGaussian: {
            const double peak = std::clamp(mean, a, b);
            return density(peak);
        }
        case DistributionKind::PiecewiseDensity: {
            const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
            const double width = (b - a) / static_cast<double>(weights.size());
            return *std::max_element(weights.begin(), weights.end()) / (total * width);
        }
    }
    return 0.0;
}

double DistributionSpec::cdf(double x) const {
    if (x <= a) return 0.0;
    if (x >= b) return 1.0;
    switch (kind) {
        case DistributionKind::Uniform: return (x - a) / (b - a);
        case DistributionKind::TruncatedGaussian: {
            const double lo = normal_cdf((a - mean) / stddev);
            const double hi = normal_cdf((b - mean) / stddev);
            return (normal_cdf((x - mean) / stddev) - lo) / (hi - lo);
        }
        case DistributionKind::PiecewiseDensity: {
            const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
            const double width = (b - a) / static_cast<double>(weights.size());
            double acc = 0.0;
            for (std::size_t i = 0; i < weights.size(); ++i) {
                const double left = a + width * static_cast<double>(i);
                if (x <= left + width) return (acc + weights[i] * (x - left) / width) / total;
                acc += weights[i];
            }
            return 1.0;
        }
    }
    return 0.0;
}

double DistributionSpec::quantile(double u) const {
    u = std::clamp(u, 0.0, 1.0);
    switch (kind) {
        case DistributionKind::Uniform: return a + (b - a) * u;
        case DistributionKind::PiecewiseDensity: {
            const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
            const double width = (b - a) / static_cast<double>(weights.size());
            double target = u * total;
            for (std::size_t i = 0; i < weights.size(); ++i) {
                if (weights[i] > 0.0 && target <= weights[i]) {
                    return a + width * (static_cast<double>(i) + target / weights[i]);
                }
                target -= weights[i];
            }
            return b;
        }
        case DistributionKind::TruncatedGaussian: {
            double lo = a;
            double hi = b;
            for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + std::abs(lo)); ++it) {
                const double mid = 0.5 * (lo + hi);
                (cdf(mid) < u ? lo : hi) = mid;
            }
            return 0.5 * (lo + hi);
        }
    }
    return a;
}

double DistributionSpec::expectation() const {
    const int n = 20000;
    const double h = (b - a) / n;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = a + (i + 0.5) * h;
        acc += x * density(x);
    }
    return acc * h;
}

double DistributionSpec::variance() const {
    const double mu = expectation();
    const int n = 20000;
    const double h = (b - a) / n;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = a + (i + 0.5) * h;
        acc += (x - mu) * (x - mu) * density(x);
    }
    return acc * h;
}

double integrate_density(const DistributionSpec& spec, int panels) {
    if (panels % 2) ++panels;
    // Piecewise densities jump at bin edges, so integrate bin by bin.
    std::vector<double> edges{spec.a, spec.b};
    if (spec.kind == DistributionKind::PiecewiseDensity) {
        edges.clear();
        const auto nb = spec.weights.size();
        for (std::size_t i = 0; i <= nb; ++i) {
            edges.push_back(spec.a + (spec.b - spec.a) * static_cast<double>(i) /
                                         static_cast<double>(nb));
        }
    }
    double total = 0.0;
    for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
        const double lo = edges[e];
        const double hi = edges[e + 1];
        const double h = (hi - lo) / panels;
        const double eps = 1e-12 * h;
        auto f = [&](double x) { return spec.density(std::clamp(x, lo + eps, hi - eps)); };
        double s = f(lo) + f(hi);
        for (int i = 1; i < panels; ++i) s += f(lo + i * h) * (i % 2 ? 4.0 : 2.0);
        total += s * h / 3.0;
    }
    return total;
}

DisorderSample::DisorderSample(std::uint64_t seed, std::uint64_t trial, std::vector<Point1> sites,
                               std::vector<double> values)
    : seed_(seed), trial_(trial), sites_(std::move(sites)), values_(std::move(values)) {
    if (sites_.size() != values_.size()) throw InvalidInput("sites/values length mismatch");
    index_.reserve(sites_.size());
    for (std::size_t i = 0; i < sites_.size(); ++i) {
        if (!sites_.empty() && sites_[i].dim() != sites_.front().dim()) {
            throw InvalidInput("sample sites have mixed dimensions");
        }
        if (!index_.emplace(sites_[i], i).second) {
            throw InvalidInput("duplicate site " + to_string(sites_[i]));
        }
    }
}

bool DisorderSample::contains(const Point1& x) const { return index_.count(x) != 0; }

double DisorderSample::at(const Point1& x) const {
    const auto it = index_.find(x);
    if (it == index_.end()) throw OutOfDomain("site " + to_string(x) + " outside sampled domain");
    return values_[it->second];
}

DisorderSample DisorderSample::with_value(const Point1& x, double v) const {
    auto sites = sites_;
    auto values = values_;
    const auto it = index_.find(x);
    if (it == index_.end()) {
        sites.push_back(x);
        values.push_back(v);
    } else {
        values[it->second] = v;
    }
    return DisorderSample(seed_, trial_, std::move(sites), std::move(values));
}

double site_uniform(std::uint64_t seed, std::uint64_t trial, const Point1& site,
                    std::uint32_t draw) {
    const std::uint64_t key = site_key(site);
    const auto out = philox4x32({static_cast<std::uint32_t>(trial),
                                 static_cast<std::uint32_t>(trial >> 32) ^ (draw * 0x9E3779B9u),
                                 static_cast<std::uint32_t>(key),
                                 static_cast<std::uint32_t>(key >> 32)},
                                philox_key(seed ^ (static_cast<std::uint64_t>(draw) << 48)));
    return to_unit_double(out[0], out[1]);
}

DisorderSample sample_potential(const DistributionSpec& spec, std::uint64_t seed,
                                std::uint64_t trial, std::span<const Point1> domain) {
    spec.validate();
    std::vector<Point1> sites(domain.begin(), domain.end());
    std::sort(sites.begin(), sites.end());
    sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
    std::vector<double> values;
    values.reserve(sites.size());
    for (const auto& s : sites) values.push_back(spec.quantile(site_uniform(seed, trial, s)));
    return DisorderSample(seed, trial, std::move(sites), std::move(values));
}

DisorderSample sample_potential(const DistributionSpec& spec, std::uint64_t seed,
                                std::uint64_t trial, const Box1& domain) {
    const auto sites = enumerate_box(domain);
    return sample_potential(spec, seed, trial, std::span<const Point1>(sites));
}

DisorderSample make_sample(std::vector<Point1> sites, std::vector<double> values) {
    return DisorderSample(0, 0, std::move(sites), std::move(values));
}

double field_w(const DisorderSample& sample, const Point2& x) {
    return sample.at(x.x1) + sample.at(x.x2);
}

InteractionSpec InteractionSpec::linear(int r0, double u0) {
    InteractionSpec s;
    s.r0 = r0;
    s.profile.resize(static_cast<std::size_t>(r0) + 1);
    for (int i = 0; i <= r0; ++i) {
        s.profile[i] = u0 * (1.0 - static_cast<double>(i) / static_cast<double>(r0 + 1));
    }
    return s;
}

InteractionSpec InteractionSpec::none(int r0) {
    InteractionSpec s;
    s.r0 = r0;
    s.profile.assign(static_cast<std::size_t>(r0) + 1, 0.0);
    return s;
}

void InteractionSpec::validate() const {
    if (r0 < 1) throw InvalidInput("interaction range r0 must be >= 1");
    if (profile.size() != static_cast<std::size_t>(r0) + 1) {
        throw InvalidInput("interaction profile must list values for s = 0..r0");
    }
    for (double v : profile) {
        if (!std::isfinite(v)) throw InvalidInput("interaction profile must be finite");
    }
}

double InteractionSpec::bound() const {
    double m = 0.0;
    for (double v : profile) m = std::max(m, std::abs(v));
    return m;
}

double InteractionSpec::at_separation(int s) const {
    if (s < 0 || s > r0 || static_cast<std::size_t>(s) >= profile.size()) return 0.0;
    return profile[static_cast<std::size_t>(s)];
}

double interaction_u(const InteractionSpec& spec, const Point2& x) {
    return spec.at_separation(distance(x.x1, x.x2));
}

Box1 covering_box(std::span<const Box2> boxes) {
    if (boxes.empty()) throw InvalidInput("covering_box needs at least one box");
    const int d = boxes.front().dim();
    std::vector<int> lo(d, 0), hi(d, 0);
    bool first = true;
    for (const auto& b : boxes) {
        for (const Point1* c : {&b.center.x1, &b.center.x2}) {
            for (int i = 0; i < d; ++i) {
                const int l = (*c)[i] - b.radius;
                const int h = (*c)[i] + b.radius;
                lo[i] = first ? l : std::min(lo[i], l);
                hi[i] = first ? h : std::max(hi[i], h);
            }
            first = false;
        }
    }
    std::vector<int> center(d);
    int radius = 0;
    for (int i = 0; i < d; ++i) {
        center[i] = lo[i] + (hi[i] - lo[i]) / 2;
        radius = std::max({radius, center[i] - lo[i], hi[i] - center[i]});
    }
    return Box1(Point1(std::move(center)), radius);
}

}  // namespace msalab
