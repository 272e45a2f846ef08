#include "msalab/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "msalab/errors.hpp"
#include "msalab/resolvent.hpp"
#include "msalab/rng.hpp"

namespace msalab {

namespace {

constexpr std::uint64_t kPlacementSalt = 0x706c6163656d656eULL;
constexpr std::uint64_t kBernoulliSalt = 0x6265726e6f756c6cULL;
constexpr std::uint64_t kBootstrapSalt = 0x626f6f7473747270ULL;

Eigen::VectorXd eigenvalues_only(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw NumericError("eigensolver did not converge");
    return solver.eigenvalues();
}

std::vector<double> to_vector(const Eigen::VectorXd& v) {
    return {v.data(), v.data() + v.size()};
}

double median(std::vector<double> v) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    const auto mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    double m = v[mid];
    if (v.size() % 2 == 0) {
        m = 0.5 * (m + *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid)));
    }
    return m;
}

enum class BoxType { Any, Interactive, NonInteractive };

Point1 random_point1(PhiloxStream& rng, int d, int region) {
    Point1 p;
    p.coords.resize(static_cast<std::size_t>(d));
    for (auto& c : p.coords) c = static_cast<int>(rng.uniform_int(-region, region));
    return p;
}

Box2 place_one(PhiloxStream& rng, int d, int L, BoxType type, int r0, int region,
               int attempts) {
    for (int a = 0; a < attempts; ++a) {
        Point1 u1 = random_point1(rng, d, region);
        Point1 u2;
        if (type == BoxType::Interactive) {
            // offset inside the layer ||u1 - u2|| <= 2L + r0
            const Point1 off = random_point1(rng, d, 2 * L + r0);
            u2 = u1;
            for (int i = 0; i < d; ++i) u2.coords[i] += off.coords[i];
        } else {
            u2 = random_point1(rng, d, region);
        }
        Box2 b(Point2(u1, u2), L);
        const bool inter = is_interactive(b, r0);
        if (type == BoxType::NonInteractive && inter) continue;
        return b;
    }
    throw PlacementError("could not place a non-interactive box within the placement region");
}

std::pair<Box2, Box2> place_pair(PhiloxStream& rng, int d, int L, int R, BoxType ta, BoxType tb,
                                 int r0, int region, int attempts) {
    if (2 * region <= 8 * R) {
        throw PlacementError("placement region " + std::to_string(region) +
                             " too small for " + std::to_string(R) + "-distant boxes");
    }
    for (int a = 0; a < attempts; ++a) {
        const Box2 x = place_one(rng, d, L, ta, r0, region, attempts);
        const Box2 y = place_one(rng, d, L, tb, r0, region, attempts);
        if (is_r_distant(x, y, R)) return {x, y};
    }
    throw PlacementError("could not place a pair of " + std::to_string(R) +
                         "-distant boxes within the placement region");
}

int auto_region(const Placement& p, int L, int R, int r0) {
    if (p.region > 0) return p.region;
    return 8 * R + 2 * L + r0 + 1;
}

DisorderSample sample_for(const ModelSpec& model, std::uint64_t seed, std::uint64_t trial,
                          std::span<const Box2> boxes) {
    return sample_potential(model.distribution, seed, trial, covering_box(boxes));
}

ModelContext context_for(const ModelSpec& model, const DisorderSample& sample) {
    ModelContext ctx;
    ctx.sample = &sample;
    ctx.interaction = model.interaction;
    ctx.g = model.g;
    ctx.adjacency = model.adjacency;
    return ctx;
}

bool any_both(const std::vector<char>& a, const std::vector<char>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] && b[i]) return true;
    }
    return false;
}

std::vector<char> box_singular_on_grid(const ModelContext& ctx, const Box2& box,
                                       const std::vector<double>& grid, double m) {
    const auto op = ctx.two_particle(box);
    return singular_on_grid(op, diagonalize(op), grid, m);
}

double s_exponent(const ScheduleParams& p) {
    return p.p_tilde ? (*p.p_tilde - 2.0 * (1.0 + p.alpha) * p.d) / p.alpha
                     : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

void ModelSpec::validate() const {
    if (d < 1) throw InvalidInput("dimension d must be >= 1");
    distribution.validate();
    interaction.validate();
    if (!std::isfinite(g)) throw InvalidInput("coupling g must be finite");
}

std::string to_string(EventKind k) {
    switch (k) {
        case EventKind::S0: return "S0";
        case EventKind::SSk: return "SSk";
        case EventKind::ISk: return "ISk";
        case EventKind::W1: return "W1";
        case EventKind::W2: return "W2";
        case EventKind::NTks: return "NTks";
        case EventKind::B: return "B";
        case EventKind::T: return "T";
        case EventKind::Sigma: return "Sigma";
        case EventKind::ResonantPair: return "resonant-pair";
        case EventKind::MGe2: return "M>=2";
        case EventKind::NGe2n: return "N>=2n";
        case EventKind::KGe2n2: return "K>=2n+2";
        case EventKind::Bernoulli: return "bernoulli";
    }
    return "?";
}

EventKind event_kind_from_string(const std::string& s) {
    for (auto k : {EventKind::S0, EventKind::SSk, EventKind::ISk, EventKind::W1, EventKind::W2,
                   EventKind::NTks, EventKind::B, EventKind::T, EventKind::Sigma,
                   EventKind::ResonantPair, EventKind::MGe2, EventKind::NGe2n,
                   EventKind::KGe2n2, EventKind::Bernoulli}) {
        if (to_string(k) == s) return k;
    }
    throw InvalidInput("unknown event kind '" + s + "'");
}

void EventSpec::validate() const {
    if (k < 0) throw InvalidInput("scale index k must be >= 0");
    if (!(I.hi >= I.lo)) throw InvalidInput("energy interval has hi < lo");
    if (scale && *scale < 0) throw InvalidInput("scale must be >= 0");
    if (n < 1) throw InvalidInput("n must be >= 1");
    if (!(bernoulli_p >= 0.0 && bernoulli_p <= 1.0)) throw InvalidInput("bernoulli_p outside [0,1]");
}

std::string to_string(Comparison c) {
    switch (c) {
        case Comparison::Pass: return "pass";
        case Comparison::Fail: return "fail";
        case Comparison::Indeterminate: return "indeterminate";
        case Comparison::None: return "none";
    }
    return "none";
}

Comparison comparison_from_string(const std::string& s) {
    for (auto c : {Comparison::Pass, Comparison::Fail, Comparison::Indeterminate, Comparison::None}) {
        if (to_string(c) == s) return c;
    }
    throw InvalidInput("unknown comparison '" + s + "'");
}

WilsonInterval wilson_interval(std::size_t successes, std::size_t trials, double z) {
    if (trials == 0) throw InvalidInput("Wilson interval needs at least one trial");
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double centre = (p + z2 / (2.0 * n)) / denom;
    const double half = z / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
    return {std::max(0.0, std::min(p, centre - half)), std::min(1.0, std::max(p, centre + half))};
}

Comparison compare_to_bound(const WilsonInterval& ci, std::optional<double> bound) {
    if (!bound || !std::isfinite(*bound)) return Comparison::None;
    if (ci.hi < *bound) return Comparison::Pass;
    if (ci.lo > *bound) return Comparison::Fail;
    return Comparison::Indeterminate;
}

std::vector<char> singular_on_grid(const FiniteOperator& op, const SpectralData& spectral,
                                   const std::vector<double>& grid, double m) {
    const Box2& box = op.box2();
    std::vector<char> out(grid.size(), 0);
    if (box.radius == 0) return out;
    const double threshold = std::exp(-m * box.radius);
    const auto boundary = interior_boundary(box);
    const auto ic = static_cast<Eigen::Index>(box.index_of(box.center));
    // A(y, s) = psi_s(center) psi_s(y)
    Eigen::MatrixXd A(static_cast<Eigen::Index>(boundary.size()), spectral.eigenvectors.cols());
    for (std::size_t i = 0; i < boundary.size(); ++i) {
        const auto iy = static_cast<Eigen::Index>(box.index_of(boundary[i]));
        A.row(static_cast<Eigen::Index>(i)) =
            spectral.eigenvectors.row(ic).cwiseProduct(spectral.eigenvectors.row(iy));
    }
    const double scale = 1.0 + spectral.norm;
    for (std::size_t e = 0; e < grid.size(); ++e) {
        const Eigen::ArrayXd denom = spectral.eigenvalues.array() - grid[e];
        if (denom.abs().minCoeff() <= kResonanceGuard * (scale + std::abs(grid[e]))) {
            out[e] = 1;
            continue;
        }
        const Eigen::VectorXd g = A * denom.inverse().matrix();
        out[e] = g.cwiseAbs().maxCoeff() > threshold ? 1 : 0;
    }
    return out;
}

Windows resonance_windows(std::span<const double> eigenvalues, int L, double beta) {
    const double w = std::exp(-std::pow(static_cast<double>(L), beta));
    Windows out;
    out.reserve(eigenvalues.size());
    for (double e : eigenvalues) out.emplace_back(e - w, e + w);
    return out;
}

Windows merge_windows(Windows w) {
    std::sort(w.begin(), w.end());
    Windows out;
    for (const auto& iv : w) {
        // open intervals: (a,b) and (b,c) do not merge
        if (!out.empty() && iv.first < out.back().second) {
            out.back().second = std::max(out.back().second, iv.second);
        } else {
            out.push_back(iv);
        }
    }
    return out;
}

bool windows_intersect(const Windows& a, const Windows& b, const Interval& I) {
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        const double lo = std::max(a[i].first, b[j].first);
        const double hi = std::min(a[i].second, b[j].second);
        if (lo < hi && lo < I.hi && hi > I.lo) return true;
        if (a[i].second < b[j].second) {
            ++i;
        } else {
            ++j;
        }
    }
    return false;
}

Windows non_cnr_windows(const ModelContext& ctx, const Box2& box, int J, int Lk, double beta) {
    Windows all = resonance_windows(to_vector(eigenvalues_only(ctx.two_particle(box).matrix)),
                                    box.radius, beta);
    for (int j = 1; j <= J; ++j) {
        const int r = cnr_radius(j, Lk);
        if (r > box.radius) break;
        for (const auto& y : enumerate_box(Box2(box.center, box.radius - r))) {
            const auto w = resonance_windows(
                to_vector(eigenvalues_only(ctx.two_particle(Box2(y, r)).matrix)), r, beta);
            all.insert(all.end(), w.begin(), w.end());
        }
    }
    return merge_windows(std::move(all));
}

namespace {

struct KindSetup {
    int L = 0;       // radius of the boxes the event is about
    int R = 0;       // separation scale for pair events
    int Lsub = 0;    // sub-box scale for counter events
    double m = 0.0;  // singularity mass
    std::optional<double> bound;
    std::string bound_label;
    bool grid = false;
};

KindSetup setup_for(const EventSpec& spec, const ScaleSchedule& sched) {
    const auto& p = sched.params;
    const int d = p.d;
    KindSetup s;
    auto Lk = [&](int k) { return sched.length(k); };
    switch (spec.kind) {
        case EventKind::S0:
            s.L = Lk(0);
            s.m = spec.mass.value_or(sched.mass(0));
            s.bound = std::pow(s.L, -2.0 * p.p);
            s.bound_label = "L_0^{-2p}";
            s.grid = true;
            break;
        case EventKind::SSk:
        case EventKind::ISk:
            s.L = s.R = Lk(spec.k);
            s.m = spec.mass.value_or(sched.mass(spec.k));
            s.bound = std::pow(s.L, -2.0 * p.p);
            s.bound_label = "L_k^{-2p}";
            s.grid = true;
            break;
        case EventKind::W1:
        case EventKind::W2:
        case EventKind::ResonantPair:
            s.L = s.R = spec.scale.value_or(Lk(spec.k));
            s.bound = std::pow(s.L, -p.q);
            s.bound_label = "l^{-q}";
            break;
        case EventKind::NTks: {
            s.L = Lk(spec.k);
            s.m = spec.m_hat.value_or(2.0 * p.m0);
            const double se = s_exponent(p);
            if (std::isfinite(se)) s.bound = std::pow(s.L, -se);
            s.bound_label = "L_k^{-s}";
            break;
        }
        case EventKind::B:
        case EventKind::T:
        case EventKind::Sigma: {
            s.L = s.R = Lk(spec.k + 1);
            s.Lsub = Lk(spec.k);
            s.m = spec.mass.value_or(sched.mass(spec.k + 1));
            if (spec.kind == EventKind::B) {
                s.bound = std::pow(s.L, -2.0 * p.p);
                s.bound_label = "L_{k+1}^{-2p}";
                s.grid = true;
            } else if (spec.kind == EventKind::T) {
                const double se = s_exponent(p);
                if (std::isfinite(se)) s.bound = std::pow(s.L, -se);
                s.bound_label = "L_{k+1}^{-s}";
            } else {
                s.bound = std::pow(s.L, -p.q + 2.0);
                s.bound_label = "L_{k+1}^{-q+2}";
            }
            break;
        }
        case EventKind::MGe2:
        case EventKind::NGe2n:
        case EventKind::KGe2n2: {
            s.L = Lk(spec.k + 1);
            s.Lsub = s.R = Lk(spec.k);
            s.m = spec.mass.value_or(sched.mass(spec.k));
            const double l = s.Lsub;
            const double n = spec.n;
            const double mb = p.p_tilde ? std::pow(l, 4.0 * d * p.alpha - 2.0 * *p.p_tilde)
                                        : std::numeric_limits<double>::quiet_NaN();
            const double nb = std::pow(l, 2.0 * n * (1.0 + d * p.alpha) - 2.0 * n * p.p);
            if (spec.kind == EventKind::MGe2) {
                if (p.p_tilde) s.bound = mb;
                s.bound_label = "L_k^{4d alpha - 2p~}";
            } else if (spec.kind == EventKind::NGe2n) {
                s.bound = nb;
                s.bound_label = "L_k^{2n(1+d alpha) - 2np}";
            } else {
                if (p.p_tilde) s.bound = mb + nb;
                s.bound_label = "L_k^{4d alpha - 2p~} + L_k^{2n(1+d alpha) - 2np}";
            }
            s.grid = true;
            break;
        }
        case EventKind::Bernoulli:
            break;
    }
    return s;
}

ProbeTrial evaluate_mixed(const ModelSpec& model, const ScaleSchedule& sched, int k,
                          const Interval& I, const Placement& placement, std::uint64_t seed,
                          std::size_t trial, const KindSetup& s, bool need_b, bool need_t,
                          bool need_sigma) {
    const int r0 = model.interaction.r0;
    PhiloxStream rng(seed ^ kPlacementSalt, trial);
    const int region = auto_region(placement, s.L, s.R, r0);
    const auto [x, y] = place_pair(rng, model.d, s.L, s.R, BoxType::Interactive,
                                   BoxType::NonInteractive, r0, region, placement.max_attempts);
    const std::array<Box2, 2> boxes{x, y};
    const auto sample = sample_for(model, seed, trial, boxes);
    const auto ctx = context_for(model, sample);
    const double beta = sched.params.beta;
    ProbeTrial out;
    if (need_b) {
        const auto grid = energy_grid(I, s.L, beta);
        out.b = any_both(box_singular_on_grid(ctx, x, grid, s.m),
                         box_singular_on_grid(ctx, y, grid, s.m));
    }
    if (need_t) {
        const double m_hat = 2.0 * sched.params.m0;
        out.t = !is_nontunnelling(ctx, y, m_hat).nt;
    }
    if (need_sigma) {
        const int J = sched.params.J;
        out.sigma = windows_intersect(non_cnr_windows(ctx, x, J, s.Lsub, beta),
                                      non_cnr_windows(ctx, y, J, s.Lsub, beta), I);
    }
    out.rest = out.b && !out.t && !out.sigma;
    (void)k;
    return out;
}

bool evaluate_counter(const ModelSpec& model, const EventSpec& spec, const ScaleSchedule& sched,
                      std::uint64_t seed, std::size_t trial, const KindSetup& s) {
    const int r0 = model.interaction.r0;
    PhiloxStream rng(seed ^ kPlacementSalt, trial);
    const int region = auto_region(spec.placement, s.L, 0, r0);
    const Box2 parent = place_one(rng, model.d, s.L, BoxType::Any, r0, region,
                                  spec.placement.max_attempts);
    const std::array<Box2, 1> boxes{parent};
    const auto sample = sample_for(model, seed, trial, boxes);
    const auto ctx = context_for(model, sample);
    const auto grid = energy_grid(spec.I, s.Lsub, sched.params.beta);

    struct Cand {
        Point2 c;
        bool inter;
        std::vector<char> sing;
    };
    std::vector<Cand> cands;
    for (const auto& c : enumerate_box(Box2(parent.center, parent.radius - s.Lsub))) {
        const Box2 sub(c, s.Lsub);
        auto sing = box_singular_on_grid(ctx, sub, grid, s.m);
        if (std::none_of(sing.begin(), sing.end(), [](char v) { return v != 0; })) continue;
        cands.push_back({c, is_interactive(sub, r0), std::move(sing)});
    }
    const std::size_t need = spec.kind == EventKind::MGe2    ? 2
                             : spec.kind == EventKind::NGe2n ? 2 * static_cast<std::size_t>(spec.n)
                                                             : 2 * static_cast<std::size_t>(spec.n) + 2;
    for (std::size_t e = 0; e < grid.size(); ++e) {
        std::vector<Point2> chosen;
        for (const auto& c : cands) {
            if (!c.sing[e]) continue;
            if (spec.kind == EventKind::MGe2 && c.inter) continue;
            if (spec.kind == EventKind::NGe2n && !c.inter) continue;
            chosen.push_back(c.c);
        }
        if (chosen.size() < need) continue;
        if (max_separated_subset(chosen, s.Lsub).size >= need) return true;
    }
    return false;
}

bool evaluate_trial(const ModelSpec& model, const EventSpec& spec, const ScaleSchedule& sched,
                    std::uint64_t seed, std::size_t trial, const KindSetup& s) {
    const int r0 = model.interaction.r0;
    const double beta = sched.params.beta;
    PhiloxStream rng(seed ^ kPlacementSalt, trial);
    switch (spec.kind) {
        case EventKind::Bernoulli: {
            PhiloxStream b(seed ^ kBernoulliSalt, trial);
            return b.uniform() < spec.bernoulli_p;
        }
        case EventKind::S0: {
            const int region = auto_region(spec.placement, s.L, 0, r0);
            const Box2 x =
                place_one(rng, model.d, s.L, BoxType::Any, r0, region, spec.placement.max_attempts);
            const std::array<Box2, 1> boxes{x};
            const auto sample = sample_for(model, seed, trial, boxes);
            const auto ctx = context_for(model, sample);
            const auto sing = box_singular_on_grid(ctx, x, energy_grid(spec.I, s.L, beta), s.m);
            return std::any_of(sing.begin(), sing.end(), [](char v) { return v != 0; });
        }
        case EventKind::SSk:
        case EventKind::ISk: {
            const auto type = spec.kind == EventKind::ISk ? BoxType::Interactive : BoxType::Any;
            const int region = auto_region(spec.placement, s.L, s.R, r0);
            const auto [x, y] = place_pair(rng, model.d, s.L, s.R, type, type, r0, region,
                                           spec.placement.max_attempts);
            const std::array<Box2, 2> boxes{x, y};
            const auto sample = sample_for(model, seed, trial, boxes);
            const auto ctx = context_for(model, sample);
            const auto grid = energy_grid(spec.I, s.L, beta);
            return any_both(box_singular_on_grid(ctx, x, grid, s.m),
                            box_singular_on_grid(ctx, y, grid, s.m));
        }
        case EventKind::W1: {
            const int region = auto_region(spec.placement, s.L, 0, r0);
            const Box2 x =
                place_one(rng, model.d, s.L, BoxType::Any, r0, region, spec.placement.max_attempts);
            const std::array<Box2, 1> boxes{x};
            const auto sample = sample_for(model, seed, trial, boxes);
            const auto ctx = context_for(model, sample);
            const auto ev = eigenvalues_only(ctx.two_particle(x).matrix);
            return is_resonant(to_vector(ev), spec.energy, s.L, beta).resonant;
        }
        case EventKind::W2:
        case EventKind::ResonantPair: {
            const int region = auto_region(spec.placement, s.L, s.R, r0);
            const auto [x, y] = place_pair(rng, model.d, s.L, s.R, BoxType::Any, BoxType::Any, r0,
                                           region, spec.placement.max_attempts);
            const std::array<Box2, 2> boxes{x, y};
            const auto sample = sample_for(model, seed, trial, boxes);
            const auto ctx = context_for(model, sample);
            const auto ex = to_vector(eigenvalues_only(ctx.two_particle(x).matrix));
            const auto ey = to_vector(eigenvalues_only(ctx.two_particle(y).matrix));
            const Interval I = spec.kind == EventKind::W2
                                   ? Interval{-std::numeric_limits<double>::infinity(),
                                              std::numeric_limits<double>::infinity()}
                                   : spec.I;
            return exists_resonant_pair(ex, ey, I, s.L, beta).found;
        }
        case EventKind::NTks: {
            const int region = auto_region(spec.placement, s.L, 0, r0);
            const Box1 v(random_point1(rng, model.d, region), s.L);
            const auto sample = sample_potential(model.distribution, seed, trial, v);
            const auto ctx = context_for(model, sample);
            return !is_nontunnelling(ctx, v, s.m).nt;
        }
        case EventKind::B:
        case EventKind::T:
        case EventKind::Sigma: {
            const auto t = evaluate_mixed(model, sched, spec.k, spec.I, spec.placement, seed, trial,
                                          s, spec.kind == EventKind::B,
                                          spec.kind == EventKind::T,
                                          spec.kind == EventKind::Sigma);
            return spec.kind == EventKind::B ? t.b : spec.kind == EventKind::T ? t.t : t.sigma;
        }
        case EventKind::MGe2:
        case EventKind::NGe2n:
        case EventKind::KGe2n2:
            return evaluate_counter(model, spec, sched, seed, trial, s);
    }
    return false;
}

EstimateRecord make_record(const ModelSpec& model, const EventSpec& spec, const KindSetup& s,
                           const ScaleSchedule& sched, std::size_t trials, std::size_t successes,
                           std::uint64_t seed) {
    EstimateRecord r;
    r.spec = spec;
    r.trials = trials;
    r.successes = successes;
    r.estimate = static_cast<double>(successes) / static_cast<double>(trials);
    r.ci = wilson_interval(successes, trials);
    r.bound = s.bound;
    r.bound_label = s.bound_label;
    r.comparison = compare_to_bound(r.ci, r.bound);
    r.seed = seed;
    r.box_radius = s.L;
    r.mass = s.m;
    if (s.grid) {
        const int gl = s.Lsub > 0 && (spec.kind == EventKind::MGe2 || spec.kind == EventKind::NGe2n ||
                                      spec.kind == EventKind::KGe2n2)
                           ? s.Lsub
                           : s.L;
        r.grid_spacing = grid_spacing(spec.I, gl, sched.params.beta);
        r.grid_points = energy_grid(spec.I, gl, sched.params.beta).size();
        r.grid_lower_bound = true;
    }
    r.g = model.g;
    r.adjacency = to_string(model.adjacency);
    return r;
}

}  // namespace

EstimateRecord estimate_event(const ModelSpec& model, const EventSpec& spec,
                              const ScaleSchedule& sched, std::size_t trials, std::uint64_t seed,
                              const RunOptions& options) {
    if (trials == 0) throw InvalidInput("trials must be positive");
    model.validate();
    spec.validate();
    const auto s = setup_for(spec, sched);
    const auto flags = run_trials<char>(trials, options, [&](std::size_t t) -> char {
        return evaluate_trial(model, spec, sched, seed, t, s) ? 1 : 0;
    });
    const auto successes = static_cast<std::size_t>(std::count(flags.begin(), flags.end(), 1));
    return make_record(model, spec, s, sched, trials, successes, seed);
}

Certificate initial_step_certificate(const ModelContext& ctx, const Box2& box, double E0,
                                     double eta, double m0, int L0) {
    if (!(eta >= 0.0)) throw InvalidInput("eta must be non-negative");
    Certificate out;
    const int d = box.dim();
    const double growth = std::exp(m0 * L0);
    out.c0_paper = 4.0 * d + 2.0 * eta + growth;
    const auto degree = static_cast<double>(neighbour_offsets(2 * d, ctx.adjacency).size());
    out.c0 = degree + 2.0 * eta + growth;
    out.bound = 1.0 / growth;
    const auto op = ctx.two_particle(box);
    out.min_gap = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < op.matrix.rows(); ++i) {
        out.min_gap = std::min(out.min_gap, std::abs(op.matrix(i, i) - E0));
    }
    out.holds = out.min_gap >= out.c0;
    if (!out.holds) return out;
    const auto ev = eigenvalues_only(op.matrix);
    const auto grid = energy_grid(Interval{E0 - eta, E0 + eta}, box.radius, 0.5);
    out.grid_points = grid.size();
    for (double E : grid) {
        const double gap = (ev.array() - E).abs().minCoeff();
        out.max_resolvent_norm = std::max(out.max_resolvent_norm, 1.0 / gap);
    }
    out.implication_holds = out.max_resolvent_norm <= out.bound * (1.0 + 1e-12);
    return out;
}

std::vector<WegnerRow> wegner_sweep(const ModelSpec& model, const std::vector<int>& scales,
                                    double E, std::size_t trials, const ScaleSchedule& sched,
                                    std::uint64_t seed, const WegnerOptions& wopt,
                                    const RunOptions& options) {
    if (trials == 0) throw InvalidInput("trials must be positive");
    if (scales.empty()) throw InvalidInput("wegner_sweep needs at least one scale");
    model.validate();
    std::vector<WegnerRow> rows;
    const double beta = sched.params.beta;
    const int r0 = model.interaction.r0;
    for (int l : scales) {
        if (l < 0) throw InvalidInput("scales must be non-negative");
        WegnerRow row;
        row.l = l;
        row.reference = std::pow(static_cast<double>(l), -sched.params.q);

        EventSpec w1;
        w1.kind = EventKind::W1;
        w1.scale = l;
        w1.energy = E;
        w1.placement = wopt.placement;
        row.w1 = estimate_event(model, w1, sched, trials, seed, options);

        if (wopt.pair_events) {
            EventSpec w2 = w1;
            w2.kind = EventKind::W2;
            const auto s = setup_for(w2, sched);
            using Spectra = std::pair<std::vector<double>, std::vector<double>>;
            const auto spectra = run_trials<Spectra>(trials, options, [&](std::size_t t) {
                PhiloxStream rng(seed ^ kPlacementSalt, t);
                const int region = auto_region(w2.placement, l, l, r0);
                const auto [x, y] = place_pair(rng, model.d, l, l, BoxType::Any, BoxType::Any, r0,
                                               region, w2.placement.max_attempts);
                const std::array<Box2, 2> boxes{x, y};
                const auto sample = sample_for(model, seed, t, boxes);
                const auto ctx = context_for(model, sample);
                return Spectra{to_vector(eigenvalues_only(ctx.two_particle(x).matrix)),
                               to_vector(eigenvalues_only(ctx.two_particle(y).matrix))};
            });
            const Interval line{-std::numeric_limits<double>::infinity(),
                                std::numeric_limits<double>::infinity()};
            std::size_t coupled = 0, decoupled = 0;
            for (std::size_t t = 0; t < trials; ++t) {
                coupled += exists_resonant_pair(spectra[t].first, spectra[t].second, line, l, beta)
                               .found;
                const auto& other = spectra[(t + 1) % trials].second;
                decoupled += exists_resonant_pair(spectra[t].first, other, line, l, beta).found;
            }
            row.w2 = make_record(model, w2, s, sched, trials, coupled, seed);
            row.w2_decoupled = make_record(model, w2, s, sched, trials, decoupled, seed);
            row.cross_check_agrees = !(row.w2->ci.hi < row.w2_decoupled->ci.lo ||
                                       row.w2_decoupled->ci.hi < row.w2->ci.lo);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

DecaySummary decay_fit(const FiniteOperator& op, const SpectralData& spectral) {
    const Box2& box = op.box2();
    const int L = box.radius;
    if (L < 4) throw PreconditionViolation("decay_fit needs a box radius of at least 4");
    const auto points = enumerate_box(box);
    DecaySummary out;
    std::vector<double> masses;
    for (Eigen::Index s = 0; s < spectral.eigenvectors.cols(); ++s) {
        const auto psi = spectral.eigenvectors.col(s);
        Eigen::Index amax = 0;
        const double peak = psi.cwiseAbs().maxCoeff(&amax);
        if (!(peak > 0.0)) throw NumericError("eigenvector vanishes identically");
        DecayFit fit;
        fit.eigen_index = static_cast<std::size_t>(s);
        fit.energy = spectral.eigenvalues(s);
        fit.center = points[static_cast<std::size_t>(amax)];
        fit.profile.assign(static_cast<std::size_t>(2 * L + 1), 0.0);
        for (std::size_t i = 0; i < points.size(); ++i) {
            const auto r = static_cast<std::size_t>(distance(points[i], fit.center));
            fit.profile[r] = std::max(fit.profile[r], std::abs(psi(static_cast<Eigen::Index>(i))));
        }
        fit.fit_lo = (L + 3) / 4;
        fit.fit_hi = L;
        std::vector<double> xs, ys;
        for (int r = fit.fit_lo; r <= fit.fit_hi; ++r) {
            const double v = fit.profile[static_cast<std::size_t>(r)];
            if (v > 0.0) {
                xs.push_back(r);
                ys.push_back(std::log(v));
            } else {
                fit.excluded_shells.push_back(r);
            }
        }
        if (xs.size() >= 2) {
            const double n = static_cast<double>(xs.size());
            const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
            const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
            double sxx = 0.0, sxy = 0.0;
            for (std::size_t i = 0; i < xs.size(); ++i) {
                sxx += (xs[i] - mx) * (xs[i] - mx);
                sxy += (xs[i] - mx) * (ys[i] - my);
            }
            fit.slope = sxy / sxx;
            fit.m_hat = -fit.slope;
            double ss = 0.0;
            for (std::size_t i = 0; i < xs.size(); ++i) {
                const double e = ys[i] - (my + fit.slope * (xs[i] - mx));
                ss += e * e;
            }
            fit.residual = std::sqrt(ss / n);
            fit.valid = true;
            masses.push_back(fit.m_hat);
        }
        out.fits.push_back(std::move(fit));
    }
    out.median_m_hat = median(masses);
    return out;
}

MassStatistics mass_statistics(const ModelSpec& model, int L, std::size_t samples,
                               std::uint64_t seed, std::size_t bootstrap,
                               const RunOptions& options) {
    if (samples == 0) throw InvalidInput("samples must be positive");
    model.validate();
    MassStatistics out;
    out.g = model.g;
    const Point1 origin(std::vector<int>(static_cast<std::size_t>(model.d), 0));
    const Box2 box(Point2(origin, origin), L);
    out.sample_medians = run_trials<double>(samples, options, [&](std::size_t t) {
        const std::array<Box2, 1> boxes{box};
        const auto sample = sample_for(model, seed, t, boxes);
        const auto op = context_for(model, sample).two_particle(box);
        return decay_fit(op, diagonalize(op)).median_m_hat;
    });
    out.median = median(out.sample_medians);
    std::vector<double> boot;
    boot.reserve(bootstrap);
    PhiloxStream rng(seed ^ kBootstrapSalt, 0);
    std::vector<double> resample(samples);
    for (std::size_t b = 0; b < bootstrap; ++b) {
        for (auto& v : resample) {
            v = out.sample_medians[static_cast<std::size_t>(
                rng.uniform_int(0, static_cast<long long>(samples) - 1))];
        }
        boot.push_back(median(resample));
    }
    if (!boot.empty()) {
        std::sort(boot.begin(), boot.end());
        auto q = [&](double p) {
            const double pos = p * static_cast<double>(boot.size() - 1);
            const auto i = static_cast<std::size_t>(std::floor(pos));
            const auto j = std::min(i + 1, boot.size() - 1);
            return boot[i] + (pos - static_cast<double>(i)) * (boot[j] - boot[i]);
        };
        out.ci_lo = q(0.025);
        out.ci_hi = q(0.975);
    } else {
        out.ci_lo = out.ci_hi = out.median;
    }
    return out;
}

ProbeResult ss_induction_probe(const ModelSpec& model, const ScaleSchedule& sched, int k,
                               std::size_t trials, std::uint64_t seed, const Interval& I,
                               const RunOptions& options) {
    if (trials == 0) throw InvalidInput("trials must be positive");
    model.validate();
    EventSpec spec;
    spec.kind = EventKind::B;
    spec.k = k;
    spec.I = I;
    spec.validate();
    const auto s = setup_for(spec, sched);
    ProbeResult out;
    out.per_trial = run_trials<ProbeTrial>(trials, options, [&](std::size_t t) {
        return evaluate_mixed(model, sched, k, I, spec.placement, seed, t, s, true, true, true);
    });
    std::size_t nb = 0, nt = 0, ns = 0, nr = 0;
    for (const auto& t : out.per_trial) {
        nb += t.b;
        nt += t.t;
        ns += t.sigma;
        nr += t.rest;
        out.identity_every_trial = out.identity_every_trial && t.identity_holds();
    }
    out.count_inequality = nb <= nt + ns + nr;
    auto rec = [&](EventKind kind, std::size_t count) {
        EventSpec e = spec;
        e.kind = kind;
        return make_record(model, e, setup_for(e, sched), sched, trials, count, seed);
    };
    out.b = rec(EventKind::B, nb);
    out.t = rec(EventKind::T, nt);
    out.sigma = rec(EventKind::Sigma, ns);
    out.rest = rec(EventKind::B, nr);
    out.rest.bound.reset();
    out.rest.bound_label = "B and not T and not Sigma";
    out.rest.comparison = Comparison::None;
    return out;
}

RecoverySweep recovery_sweep(const ModelContext& ctx, const Box2& parent, int sub_radius,
                             double tolerance) {
    if (sub_radius < 0 || sub_radius + 1 > parent.radius)
        throw InvalidInput("sub-box radius must satisfy 0 <= r < parent radius");
    RecoverySweep out;
    out.parent = parent;
    out.sub_radius = sub_radius;
    out.tolerance = tolerance;

    const FiniteOperator op = ctx.two_particle(parent);
    const SpectralData spectral = diagonalize(op);
    out.eigenpairs = spectral.size();

    const auto centres = enumerate_box(Box2(parent.center, parent.radius - sub_radius - 1));
    std::vector<FiniteOperator> subs;
    std::vector<SpectralData> sub_spectra;
    subs.reserve(centres.size());
    for (const auto& c : centres) {
        subs.push_back(ctx.two_particle(Box2(c, sub_radius)));
        sub_spectra.push_back(diagonalize(subs.back()));
    }

    for (std::size_t s = 0; s < spectral.size(); ++s) {
        const double E = spectral.eigenvalues(static_cast<Eigen::Index>(s));
        const auto col = spectral.eigenvectors.col(static_cast<Eigen::Index>(s));
        auto psi = [&](const Point2& x) { return col(static_cast<Eigen::Index>(parent.index_of(x))); };
        for (std::size_t b = 0; b < subs.size(); ++b) {
            if (spectral_gap(sub_spectra[b], E) < 1e-8 * (1.0 + sub_spectra[b].norm)) {
                ++out.skipped_resonant;
                continue;
            }
            const auto r = boundary_recovery(subs[b], E, psi, &sub_spectra[b]);
            const double rel = r.psi_sup > 0.0 ? r.max_error / r.psi_sup : r.max_error;
            ++out.checked;
            out.max_relative_error = std::max(out.max_relative_error, rel);
            if (!(rel <= tolerance)) ++out.failures;
        }
    }
    return out;
}

}  // namespace msalab
