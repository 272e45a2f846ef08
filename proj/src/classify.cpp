#include "msalab/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "msalab/errors.hpp"
#include "msalab/resolvent.hpp"
#include "msalab/rng.hpp"

namespace msalab {

namespace {

Eigen::VectorXd eigenvalues_only(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw NumericError("eigensolver did not converge");
    return solver.eigenvalues();
}

std::span<const double> as_span(const Eigen::VectorXd& v) {
    return {v.data(), static_cast<std::size_t>(v.size())};
}

std::size_t ipow(std::size_t base, int exp) {
    std::size_t out = 1;
    for (int i = 0; i < exp; ++i) out *= base;
    return out;
}

}  // namespace

FiniteOperator ModelContext::two_particle(const Box2& box) const {
    if (sample == nullptr) throw InvalidInput("model context has no disorder sample");
    return assemble_two_particle(box, *sample, interaction, g, adjacency);
}

FiniteOperator ModelContext::single_particle(const Box1& box, int particle) const {
    if (sample == nullptr) throw InvalidInput("model context has no disorder sample");
    return assemble_single_particle(box, *sample, g, particle, adjacency);
}

double grid_spacing(const Interval& I, int L, double beta) {
    const double w = std::exp(-std::pow(static_cast<double>(L), beta));
    if (I.length() <= 0.0) return 0.5 * w;
    return std::min(0.01 * I.length(), 0.5 * w);
}

std::vector<double> energy_grid(const Interval& I, int L, double beta) {
    if (!(I.hi >= I.lo)) throw InvalidInput("energy interval has hi < lo");
    if (I.length() == 0.0) return {I.lo};
    const double h = grid_spacing(I, L, beta);
    const auto n = static_cast<std::size_t>(std::ceil(I.length() / h));
    std::vector<double> out(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        out[i] = std::min(I.hi, I.lo + static_cast<double>(i) * h);
    }
    out.back() = I.hi;
    return out;
}

NsResult is_ns(const FiniteOperator& op, double E, double m, const SpectralData* spectral) {
    const Box2& box = op.box2();
    NsResult out;
    out.threshold = std::exp(-m * box.radius);
    out.argmax = box.center;
    if (box.radius == 0) {
        out.degenerate = true;
        return out;
    }
    try {
        const auto col = Resolvent(op, E, spectral).column(box.center);
        for (const auto& y : interior_boundary(box)) {
            const double v = std::abs(col.values(static_cast<Eigen::Index>(box.index_of(y))));
            if (v > out.max_boundary) {
                out.max_boundary = v;
                out.argmax = y;
            }
        }
    } catch (const ResonantEnergy&) {
        out.resonant = true;
        out.max_boundary = std::numeric_limits<double>::infinity();
    }
    out.ns = out.max_boundary <= out.threshold;
    return out;
}

NsResult is_ns(const ModelContext& ctx, const Box2& box, double E, double m) {
    return is_ns(ctx.two_particle(box), E, m);
}

ResonanceResult is_resonant(std::span<const double> eigenvalues, double E, int L, double beta) {
    ResonanceResult out;
    out.threshold = std::exp(-std::pow(static_cast<double>(L), beta));
    out.gap = std::numeric_limits<double>::infinity();
    for (double e : eigenvalues) {
        const double gap = std::abs(e - E);
        if (gap < out.gap) {
            out.gap = gap;
            out.nearest = e;
        }
    }
    out.resonant = out.gap < out.threshold;
    return out;
}

ResonanceResult is_resonant(const SpectralData& spectral, double E, int L, double beta) {
    return is_resonant(spectral.values(), E, L, beta);
}

PairResonance exists_resonant_pair(std::span<const double> spec1, std::span<const double> spec2,
                                   const Interval& I, int L, double beta) {
    const double w = std::exp(-std::pow(static_cast<double>(L), beta));
    std::vector<double> b(spec2.begin(), spec2.end());
    std::sort(b.begin(), b.end());
    PairResonance out;
    for (double lambda : spec1) {
        // candidates mu with |lambda - mu| < 2w
        auto it = std::upper_bound(b.begin(), b.end(), lambda - 2.0 * w);
        for (; it != b.end() && *it < lambda + 2.0 * w; ++it) {
            const double lo = std::max(lambda, *it) - w;
            const double hi = std::min(lambda, *it) + w;
            // open window (lo, hi) against closed I
            if (lo < hi && lo < I.hi && hi > I.lo) {
                out.found = true;
                out.lambda = lambda;
                out.mu = *it;
                const double a = std::max(lo, I.lo);
                const double c = std::min(hi, I.hi);
                out.energy = 0.5 * (a + c);
                return out;
            }
        }
    }
    return out;
}

CnrResult is_cnr(const ModelContext& ctx, const Box2& box, double E, int J, int Lk, double beta,
                 const CnrOptions& options) {
    if (J < 1 || J % 2 == 0) throw InvalidInput("J must be an odd positive integer");
    if (Lk < 0) throw InvalidInput("L_k must be non-negative");
    CnrResult out;
    const auto top = eigenvalues_only(ctx.two_particle(box).matrix);
    const auto top_r = is_resonant(as_span(top), E, box.radius, beta);
    out.box_nr = !top_r.resonant;
    if (!out.box_nr) {
        out.cnr = false;
        out.counterexample = box;
        out.counterexample_gap = top_r.gap;
    }

    const int d2 = 2 * box.dim();
    std::vector<std::pair<int, std::size_t>> layers;  // (radius, number of centres)
    for (int j = 1; j <= J; ++j) {
        const int r = cnr_radius(j, Lk);
        if (r > box.radius) break;
        const std::size_t count = ipow(static_cast<std::size_t>(2 * (box.radius - r) + 1), d2);
        layers.emplace_back(r, count);
        out.total_subboxes += count;
    }

    auto check = [&](int r, std::size_t idx) {
        const Box2 centres(box.center, box.radius - r);
        const Box2 sub(centres.point_at(idx), r);
        const auto ev = eigenvalues_only(ctx.two_particle(sub).matrix);
        const auto res = is_resonant(as_span(ev), E, r, beta);
        ++out.checked_subboxes;
        if (res.resonant && out.cnr) {
            out.cnr = false;
            out.counterexample = sub;
            out.counterexample_gap = res.gap;
        }
        return !res.resonant;
    };

    if (!out.cnr) return out;
    if (out.total_subboxes <= options.exhaustive_budget) {
        for (const auto& [r, count] : layers) {
            for (std::size_t i = 0; i < count; ++i) {
                if (!check(r, i)) return out;
            }
        }
    } else {
        out.exhaustive = false;
        PhiloxStream rng(options.sample_seed, 0x636e72);
        for (std::size_t s = 0; s < options.sample_count; ++s) {
            auto flat = static_cast<std::size_t>(
                rng.uniform_int(0, static_cast<long long>(out.total_subboxes) - 1));
            for (const auto& [r, count] : layers) {
                if (flat < count) {
                    if (!check(r, flat)) return out;
                    break;
                }
                flat -= count;
            }
        }
    }
    return out;
}

NtResult is_nontunnelling(const FiniteOperator& op1, const SpectralData& spectral, double m_hat) {
    const Box1& box = op1.box1();
    NtResult out;
    out.threshold = std::exp(-m_hat * box.radius);
    out.argmax = box.center;
    if (box.radius == 0) {
        out.degenerate = true;
        return out;
    }
    const auto ic = static_cast<Eigen::Index>(box.index_of(box.center));
    for (const auto& y : interior_boundary(box)) {
        const auto iy = static_cast<Eigen::Index>(box.index_of(y));
        const Eigen::VectorXd prod =
            (spectral.eigenvectors.row(ic).array() * spectral.eigenvectors.row(iy).array())
                .abs()
                .transpose();
        Eigen::Index s = 0;
        const double v = prod.maxCoeff(&s);
        if (v > out.max_product) {
            out.max_product = v;
            out.eigen_index = static_cast<std::size_t>(s);
            out.argmax = y;
        }
    }
    out.nt = out.max_product <= out.threshold;
    return out;
}

NtResult is_nontunnelling(const ModelContext& ctx, const Box1& box, double m_hat, int particle) {
    const auto op = ctx.single_particle(box, particle);
    return is_nontunnelling(op, diagonalize(op), m_hat);
}

NtPairResult is_nontunnelling(const ModelContext& ctx, const Box2& box, double m_hat) {
    const auto p = projections(box);
    NtPairResult out;
    out.first = is_nontunnelling(ctx, p.first, m_hat, 1);
    out.second = is_nontunnelling(ctx, p.second, m_hat, 2);
    out.nt = out.first.nt && out.second.nt;
    return out;
}

double lemma32_mass(double m_hat, int L, double beta, int d) {
    const double l = static_cast<double>(L);
    return m_hat * (1.0 - std::pow(l, -1.0 + beta) - 2.0 * d * std::log(2.0 * l + 1.0) / l);
}

bool lemma32_size_condition(int L, double beta, int d) {
    if (L < 1) return false;
    const double l = static_cast<double>(L);
    return (std::pow(l, beta) + 2.0 * d * std::log(2.0 * l + 1.0)) / l < 1.0;
}

Lemma32Report lemma32_check(const ModelContext& ctx, const Box2& box, double E, double m_hat,
                            double beta) {
    Lemma32Report out;
    const int L = box.radius;
    out.m_hat = m_hat;
    out.m_hat1 = lemma32_mass(m_hat, L, beta, box.dim());
    out.non_interactive = !is_interactive(box, ctx.interaction.r0);
    out.size_condition = lemma32_size_condition(L, beta, box.dim());
    if (!out.non_interactive || !out.size_condition) return out;

    out.nt = is_nontunnelling(ctx, box, m_hat);
    out.projections_nt = out.nt.nt;

    // Under l1 adjacency the NI spectrum is the sum of the factor spectra;
    // otherwise diagonalise the full box.
    std::vector<double> spectrum;
    if (ctx.adjacency == Adjacency::L1) {
        spectrum = tensor_spectrum(box, *ctx.sample, ctx.g, ctx.interaction.r0, ctx.adjacency);
    } else {
        const auto ev = eigenvalues_only(ctx.two_particle(box).matrix);
        spectrum.assign(ev.data(), ev.data() + ev.size());
    }
    out.resonance = is_resonant(spectrum, E, L, beta);
    out.box_nr = !out.resonance.resonant;

    out.hypotheses = out.non_interactive && out.size_condition && out.projections_nt && out.box_nr;
    if (!out.hypotheses) return out;

    out.ns = is_ns(ctx, box, E, out.m_hat1);
    out.holds = out.ns->ns;
    out.margin = -out.m_hat1 * L - std::log(out.ns->max_boundary);
    return out;
}

ClassificationReport classify_box(const ModelContext& ctx, const Box2& box, double E,
                                  const ClassifyOptions& options) {
    ClassificationReport out;
    out.box = box;
    out.energy = E;
    out.mass = options.mass;
    out.beta = options.beta;
    out.interactive = is_interactive(box, ctx.interaction.r0);
    const auto op = ctx.two_particle(box);
    const auto spectral = diagonalize(op);
    out.resonance = is_resonant(spectral, E, box.radius, options.beta);
    out.ns = is_ns(op, E, options.mass, &spectral);
    if (options.J > 0) {
        out.J = options.J;
        out.cnr = is_cnr(ctx, box, E, options.J, options.Lk, options.beta, options.cnr);
    }
    if (options.m_hat) {
        out.m_hat = *options.m_hat;
        out.nt = is_nontunnelling(ctx, box, *options.m_hat);
    }
    return out;
}

}  // namespace msalab
