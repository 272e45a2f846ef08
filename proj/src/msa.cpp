#include "msalab/msa.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "msalab/errors.hpp"

namespace msalab {

std::string to_string(Preset p) {
    switch (p) {
        case Preset::Paper: return "paper";
        case Preset::Desk: return "desk";
        case Preset::Custom: return "custom";
    }
    return "custom";
}

Preset preset_from_string(const std::string& s) {
    if (s == "paper") return Preset::Paper;
    if (s == "desk") return Preset::Desk;
    if (s == "custom") return Preset::Custom;
    throw InvalidInput("unknown preset '" + s + "' (expected paper, desk or custom)");
}

ScheduleParams ScheduleParams::paper() {
    ScheduleParams p;
    p.d = 1;
    p.L0 = 10000.0;
    p.alpha = 1.5;
    p.gamma = 40.0;
    p.m0 = 1.0;
    p.beta = 0.5;
    p.p = 22.0;
    p.q = 101.0;
    p.p_tilde = 160.0;
    p.r0 = 1;
    p.g = 1000.0;
    p.J = 9;
    p.preset = Preset::Paper;
    return p;
}

ScheduleParams ScheduleParams::desk() {
    ScheduleParams p;
    p.preset = Preset::Desk;
    return p;
}

int ScaleSchedule::length(int k) const {
    if (k < 0 || k > k_max()) throw OutOfDomain("scale index outside schedule");
    const auto L = lengths[static_cast<std::size_t>(k)];
    if (L > std::numeric_limits<int>::max()) throw OutOfDomain("scale length exceeds int range");
    return static_cast<int>(L);
}

double ScaleSchedule::mass(int k) const {
    if (k < 0 || k > k_max()) throw OutOfDomain("scale index outside schedule");
    return masses[static_cast<std::size_t>(k)];
}

namespace {

std::int64_t integer_length(double L0, double alpha, int k) {
    const double v = std::pow(L0, std::pow(alpha, k));
    if (!std::isfinite(v) || v > 4.0e18) {
        throw InvalidInput("scale length L_" + std::to_string(k) + " overflows");
    }
    const double r = std::round(v);
    if (std::abs(v - r) <= 1e-9 * std::max(1.0, v)) return static_cast<std::int64_t>(r);
    return static_cast<std::int64_t>(std::ceil(v));
}

}  // namespace

ScaleSchedule schedule(const ScheduleParams& params, int k_max) {
    if (k_max < 0) throw InvalidInput("k_max must be non-negative");
    if (!(params.L0 >= 2.0)) throw InvalidInput("L0 must be at least 2");
    if (!(params.alpha > 1.0)) throw InvalidInput("alpha must exceed 1");
    if (!(params.m0 > 0.0)) throw InvalidInput("m0 must be positive");
    if (!(params.gamma >= 0.0)) throw InvalidInput("gamma must be non-negative");
    ScaleSchedule out;
    out.params = params;
    out.non_paper_regime = validate_parameters(params).non_paper_regime;
    out.lengths.push_back(integer_length(params.L0, params.alpha, 0));
    out.masses.push_back(params.m0);
    for (int k = 1; k <= k_max; ++k) {
        const auto L = integer_length(params.L0, params.alpha, k);
        if (L <= out.lengths.back()) {
            throw InvalidInput("scale lengths are not strictly increasing at k = " +
                               std::to_string(k));
        }
        const double m =
            out.masses.back() * (1.0 - params.gamma / std::sqrt(static_cast<double>(L)));
        if (!(m > 0.0)) {
            throw InfeasibleSchedule("mass m_" + std::to_string(k) + " = " + std::to_string(m) +
                                         " is not positive (L_" + std::to_string(k) + " = " +
                                         std::to_string(L) + ")",
                                     k);
        }
        out.lengths.push_back(L);
        out.masses.push_back(m);
    }
    return out;
}

double mass_step_factor(double Lk, int J) {
    return 1.0 - (5.0 * J + 6.0) / std::sqrt(2.0 * Lk);
}

double mass_step(double mk, double Lk, int J) {
    if (!(mk > 0.0) || !(Lk >= 1.0)) throw InvalidInput("mass_step needs m_k > 0 and L_k >= 1");
    const double m = mk * mass_step_factor(Lk, J);
    if (!(m > 0.0)) {
        throw InfeasibleSchedule("mass step bound is not positive at L_k = " + std::to_string(Lk),
                                 -1);
    }
    return m;
}

double mass_product(double L0, double alpha, double gamma, int max_terms) {
    double prod = 1.0;
    const double log_l0 = std::log(L0);
    for (int j = 1; j <= max_terms; ++j) {
        const double log_lj = std::pow(alpha, j) * log_l0;
        const double term = gamma * std::exp(-0.5 * log_lj);
        if (term >= 1.0) return 0.0;
        prod *= 1.0 - term;
        if (term < 1e-18) break;
    }
    return prod;
}

bool ConstraintReport::all_passed() const {
    return std::all_of(constraints.begin(), constraints.end(),
                       [](const Constraint& c) { return c.passed; });
}

bool ConstraintReport::structural_passed() const {
    return std::all_of(constraints.begin(), constraints.end(),
                       [](const Constraint& c) { return !c.structural || c.passed; });
}

const Constraint* ConstraintReport::find(const std::string& name) const {
    for (const auto& c : constraints) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

ConstraintReport validate_parameters(const ScheduleParams& p) {
    ConstraintReport out;
    const double d = p.d;
    auto gt = [&](std::string name, std::string rel, double lhs, double rhs, bool structural) {
        out.constraints.push_back({std::move(name), std::move(rel), lhs, rhs, lhs > rhs, structural});
    };
    auto ge = [&](std::string name, std::string rel, double lhs, double rhs, bool structural) {
        out.constraints.push_back(
            {std::move(name), std::move(rel), lhs, rhs, lhs >= rhs, structural});
    };
    auto eq = [&](std::string name, std::string rel, double lhs, double rhs) {
        out.constraints.push_back(
            {std::move(name), std::move(rel), lhs, rhs, std::abs(lhs - rhs) < 1e-12, true});
    };

    gt("alpha_d_gt_1", "alpha*d > 1", p.alpha * d, 1.0, true);
    gt("p_gt_alpha_d", "p > alpha*d", p.p, p.alpha * d, true);
    ge("gamma_ge_40", "gamma >= 40", p.gamma, 40.0, true);
    gt("p_gt_12d_plus_9", "p > 12d + 9", p.p, 12.0 * d + 9.0, true);
    gt("q_gt_4p_plus_12d", "q > 4p + 12d", p.q, 4.0 * p.p + 12.0 * d, true);
    eq("beta_eq_half", "beta = 1/2", p.beta, 0.5);
    eq("alpha_eq_three_halves", "alpha = 3/2", p.alpha, 1.5);
    eq("gamma_eq_40", "gamma = 40", p.gamma, 40.0);
    gt("step_constant_lt_gamma", "gamma > (5J+6)/sqrt(2)", p.gamma,
       (5.0 * p.J + 6.0) / std::sqrt(2.0), true);
    gt("alpha_lt_bound", "(J+1)(d+1/2) > alpha", (p.J + 1.0) * (d + 0.5), p.alpha, true);
    out.constraints.push_back({"J_odd_positive", "J odd, J >= 1", static_cast<double>(p.J), 1.0,
                               p.J >= 1 && p.J % 2 == 1, true});

    out.q_prime = p.q / p.alpha;
    gt("q_prime_minus_2p_minus_4_gt_1", "q/alpha - 2p - 4 > 1", out.q_prime - 2.0 * p.p - 4.0,
       1.0, true);
    if (p.p_tilde) {
        const double pt = *p.p_tilde;
        out.s = (pt - 2.0 * (1.0 + p.alpha) * d) / p.alpha;
        gt("s_minus_2p_gt_1", "s - 2p > 1", out.s - 2.0 * p.p, 1.0, true);
        ge("p_tilde_ge_alpha_q_plus", "p~ >= alpha*q + 2(1+alpha)d", pt,
           p.alpha * p.q + 2.0 * (1.0 + p.alpha) * d, true);
        ge("p_tilde_ge_3p_plus_3d", "p~ >= 3p + 3d", pt, 3.0 * p.p + 3.0 * d, true);
    }

    // size conditions
    gt("L0_gt_1", "L0 > 1", p.L0, 1.0, false);
    gt("L0_gt_r0", "L0 > r0", p.L0, p.r0, false);
    gt("L0_gt_J_plus_1_squared", "L0 > (J+1)^2", p.L0, (p.J + 1.0) * (p.J + 1.0), false);
    if (p.L0 > 1.0 && p.alpha > 1.0) {
        const double L1 = std::pow(p.L0, p.alpha);
        gt("first_mass_positive", "L1 > gamma^2", L1, p.gamma * p.gamma, false);
        ge("mass_product_ge_half", "prod_j (1 - gamma L_j^{-1/2}) >= 1/2",
           mass_product(p.L0, p.alpha, p.gamma), 0.5, false);
    }

    out.non_paper_regime = p.preset != Preset::Paper || !out.all_passed();
    return out;
}

SeparatedSubset max_separated_subset(const std::vector<Point2>& centres, int R) {
    SeparatedSubset out;
    const std::size_t n = centres.size();
    if (n == 0) return out;
    auto compatible = [&](std::size_t a, std::size_t b) {
        return pair_separation(centres[a], centres[b]) > 8 * R;
    };

    if (n > kExactSubsetLimit) {
        // greedy: repeatedly take the candidate with fewest remaining conflicts
        out.exact = false;
        std::vector<bool> alive(n, true);
        while (true) {
            std::size_t best = n;
            std::size_t best_conf = std::numeric_limits<std::size_t>::max();
            for (std::size_t i = 0; i < n; ++i) {
                if (!alive[i]) continue;
                std::size_t conf = 0;
                for (std::size_t j = 0; j < n; ++j) {
                    if (j != i && alive[j] && !compatible(i, j)) ++conf;
                }
                if (conf < best_conf) {
                    best_conf = conf;
                    best = i;
                }
            }
            if (best == n) break;
            out.chosen.push_back(best);
            alive[best] = false;
            for (std::size_t j = 0; j < n; ++j) {
                if (alive[j] && !compatible(best, j)) alive[j] = false;
            }
        }
    } else {
        std::vector<std::uint64_t> compat(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (i != j && compatible(i, j)) compat[i] |= std::uint64_t{1} << j;
            }
        }
        std::uint64_t best_set = 0;
        int best = 0;
        std::function<void(std::uint64_t, std::uint64_t, int)> expand =
            [&](std::uint64_t cand, std::uint64_t cur, int size) {
                if (size + std::popcount(cand) <= best) return;
                if (cand == 0) {
                    best = size;
                    best_set = cur;
                    return;
                }
                const int v = std::countr_zero(cand);
                const std::uint64_t bit = std::uint64_t{1} << v;
                expand(cand & compat[static_cast<std::size_t>(v)], cur | bit, size + 1);
                expand(cand & ~bit, cur, size);
            };
        const std::uint64_t all = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
        expand(all, 0, 0);
        for (std::size_t i = 0; i < n; ++i) {
            if (best_set & (std::uint64_t{1} << i)) out.chosen.push_back(i);
        }
    }
    out.size = out.chosen.size();
    for (auto i : out.chosen) out.centres.push_back(centres[i]);
    return out;
}

CounterReport count_singular_subboxes(const ModelContext& ctx, const Box2& parent, double E,
                                      int Lk, double mk) {
    if (Lk < 0 || Lk > parent.radius) throw InvalidInput("sub-box scale must lie in [0, L_{k+1}]");
    CounterReport out;
    out.parent = parent;
    out.energy = E;
    out.Lk = Lk;
    out.mk = mk;
    const int r0 = ctx.interaction.r0;
    std::vector<Point2> ni, in, all;
    for (const auto& x : enumerate_box(Box2(parent.center, parent.radius - Lk))) {
        const Box2 sub(x, Lk);
        const bool inter = is_interactive(sub, r0);
        ++(inter ? out.candidates_i : out.candidates_ni);
        const auto ns = is_ns(ctx, sub, E, mk);
        if (ns.ns) continue;
        out.singular.push_back({x, inter, true, ns.max_boundary});
        (inter ? in : ni).push_back(x);
        all.push_back(x);
    }
    out.M = max_separated_subset(ni, Lk);
    out.N = max_separated_subset(in, Lk);
    out.K = max_separated_subset(all, Lk);
    return out;
}

Lemma45Report lemma45_step(const ModelContext& ctx, const Box2& parent, double E,
                           const ScaleSchedule& sched, int k, const CnrOptions& cnr) {
    if (k < 0 || k + 1 > sched.k_max()) throw InvalidInput("lemma45_step needs scales k and k+1");
    const int Lk = sched.length(k);
    const double mk = sched.mass(k);
    const int J = sched.params.J;
    Lemma45Report out;
    out.parent = parent;
    out.energy = E;
    out.k = k;
    out.J = J;
    out.cnr = is_cnr(ctx, parent, E, J, Lk, sched.params.beta, cnr);
    out.counters = count_singular_subboxes(ctx, parent, E, Lk, mk);
    out.hypotheses = out.cnr.cnr && out.counters.K.size <= static_cast<std::size_t>(J);
    out.step_factor = mass_step_factor(Lk, J);
    if (out.step_factor > 0.0) {
        out.target_mass = mk * out.step_factor;
        out.mass_source = "mass-step";
    } else {
        // the step bound is vacuous at this length; test the scheduled mass instead
        out.target_mass = sched.mass(k + 1);
        out.mass_source = "schedule";
    }
    if (!out.hypotheses) return out;
    out.ns = is_ns(ctx, parent, E, out.target_mass);
    out.holds = out.ns->ns;
    out.margin = -out.target_mass * parent.radius - std::log(out.ns->max_boundary);
    return out;
}

}  // namespace msalab
