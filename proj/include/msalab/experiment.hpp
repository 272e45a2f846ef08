#pragma once

// Monte Carlo estimation of MSA events, the initial-scale certificate, Wegner
// sweeps, effective-mass fits and the scale-induction probe.
//
// Every trial draws its own DisorderSample from (seed, trial index), so results
// are independent of thread count and scheduling.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "msalab/classify.hpp"
#include "msalab/msa.hpp"

namespace msalab {

struct ModelSpec {
    int d = 1;
    DistributionSpec distribution = DistributionSpec::uniform();
    InteractionSpec interaction = InteractionSpec::linear(1, 1.0);
    double g = 30.0;
    Adjacency adjacency = Adjacency::SupNorm;

    void validate() const;
    bool operator==(const ModelSpec&) const = default;
};

enum class EventKind {
    S0,            // exists E in I: Lambda_{L0}(x) is (E, m0)-S
    SSk,           // exists E in I: both L_k-distant boxes (E, m_k)-S
    ISk,           // as SSk for a pair of interactive boxes
    W1,            // Lambda_l(x) is E-R at the fixed energy
    W2,            // exists real E: both 8l-distant boxes are E-R
    NTks,          // single-particle Lambda_{L_k}(v) is (2 m0)-T
    B,             // exists E in I: interactive x and NI y at scale k+1 both (E, m_{k+1})-S
    T,             // either projection of y at scale k+1 is (2 m0)-T
    Sigma,         // exists E in I: neither x nor y is (E, J)-CNR
    ResonantPair,  // exists E in I: both 8l-distant boxes are E-R
    MGe2,          // exists E in I: M(Lambda_{L_{k+1}}(u); E) >= 2
    NGe2n,         // exists E in I: N(...) >= 2n
    KGe2n2,        // exists E in I: K(...) >= 2n + 2
    Bernoulli,     // synthetic event with a fixed probability (harness checks)
};

std::string to_string(EventKind k);
EventKind event_kind_from_string(const std::string& s);

struct Placement {
    int region = 0;  // centres drawn from [-region, region]^{2d}; 0 picks a size that fits
    int max_attempts = 100000;

    bool operator==(const Placement&) const = default;
};

struct EventSpec {
    EventKind kind = EventKind::S0;
    int k = 0;
    Interval I{-0.5, 0.5};
    double energy = 0.0;         // fixed energy for W1
    std::optional<int> scale;    // box radius l for W1, W2 and ResonantPair (default L_k)
    std::optional<double> mass;  // overrides the scheduled mass
    std::optional<double> m_hat; // NT mass (default 2 m0)
    int n = 1;
    double bernoulli_p = 0.5;
    Placement placement;

    void validate() const;
};

enum class Comparison { Pass, Fail, Indeterminate, None };
std::string to_string(Comparison c);
Comparison comparison_from_string(const std::string& s);

struct WilsonInterval {
    double lo = 0.0;
    double hi = 1.0;
};

inline constexpr double kWilsonZ95 = 1.959963984540054;

WilsonInterval wilson_interval(std::size_t successes, std::size_t trials, double z = kWilsonZ95);

struct EstimateRecord {
    EventSpec spec;
    std::size_t trials = 0;
    std::size_t successes = 0;
    double estimate = 0.0;
    WilsonInterval ci;
    std::optional<double> bound;  // theoretical bound at this scale, for reference only
    std::string bound_label;
    Comparison comparison = Comparison::None;
    std::uint64_t seed = 0;
    int box_radius = 0;
    double mass = 0.0;
    double grid_spacing = 0.0;  // 0 when the event is decided exactly
    std::size_t grid_points = 0;
    bool grid_lower_bound = false;  // "exists E" decided on a grid: frequency is a lower bound
    double g = 0.0;
    std::string adjacency;
};

/// pass when the interval lies below the bound, fail when above, else indeterminate.
Comparison compare_to_bound(const WilsonInterval& ci, std::optional<double> bound);

struct RunOptions {
    unsigned threads = 1;
};

/// Evaluates fn(trial) for trial = 0..n-1 and returns results in trial order.
template <class T>
std::vector<T> run_trials(std::size_t n, const RunOptions& options,
                          const std::function<T(std::size_t)>& fn) {
    std::vector<T> out(n);
    const unsigned threads = std::max(1u, std::min<unsigned>(options.threads,
                                                             static_cast<unsigned>(n)));
    if (threads <= 1) {
        for (std::size_t t = 0; t < n; ++t) out[t] = fn(t);
        return out;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t t = w; t < n; t += threads) out[t] = fn(t);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

/// Singular flags of one box at each grid energy (spectral expansion of G).
std::vector<char> singular_on_grid(const FiniteOperator& op, const SpectralData& spectral,
                                   const std::vector<double>& grid, double m);

/// Union of open windows where a box family is E-R, intersected with I.
/// Used for exact "exists E" tests on resonance-type events.
using Windows = std::vector<std::pair<double, double>>;
Windows resonance_windows(std::span<const double> eigenvalues, int L, double beta);
Windows merge_windows(Windows w);
bool windows_intersect(const Windows& a, const Windows& b, const Interval& I);

/// Energies at which the box is not (E,J)-CNR: union of resonance windows of
/// the box and of all its j(L_k+1) sub-boxes.
Windows non_cnr_windows(const ModelContext& ctx, const Box2& box, int J, int Lk, double beta);

EstimateRecord estimate_event(const ModelSpec& model, const EventSpec& spec,
                              const ScaleSchedule& sched, std::size_t trials, std::uint64_t seed,
                              const RunOptions& options = {});

struct Certificate {
    double c0_paper = 0.0;  // 4d + 2 eta + e^{m0 L0}
    double c0 = 0.0;        // degree of the adjacency in place of 4d
    double min_gap = 0.0;   // min_x |U(x) + g W(x) - E0|
    bool holds = false;
    // when it holds: max over the grid of ||(H - E)^{-1}|| and the implication
    double max_resolvent_norm = 0.0;
    double bound = 0.0;  // e^{-m0 L0}
    bool implication_holds = true;
    std::size_t grid_points = 0;
};

/// Sufficient condition for (S.0) on one box, plus the resolvent-norm bound it implies.
Certificate initial_step_certificate(const ModelContext& ctx, const Box2& box, double E0,
                                     double eta, double m0, int L0);

struct WegnerRow {
    int l = 0;
    double reference = 0.0;  // l^{-q}
    EstimateRecord w1;
    std::optional<EstimateRecord> w2;
    // W2 recomputed with the second box taken from the next trial (independent)
    std::optional<EstimateRecord> w2_decoupled;
    bool cross_check_agrees = true;  // Wilson intervals of w2 and w2_decoupled overlap
};

struct WegnerOptions {
    bool pair_events = true;
    Placement placement;
};

std::vector<WegnerRow> wegner_sweep(const ModelSpec& model, const std::vector<int>& scales,
                                    double E, std::size_t trials, const ScaleSchedule& sched,
                                    std::uint64_t seed, const WegnerOptions& wopt = {},
                                    const RunOptions& options = {});

struct DecayFit {
    std::size_t eigen_index = 0;
    double energy = 0.0;
    Point2 center;                // argmax |psi|
    std::vector<double> profile;  // max |psi| on each shell ||x - center|| = r
    int fit_lo = 0;
    int fit_hi = 0;
    std::vector<int> excluded_shells;  // shells in range with exact zeros
    double slope = 0.0;
    double m_hat = 0.0;  // -slope
    double residual = 0.0;
    bool valid = false;  // at least two usable shells
};

struct DecaySummary {
    std::vector<DecayFit> fits;
    double median_m_hat = 0.0;
};

DecaySummary decay_fit(const FiniteOperator& op, const SpectralData& spectral);

struct MassStatistics {
    double g = 0.0;
    std::vector<double> sample_medians;
    double median = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    double half_width() const noexcept { return 0.5 * (ci_hi - ci_lo); }
};

/// Median m_hat over eigenvectors, then over samples; bootstrap 95% CI of the
/// outer median.
MassStatistics mass_statistics(const ModelSpec& model, int L, std::size_t samples,
                               std::uint64_t seed, std::size_t bootstrap = 2000,
                               const RunOptions& options = {});

struct RecoverySweep {
    Box2 parent;
    int sub_radius = 0;
    std::size_t eigenpairs = 0;
    std::size_t checked = 0;          // (eigenpair, sub-box) pairs reconstructed
    std::size_t skipped_resonant = 0; // E_s within the gap floor of the sub-box spectrum
    std::size_t failures = 0;         // relative error above tolerance
    double max_relative_error = 0.0;  // error / ||Psi||_inf
    double tolerance = 1e-6;
};

/// For every eigenpair of the parent box and every sub-box whose exterior
/// boundary stays inside the parent, rebuilds Psi on the sub-box from its
/// exterior boundary values.  Sub-boxes with a spectral gap below
/// 1e-8 (1 + ||H||) at E_s are skipped and counted.
RecoverySweep recovery_sweep(const ModelContext& ctx, const Box2& parent, int sub_radius,
                             double tolerance = 1e-6);

struct ProbeTrial {
    bool b = false;
    bool t = false;
    bool sigma = false;
    bool rest = false;  // B and not T and not Sigma
    bool identity_holds() const noexcept { return !b || t || sigma || rest; }
};

struct ProbeResult {
    EstimateRecord b;
    EstimateRecord t;
    EstimateRecord sigma;
    EstimateRecord rest;
    std::vector<ProbeTrial> per_trial;
    bool identity_every_trial = true;
    bool count_inequality = true;  // #B <= #T + #Sigma + #rest
};

ProbeResult ss_induction_probe(const ModelSpec& model, const ScaleSchedule& sched, int k,
                               std::size_t trials, std::uint64_t seed, const Interval& I,
                               const RunOptions& options = {});

}  // namespace msalab
