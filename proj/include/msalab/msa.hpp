#pragma once

// Scale and mass schedules, parameter constraints, singular sub-box counters
// and the deterministic inductive step at one scale.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "msalab/classify.hpp"

namespace msalab {

enum class Preset { Paper, Desk, Custom };

std::string to_string(Preset p);
Preset preset_from_string(const std::string& s);

struct ScheduleParams {
    int d = 1;
    double L0 = 3.0;
    double alpha = 1.5;
    double gamma = 1.0;
    double m0 = 1.0;
    double beta = 0.5;
    double p = 22.0;
    double q = 101.0;
    std::optional<double> p_tilde;
    int r0 = 1;
    double g = 30.0;
    int J = 9;
    Preset preset = Preset::Desk;

    static ScheduleParams paper();
    static ScheduleParams desk();

    bool operator==(const ScheduleParams&) const = default;
};

struct ScaleSchedule {
    ScheduleParams params;
    std::vector<std::int64_t> lengths;  // L_k = ceil(L0^{alpha^k})
    std::vector<double> masses;         // m_k = m0 prod_{j=1..k} (1 - gamma L_j^{-1/2})
    bool non_paper_regime = true;

    int k_max() const noexcept { return static_cast<int>(lengths.size()) - 1; }
    int length(int k) const;
    double mass(int k) const;
};

/// Builds L_0..L_kmax and m_0..m_kmax.  Throws InvalidInput on L0 < 2,
/// alpha <= 1 or m0 <= 0 and InfeasibleSchedule naming the first k with m_k <= 0.
ScaleSchedule schedule(const ScheduleParams& params, int k_max);

/// 1 - (5J + 6) / (2 L_k)^{1/2}
double mass_step_factor(double Lk, int J);
/// m_k (1 - (5J + 6) / (2 L_k)^{1/2}); throws InfeasibleSchedule when <= 0.
double mass_step(double mk, double Lk, int J);

/// prod_{j >= 1} (1 - gamma L_j^{-1/2}) with L_j = L0^{alpha^j}, evaluated until
/// the factors are 1 to double precision (or 0 if some factor is <= 0).
double mass_product(double L0, double alpha, double gamma, int max_terms = 200);

struct Constraint {
    std::string name;
    std::string relation;  // human-readable inequality
    double lhs = 0.0;
    double rhs = 0.0;
    bool passed = false;
    bool structural = true;  // false for size conditions that desk scales drop
};

struct ConstraintReport {
    std::vector<Constraint> constraints;
    double s = 0.0;        // (p_tilde - 2 (1 + alpha) d) / alpha, when p_tilde is known
    double q_prime = 0.0;  // q / alpha
    bool non_paper_regime = true;

    bool all_passed() const;
    bool structural_passed() const;
    const Constraint* find(const std::string& name) const;
};

ConstraintReport validate_parameters(const ScheduleParams& params);

struct SeparatedSubset {
    std::size_t size = 0;
    std::vector<std::size_t> chosen;  // indices into the candidate list
    std::vector<Point2> centres;      // the chosen centres themselves
    bool exact = true;
};

inline constexpr std::size_t kExactSubsetLimit = 40;

/// Largest subset of centres that are pairwise R-distant
/// (min(||u - v||, ||sigma u - v||) > 8R); exact branch and bound up to
/// kExactSubsetLimit centres, greedy above.
SeparatedSubset max_separated_subset(const std::vector<Point2>& centres, int R);

struct SubboxClass {
    Point2 center;
    bool interactive = false;
    bool singular = false;
    double max_boundary = 0.0;
};

struct CounterReport {
    Box2 parent;
    double energy = 0.0;
    int Lk = 0;
    double mk = 0.0;
    std::size_t candidates_ni = 0;
    std::size_t candidates_i = 0;
    std::vector<SubboxClass> singular;  // singular candidates only
    SeparatedSubset M;                  // NI singular
    SeparatedSubset N;                  // I singular
    SeparatedSubset K;                  // all singular
    bool exact() const noexcept { return M.exact && N.exact && K.exact; }
};

/// Classifies every Lambda_{L_k}(x) inside the parent at (E, m_k) and counts
/// maximal pairwise L_k-distant singular families: M over NI boxes, N over I
/// boxes, K over all.  Interactive candidates are those meeting D_{r0}.
CounterReport count_singular_subboxes(const ModelContext& ctx, const Box2& parent, double E,
                                      int Lk, double mk);

struct Lemma45Report {
    Box2 parent;
    double energy = 0.0;
    int k = 0;
    int J = 0;
    CnrResult cnr;
    CounterReport counters;
    bool hypotheses = false;  // CNR and K <= J
    double step_factor = 0.0;
    double target_mass = 0.0;
    std::string mass_source;  // "mass-step" or "schedule" when the step bound is vacuous
    std::optional<NsResult> ns;
    bool holds = true;
    double margin = 0.0;
};

/// Checks "CNR and K <= J  =>  (E, m_{k+1})-NS" on one parent box of scale k+1.
Lemma45Report lemma45_step(const ModelContext& ctx, const Box2& parent, double E,
                           const ScaleSchedule& sched, int k, const CnrOptions& cnr = {});

}  // namespace msalab
