#include "msalab/records.hpp"

#include <cmath>
#include <limits>

#include "msalab/errors.hpp"

namespace msalab {

Json number_to_json(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

double number_from_json(const Json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    }
    throw InvalidInput("expected a number, got " + j.dump());
}

namespace {

void put(Json& j, const char* key, double v) { j[key] = number_to_json(v); }

template <class T>
void put(Json& j, const char* key, const T& v) {
    j[key] = v;
}

template <class T>
void put(Json& j, const char* key, const std::optional<T>& v) {
    if (v) {
        put(j, key, *v);
    } else {
        j[key] = nullptr;
    }
}

void get(const Json& j, const char* key, double& out) { out = number_from_json(j.at(key)); }

template <class T>
void get(const Json& j, const char* key, T& out) {
    out = j.at(key).get<T>();
}

template <class T>
void get(const Json& j, const char* key, std::optional<T>& out) {
    if (!j.contains(key) || j.at(key).is_null()) {
        out.reset();
        return;
    }
    T v{};
    get(j, key, v);
    out = std::move(v);
}

}  // namespace

void to_json(Json& j, const Point1& p) { j = p.coords; }
void from_json(const Json& j, Point1& p) { p.coords = j.get<std::vector<int>>(); }

void to_json(Json& j, const Point2& p) { j = Json::array({p.x1.coords, p.x2.coords}); }
void from_json(const Json& j, Point2& p) {
    if (!j.is_array() || j.size() != 2) throw InvalidInput("a two-particle point is [x1, x2]");
    p = Point2(j[0].get<Point1>(), j[1].get<Point1>());
}

void to_json(Json& j, const Box1& b) { j = {{"center", b.center}, {"radius", b.radius}}; }
void from_json(const Json& j, Box1& b) {
    b = Box1(j.at("center").get<Point1>(), j.at("radius").get<int>());
}

void to_json(Json& j, const Box2& b) { j = {{"center", b.center}, {"radius", b.radius}}; }
void from_json(const Json& j, Box2& b) {
    b = Box2(j.at("center").get<Point2>(), j.at("radius").get<int>());
}

void to_json(Json& j, const Interval& i) {
    j = Json::array({number_to_json(i.lo), number_to_json(i.hi)});
}
void from_json(const Json& j, Interval& i) {
    if (!j.is_array() || j.size() != 2) throw InvalidInput("an interval is [lo, hi]");
    i.lo = number_from_json(j[0]);
    i.hi = number_from_json(j[1]);
}

void to_json(Json& j, const DistributionSpec& s) {
    j = Json::object();
    put(j, "kind", to_string(s.kind));
    put(j, "a", s.a);
    put(j, "b", s.b);
    if (s.kind == DistributionKind::TruncatedGaussian) {
        put(j, "mean", s.mean);
        put(j, "stddev", s.stddev);
    }
    if (s.kind == DistributionKind::PiecewiseDensity) put(j, "weights", s.weights);
}
void from_json(const Json& j, DistributionSpec& s) {
    s = DistributionSpec{};
    s.kind = distribution_kind_from_string(j.at("kind").get<std::string>());
    if (j.contains("a")) get(j, "a", s.a);
    if (j.contains("b")) get(j, "b", s.b);
    if (j.contains("mean")) get(j, "mean", s.mean);
    if (j.contains("stddev")) get(j, "stddev", s.stddev);
    if (j.contains("weights")) get(j, "weights", s.weights);
}

void to_json(Json& j, const InteractionSpec& s) { j = {{"r0", s.r0}, {"profile", s.profile}}; }
void from_json(const Json& j, InteractionSpec& s) {
    s.r0 = j.at("r0").get<int>();
    if (j.contains("profile")) {
        s.profile = j.at("profile").get<std::vector<double>>();
    } else {
        s = InteractionSpec::linear(s.r0, j.contains("u0") ? j.at("u0").get<double>() : 1.0);
    }
}

void to_json(Json& j, const DisorderSample& s) {
    j = {{"seed", s.seed()}, {"trial", s.trial()}, {"sites", s.sites()}, {"values", s.values()}};
}
void from_json(const Json& j, DisorderSample& s) {
    s = DisorderSample(j.at("seed").get<std::uint64_t>(), j.at("trial").get<std::uint64_t>(),
                       j.at("sites").get<std::vector<Point1>>(),
                       j.at("values").get<std::vector<double>>());
}

void to_json(Json& j, const ScheduleParams& p) {
    j = Json::object();
    put(j, "d", p.d);
    put(j, "L0", p.L0);
    put(j, "alpha", p.alpha);
    put(j, "gamma", p.gamma);
    put(j, "m0", p.m0);
    put(j, "beta", p.beta);
    put(j, "p", p.p);
    put(j, "q", p.q);
    put(j, "p_tilde", p.p_tilde);
    put(j, "r0", p.r0);
    put(j, "g", p.g);
    put(j, "J", p.J);
    put(j, "preset", to_string(p.preset));
}
void from_json(const Json& j, ScheduleParams& p) {
    get(j, "d", p.d);
    get(j, "L0", p.L0);
    get(j, "alpha", p.alpha);
    get(j, "gamma", p.gamma);
    get(j, "m0", p.m0);
    get(j, "beta", p.beta);
    get(j, "p", p.p);
    get(j, "q", p.q);
    get(j, "p_tilde", p.p_tilde);
    get(j, "r0", p.r0);
    get(j, "g", p.g);
    get(j, "J", p.J);
    p.preset = preset_from_string(j.at("preset").get<std::string>());
}

void to_json(Json& j, const ScaleSchedule& s) {
    j = {{"params", s.params},
         {"lengths", s.lengths},
         {"masses", s.masses},
         {"non_paper_regime", s.non_paper_regime}};
}
void from_json(const Json& j, ScaleSchedule& s) {
    get(j, "params", s.params);
    get(j, "lengths", s.lengths);
    get(j, "masses", s.masses);
    get(j, "non_paper_regime", s.non_paper_regime);
}

void to_json(Json& j, const Constraint& c) {
    j = Json::object();
    put(j, "name", c.name);
    put(j, "relation", c.relation);
    put(j, "lhs", c.lhs);
    put(j, "rhs", c.rhs);
    put(j, "passed", c.passed);
    put(j, "structural", c.structural);
}
void from_json(const Json& j, Constraint& c) {
    get(j, "name", c.name);
    get(j, "relation", c.relation);
    get(j, "lhs", c.lhs);
    get(j, "rhs", c.rhs);
    get(j, "passed", c.passed);
    get(j, "structural", c.structural);
}

void to_json(Json& j, const ConstraintReport& r) {
    j = Json::object();
    put(j, "constraints", r.constraints);
    put(j, "s", r.s);
    put(j, "q_prime", r.q_prime);
    put(j, "non_paper_regime", r.non_paper_regime);
    put(j, "all_passed", r.all_passed());
}
void from_json(const Json& j, ConstraintReport& r) {
    get(j, "constraints", r.constraints);
    get(j, "s", r.s);
    get(j, "q_prime", r.q_prime);
    get(j, "non_paper_regime", r.non_paper_regime);
}

void to_json(Json& j, const NsResult& r) {
    j = Json::object();
    put(j, "ns", r.ns);
    put(j, "degenerate", r.degenerate);
    put(j, "resonant", r.resonant);
    put(j, "threshold", r.threshold);
    put(j, "max_boundary", r.max_boundary);
    put(j, "argmax", r.argmax);
}
void from_json(const Json& j, NsResult& r) {
    get(j, "ns", r.ns);
    get(j, "degenerate", r.degenerate);
    get(j, "resonant", r.resonant);
    get(j, "threshold", r.threshold);
    get(j, "max_boundary", r.max_boundary);
    get(j, "argmax", r.argmax);
}

void to_json(Json& j, const ResonanceResult& r) {
    j = Json::object();
    put(j, "resonant", r.resonant);
    put(j, "gap", r.gap);
    put(j, "threshold", r.threshold);
    put(j, "nearest", r.nearest);
}
void from_json(const Json& j, ResonanceResult& r) {
    get(j, "resonant", r.resonant);
    get(j, "gap", r.gap);
    get(j, "threshold", r.threshold);
    get(j, "nearest", r.nearest);
}

void to_json(Json& j, const CnrResult& r) {
    j = Json::object();
    put(j, "cnr", r.cnr);
    put(j, "box_nr", r.box_nr);
    put(j, "exhaustive", r.exhaustive);
    put(j, "total_subboxes", r.total_subboxes);
    put(j, "checked_subboxes", r.checked_subboxes);
    put(j, "counterexample", r.counterexample);
    put(j, "counterexample_gap", r.counterexample_gap);
}
void from_json(const Json& j, CnrResult& r) {
    get(j, "cnr", r.cnr);
    get(j, "box_nr", r.box_nr);
    get(j, "exhaustive", r.exhaustive);
    get(j, "total_subboxes", r.total_subboxes);
    get(j, "checked_subboxes", r.checked_subboxes);
    get(j, "counterexample", r.counterexample);
    get(j, "counterexample_gap", r.counterexample_gap);
}

void to_json(Json& j, const NtResult& r) {
    j = Json::object();
    put(j, "nt", r.nt);
    put(j, "degenerate", r.degenerate);
    put(j, "threshold", r.threshold);
    put(j, "max_product", r.max_product);
    put(j, "eigen_index", r.eigen_index);
    put(j, "argmax", r.argmax);
}
void from_json(const Json& j, NtResult& r) {
    get(j, "nt", r.nt);
    get(j, "degenerate", r.degenerate);
    get(j, "threshold", r.threshold);
    get(j, "max_product", r.max_product);
    get(j, "eigen_index", r.eigen_index);
    get(j, "argmax", r.argmax);
}

void to_json(Json& j, const NtPairResult& r) {
    j = {{"nt", r.nt}, {"first", r.first}, {"second", r.second}};
}
void from_json(const Json& j, NtPairResult& r) {
    get(j, "nt", r.nt);
    get(j, "first", r.first);
    get(j, "second", r.second);
}

void to_json(Json& j, const Lemma32Report& r) {
    j = Json::object();
    put(j, "non_interactive", r.non_interactive);
    put(j, "projections_nt", r.projections_nt);
    put(j, "box_nr", r.box_nr);
    put(j, "size_condition", r.size_condition);
    put(j, "hypotheses", r.hypotheses);
    put(j, "m_hat", r.m_hat);
    put(j, "m_hat1", r.m_hat1);
    put(j, "nt", r.nt);
    put(j, "resonance", r.resonance);
    put(j, "ns", r.ns);
    put(j, "holds", r.holds);
    put(j, "margin", r.margin);
}
void from_json(const Json& j, Lemma32Report& r) {
    get(j, "non_interactive", r.non_interactive);
    get(j, "projections_nt", r.projections_nt);
    get(j, "box_nr", r.box_nr);
    get(j, "size_condition", r.size_condition);
    get(j, "hypotheses", r.hypotheses);
    get(j, "m_hat", r.m_hat);
    get(j, "m_hat1", r.m_hat1);
    get(j, "nt", r.nt);
    get(j, "resonance", r.resonance);
    get(j, "ns", r.ns);
    get(j, "holds", r.holds);
    get(j, "margin", r.margin);
}

void to_json(Json& j, const ClassificationReport& r) {
    j = Json::object();
    put(j, "box", r.box);
    put(j, "energy", r.energy);
    put(j, "mass", r.mass);
    put(j, "beta", r.beta);
    put(j, "interactive", r.interactive);
    put(j, "ns", r.ns);
    put(j, "resonance", r.resonance);
    put(j, "cnr", r.cnr);
    put(j, "nt", r.nt);
    put(j, "J", r.J);
    put(j, "m_hat", r.m_hat);
}
void from_json(const Json& j, ClassificationReport& r) {
    get(j, "box", r.box);
    get(j, "energy", r.energy);
    get(j, "mass", r.mass);
    get(j, "beta", r.beta);
    get(j, "interactive", r.interactive);
    get(j, "ns", r.ns);
    get(j, "resonance", r.resonance);
    get(j, "cnr", r.cnr);
    get(j, "nt", r.nt);
    get(j, "J", r.J);
    get(j, "m_hat", r.m_hat);
}

void to_json(Json& j, const SeparatedSubset& s) {
    j = {{"size", s.size}, {"chosen", s.chosen}, {"centres", s.centres}, {"exact", s.exact}};
}
void from_json(const Json& j, SeparatedSubset& s) {
    get(j, "size", s.size);
    get(j, "chosen", s.chosen);
    get(j, "centres", s.centres);
    get(j, "exact", s.exact);
}

void to_json(Json& j, const SubboxClass& s) {
    j = Json::object();
    put(j, "center", s.center);
    put(j, "interactive", s.interactive);
    put(j, "singular", s.singular);
    put(j, "max_boundary", s.max_boundary);
}
void from_json(const Json& j, SubboxClass& s) {
    get(j, "center", s.center);
    get(j, "interactive", s.interactive);
    get(j, "singular", s.singular);
    get(j, "max_boundary", s.max_boundary);
}

void to_json(Json& j, const CounterReport& r) {
    j = Json::object();
    put(j, "parent", r.parent);
    put(j, "energy", r.energy);
    put(j, "Lk", r.Lk);
    put(j, "mk", r.mk);
    put(j, "candidates_ni", r.candidates_ni);
    put(j, "candidates_i", r.candidates_i);
    put(j, "singular", r.singular);
    put(j, "M", r.M);
    put(j, "N", r.N);
    put(j, "K", r.K);
    put(j, "exact", r.exact());
}
void from_json(const Json& j, CounterReport& r) {
    get(j, "parent", r.parent);
    get(j, "energy", r.energy);
    get(j, "Lk", r.Lk);
    get(j, "mk", r.mk);
    get(j, "candidates_ni", r.candidates_ni);
    get(j, "candidates_i", r.candidates_i);
    get(j, "singular", r.singular);
    get(j, "M", r.M);
    get(j, "N", r.N);
    get(j, "K", r.K);
}

void to_json(Json& j, const Lemma45Report& r) {
    j = Json::object();
    put(j, "parent", r.parent);
    put(j, "energy", r.energy);
    put(j, "k", r.k);
    put(j, "J", r.J);
    put(j, "cnr", r.cnr);
    put(j, "counters", r.counters);
    put(j, "hypotheses", r.hypotheses);
    put(j, "step_factor", r.step_factor);
    put(j, "target_mass", r.target_mass);
    put(j, "mass_source", r.mass_source);
    put(j, "ns", r.ns);
    put(j, "holds", r.holds);
    put(j, "margin", r.margin);
}
void from_json(const Json& j, Lemma45Report& r) {
    get(j, "parent", r.parent);
    get(j, "energy", r.energy);
    get(j, "k", r.k);
    get(j, "J", r.J);
    get(j, "cnr", r.cnr);
    get(j, "counters", r.counters);
    get(j, "hypotheses", r.hypotheses);
    get(j, "step_factor", r.step_factor);
    get(j, "target_mass", r.target_mass);
    get(j, "mass_source", r.mass_source);
    get(j, "ns", r.ns);
    get(j, "holds", r.holds);
    get(j, "margin", r.margin);
}

void to_json(Json& j, const Placement& p) {
    j = {{"region", p.region}, {"max_attempts", p.max_attempts}};
}
void from_json(const Json& j, Placement& p) {
    get(j, "region", p.region);
    get(j, "max_attempts", p.max_attempts);
}

void to_json(Json& j, const EventSpec& s) {
    j = Json::object();
    put(j, "kind", to_string(s.kind));
    put(j, "k", s.k);
    put(j, "I", s.I);
    put(j, "energy", s.energy);
    put(j, "scale", s.scale);
    put(j, "mass", s.mass);
    put(j, "m_hat", s.m_hat);
    put(j, "n", s.n);
    put(j, "bernoulli_p", s.bernoulli_p);
    put(j, "placement", s.placement);
}
void from_json(const Json& j, EventSpec& s) {
    s.kind = event_kind_from_string(j.at("kind").get<std::string>());
    get(j, "k", s.k);
    get(j, "I", s.I);
    get(j, "energy", s.energy);
    get(j, "scale", s.scale);
    get(j, "mass", s.mass);
    get(j, "m_hat", s.m_hat);
    get(j, "n", s.n);
    get(j, "bernoulli_p", s.bernoulli_p);
    get(j, "placement", s.placement);
}

void to_json(Json& j, const WilsonInterval& w) {
    j = Json::array({number_to_json(w.lo), number_to_json(w.hi)});
}
void from_json(const Json& j, WilsonInterval& w) {
    w.lo = number_from_json(j.at(0));
    w.hi = number_from_json(j.at(1));
}

void to_json(Json& j, const EstimateRecord& r) {
    j = Json::object();
    put(j, "event", r.spec);
    put(j, "trials", r.trials);
    put(j, "successes", r.successes);
    put(j, "estimate", r.estimate);
    put(j, "ci95", r.ci);
    put(j, "bound", r.bound);
    put(j, "bound_label", r.bound_label);
    put(j, "comparison", to_string(r.comparison));
    put(j, "seed", r.seed);
    put(j, "box_radius", r.box_radius);
    put(j, "mass", r.mass);
    put(j, "grid_spacing", r.grid_spacing);
    put(j, "grid_points", r.grid_points);
    put(j, "grid_lower_bound", r.grid_lower_bound);
    put(j, "g", r.g);
    put(j, "adjacency", r.adjacency);
}
void from_json(const Json& j, EstimateRecord& r) {
    get(j, "event", r.spec);
    get(j, "trials", r.trials);
    get(j, "successes", r.successes);
    get(j, "estimate", r.estimate);
    get(j, "ci95", r.ci);
    get(j, "bound", r.bound);
    get(j, "bound_label", r.bound_label);
    r.comparison = comparison_from_string(j.at("comparison").get<std::string>());
    get(j, "seed", r.seed);
    get(j, "box_radius", r.box_radius);
    get(j, "mass", r.mass);
    get(j, "grid_spacing", r.grid_spacing);
    get(j, "grid_points", r.grid_points);
    get(j, "grid_lower_bound", r.grid_lower_bound);
    get(j, "g", r.g);
    get(j, "adjacency", r.adjacency);
}

void to_json(Json& j, const Certificate& c) {
    j = Json::object();
    put(j, "c0_paper", c.c0_paper);
    put(j, "c0", c.c0);
    put(j, "min_gap", c.min_gap);
    put(j, "holds", c.holds);
    put(j, "max_resolvent_norm", c.max_resolvent_norm);
    put(j, "bound", c.bound);
    put(j, "implication_holds", c.implication_holds);
    put(j, "grid_points", c.grid_points);
}
void from_json(const Json& j, Certificate& c) {
    get(j, "c0_paper", c.c0_paper);
    get(j, "c0", c.c0);
    get(j, "min_gap", c.min_gap);
    get(j, "holds", c.holds);
    get(j, "max_resolvent_norm", c.max_resolvent_norm);
    get(j, "bound", c.bound);
    get(j, "implication_holds", c.implication_holds);
    get(j, "grid_points", c.grid_points);
}

void to_json(Json& j, const WegnerRow& r) {
    j = Json::object();
    put(j, "l", r.l);
    put(j, "reference", r.reference);
    put(j, "w1", r.w1);
    put(j, "w2", r.w2);
    put(j, "w2_decoupled", r.w2_decoupled);
    put(j, "cross_check_agrees", r.cross_check_agrees);
}
void from_json(const Json& j, WegnerRow& r) {
    get(j, "l", r.l);
    get(j, "reference", r.reference);
    get(j, "w1", r.w1);
    get(j, "w2", r.w2);
    get(j, "w2_decoupled", r.w2_decoupled);
    get(j, "cross_check_agrees", r.cross_check_agrees);
}

void to_json(Json& j, const DecayFit& f) {
    j = Json::object();
    put(j, "eigen_index", f.eigen_index);
    put(j, "energy", f.energy);
    put(j, "center", f.center);
    put(j, "profile", f.profile);
    put(j, "fit_lo", f.fit_lo);
    put(j, "fit_hi", f.fit_hi);
    put(j, "excluded_shells", f.excluded_shells);
    put(j, "slope", f.slope);
    put(j, "m_hat", f.m_hat);
    put(j, "residual", f.residual);
    put(j, "valid", f.valid);
}
void from_json(const Json& j, DecayFit& f) {
    get(j, "eigen_index", f.eigen_index);
    get(j, "energy", f.energy);
    get(j, "center", f.center);
    get(j, "profile", f.profile);
    get(j, "fit_lo", f.fit_lo);
    get(j, "fit_hi", f.fit_hi);
    get(j, "excluded_shells", f.excluded_shells);
    get(j, "slope", f.slope);
    get(j, "m_hat", f.m_hat);
    get(j, "residual", f.residual);
    get(j, "valid", f.valid);
}

void to_json(Json& j, const MassStatistics& m) {
    j = Json::object();
    put(j, "g", m.g);
    put(j, "sample_medians", m.sample_medians);
    put(j, "median", m.median);
    put(j, "ci95", Json::array({number_to_json(m.ci_lo), number_to_json(m.ci_hi)}));
}
void from_json(const Json& j, MassStatistics& m) {
    get(j, "g", m.g);
    get(j, "sample_medians", m.sample_medians);
    get(j, "median", m.median);
    m.ci_lo = number_from_json(j.at("ci95").at(0));
    m.ci_hi = number_from_json(j.at("ci95").at(1));
}

void to_json(Json& j, const RecoverySweep& r) {
    j = Json::object();
    put(j, "parent", r.parent);
    put(j, "sub_radius", r.sub_radius);
    put(j, "eigenpairs", r.eigenpairs);
    put(j, "checked", r.checked);
    put(j, "skipped_resonant", r.skipped_resonant);
    put(j, "failures", r.failures);
    put(j, "max_relative_error", r.max_relative_error);
    put(j, "tolerance", r.tolerance);
}
void from_json(const Json& j, RecoverySweep& r) {
    get(j, "parent", r.parent);
    get(j, "sub_radius", r.sub_radius);
    get(j, "eigenpairs", r.eigenpairs);
    get(j, "checked", r.checked);
    get(j, "skipped_resonant", r.skipped_resonant);
    get(j, "failures", r.failures);
    get(j, "max_relative_error", r.max_relative_error);
    get(j, "tolerance", r.tolerance);
}

void to_json(Json& j, const ProbeTrial& t) {
    j = {{"B", t.b}, {"T", t.t}, {"Sigma", t.sigma}, {"rest", t.rest}};
}
void from_json(const Json& j, ProbeTrial& t) {
    get(j, "B", t.b);
    get(j, "T", t.t);
    get(j, "Sigma", t.sigma);
    get(j, "rest", t.rest);
}

Json spectrum_record(const FiniteOperator& op, const SpectralData& spectral) {
    Json j = Json::object();
    if (op.two_particle()) {
        put(j, "box", op.box2());
    } else {
        put(j, "box1", op.box1());
        put(j, "particle", op.particle);
    }
    put(j, "adjacency", to_string(op.adjacency));
    put(j, "g", op.coupling);
    put(j, "dimension", op.dimension());
    std::vector<double> ev(spectral.eigenvalues.data(),
                           spectral.eigenvalues.data() + spectral.eigenvalues.size());
    put(j, "eigenvalues", ev);
    put(j, "norm", spectral.norm);
    put(j, "max_relative_residual", spectral.max_relative_residual());
    put(j, "orthonormality_defect", spectral.orthonormality_defect());
    return j;
}

Json green_record(const FiniteOperator& op, const GreenColumn& column) {
    Json j = Json::object();
    put(j, "box", op.box2());
    put(j, "energy", column.energy);
    put(j, "source", op.box2().point_at(column.source));
    std::vector<double> v(column.values.data(), column.values.data() + column.values.size());
    put(j, "values", v);
    put(j, "residual", column.residual);
    return j;
}

Json recovery_record(const RecoveryResult& r) {
    Json j = Json::object();
    put(j, "points", r.points.size());
    put(j, "max_error", r.max_error);
    put(j, "psi_sup", r.psi_sup);
    put(j, "relative_error", r.psi_sup > 0 ? r.max_error / r.psi_sup : r.max_error);
    return j;
}

}  // namespace msalab
