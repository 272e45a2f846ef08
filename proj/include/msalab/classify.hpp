#pragma once

// Box predicates of the multiscale analysis: (E,m)-singularity, E-resonance,
// complete non-resonance, tunnelling, and the deterministic NT + NR => NS
// implication for non-interactive boxes.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "msalab/disorder.hpp"
#include "msalab/geometry.hpp"
#include "msalab/hamiltonian.hpp"

namespace msalab {

/// Everything needed to assemble box operators for one disorder realisation.
struct ModelContext {
    const DisorderSample* sample = nullptr;
    InteractionSpec interaction;
    double g = 1.0;
    Adjacency adjacency = Adjacency::SupNorm;

    FiniteOperator two_particle(const Box2& box) const;
    FiniteOperator single_particle(const Box1& box, int particle = 1) const;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double length() const noexcept { return hi - lo; }
    bool contains(double e) const noexcept { return lo <= e && e <= hi; }
};

/// Energy grid of spacing min(0.01 |I|, e^{-L^beta} / 2) covering I, endpoints
/// included.  Used wherever "exists E in I" is asked of a resolvent predicate.
std::vector<double> energy_grid(const Interval& I, int L, double beta);
double grid_spacing(const Interval& I, int L, double beta);

struct NsResult {
    bool ns = true;
    bool degenerate = false;  // L = 0: empty boundary
    bool resonant = false;    // E hit the spectrum; classified S
    double threshold = 0.0;   // e^{-mL}
    double max_boundary = 0.0;
    Point2 argmax;
};

/// (E,m)-NS iff max_{y in dLambda} |G(E; u, y)| <= e^{-mL}.
NsResult is_ns(const FiniteOperator& op, double E, double m,
               const SpectralData* spectral = nullptr);
NsResult is_ns(const ModelContext& ctx, const Box2& box, double E, double m);

struct ResonanceResult {
    bool resonant = false;
    double gap = 0.0;        // dist(E, spec)
    double threshold = 0.0;  // e^{-L^beta}
    double nearest = 0.0;    // closest eigenvalue
};

/// E-R iff dist(E, spec) < e^{-L^beta}.
ResonanceResult is_resonant(std::span<const double> eigenvalues, double E, int L, double beta);
ResonanceResult is_resonant(const SpectralData& spectral, double E, int L, double beta);

struct PairResonance {
    bool found = false;
    double lambda = 0.0;  // witness eigenvalue of the first spectrum
    double mu = 0.0;      // witness eigenvalue of the second spectrum
    double energy = 0.0;  // an energy in I within e^{-L^beta} of both
};

/// Exact test for "exists E in I at which both spectra are E-R": some pair
/// (lambda, mu) whose open window (max - w, min + w), w = e^{-L^beta}, meets I.
PairResonance exists_resonant_pair(std::span<const double> spec1, std::span<const double> spec2,
                                   const Interval& I, int L, double beta);

struct CnrResult {
    bool cnr = true;
    bool box_nr = true;
    bool exhaustive = true;
    std::size_t total_subboxes = 0;
    std::size_t checked_subboxes = 0;
    // first resonant sub-box found, if any
    std::optional<Box2> counterexample;
    double counterexample_gap = 0.0;
};

struct CnrOptions {
    std::size_t exhaustive_budget = 100000;
    std::size_t sample_count = 10000;
    std::uint64_t sample_seed = 0;
};

/// Radius of the j-th intermediate sub-box, j (L_k + 1).
inline int cnr_radius(int j, int Lk) { return j * (Lk + 1); }

/// (E,J)-CNR: the box is E-NR and so is every Lambda_{j(L_k+1)}(y) inside it,
/// j = 1..J.  Sub-boxes are enumerated exhaustively below the budget, else a
/// seeded uniform sample is checked and the result marked inexact.
CnrResult is_cnr(const ModelContext& ctx, const Box2& box, double E, int J, int Lk, double beta,
                 const CnrOptions& options = {});

struct NtResult {
    bool nt = true;
    bool degenerate = false;
    double threshold = 0.0;  // e^{-m l}
    double max_product = 0.0;
    std::size_t eigen_index = 0;
    Point1 argmax;
};

/// m-NT iff max over eigenpairs s and boundary y of |psi_s(v) psi_s(y)| <= e^{-m l}.
NtResult is_nontunnelling(const FiniteOperator& op1, const SpectralData& spectral, double m_hat);
NtResult is_nontunnelling(const ModelContext& ctx, const Box1& box, double m_hat, int particle = 1);

struct NtPairResult {
    bool nt = true;
    NtResult first;
    NtResult second;
};

/// A two-particle box is NT iff both projections are.
NtPairResult is_nontunnelling(const ModelContext& ctx, const Box2& box, double m_hat);

/// m^(1) = m (1 - L^{-1+beta} - L^{-1} ln (2L+1)^{2d}).
double lemma32_mass(double m_hat, int L, double beta, int d);
/// L^{-1} (L^beta + ln (2L+1)^{2d}) < 1
bool lemma32_size_condition(int L, double beta, int d);

struct Lemma32Report {
    bool non_interactive = false;
    bool projections_nt = false;
    bool box_nr = false;
    bool size_condition = false;
    bool hypotheses = false;  // all of the above
    double m_hat = 0.0;
    double m_hat1 = 0.0;
    NtPairResult nt;
    ResonanceResult resonance;
    std::optional<NsResult> ns;  // evaluated only when hypotheses hold
    bool holds = true;           // vacuously true when skipped
    double margin = 0.0;         // ln e^{-m1 L} - ln max|G|, >= 0 iff NS
};

Lemma32Report lemma32_check(const ModelContext& ctx, const Box2& box, double E, double m_hat,
                            double beta);

struct ClassificationReport {
    Box2 box;
    double energy = 0.0;
    double mass = 0.0;
    double beta = 0.5;
    bool interactive = false;
    NsResult ns;
    ResonanceResult resonance;
    std::optional<CnrResult> cnr;
    std::optional<NtPairResult> nt;
    int J = 0;
    double m_hat = 0.0;
};

struct ClassifyOptions {
    double mass = 0.5;
    double beta = 0.5;
    int J = 0;    // 0 skips the CNR test
    int Lk = 0;   // lower scale for CNR radii
    std::optional<double> m_hat;  // NT test when set
    CnrOptions cnr;
};

ClassificationReport classify_box(const ModelContext& ctx, const Box2& box, double E,
                                  const ClassifyOptions& options);

}  // namespace msalab
