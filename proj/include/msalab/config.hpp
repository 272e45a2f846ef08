#pragma once

// Experiment configuration: one JSON object, validated field by field.
// Unknown keys are rejected so a typo never silently falls back to a default.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "msalab/errors.hpp"
#include "msalab/experiment.hpp"
#include "msalab/records.hpp"

namespace msalab {

class ConfigError : public InvalidInput {
public:
    explicit ConfigError(std::vector<std::string> diagnostics);
    const char* kind() const noexcept override { return "invalid-config"; }
    const std::vector<std::string>& diagnostics() const noexcept { return diagnostics_; }

private:
    std::vector<std::string> diagnostics_;
};

struct BoxConfig {
    Point2 center;
    int radius = 1;
};

struct ExperimentConfig {
    int d = 1;
    Adjacency adjacency = Adjacency::SupNorm;
    Preset preset = Preset::Desk;
    DistributionSpec distribution = DistributionSpec::uniform();
    InteractionSpec interaction = InteractionSpec::linear(1, 1.0);
    double g = 30.0;
    ScheduleParams schedule = ScheduleParams::desk();
    int k_max = 2;

    Interval energy_interval{-0.5, 0.5};
    double energy = 0.0;
    std::size_t trials = 100;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    std::string output_dir;

    std::optional<BoxConfig> box;
    std::optional<Point2> source;  // green: column source (default box centre)
    std::optional<double> mass;    // default: the schedule mass m_0
    std::optional<double> m_hat;
    double eta = 1.0;              // certificate: |E - E0| <= eta

    EventSpec event;
    std::vector<int> scales{2, 4, 8};
    std::vector<double> g_values{1.0, 5.0, 20.0};
    std::size_t samples = 50;
    std::size_t bootstrap = 2000;
    std::size_t seeds = 10;
    int k = 0;
    int sub_radius = 2;  // boundary-recovery: radius of the interior sub-boxes
    std::string check = "lemma32";  // msa-verify: lemma32 | lemma45 | boundary-recovery | certificate
    std::string mode = "event";     // mc-estimate: event | wegner | probe

    Json source_json;  // the merged input, kept for the manifest

    ModelSpec model() const;
    ScheduleParams schedule_params() const;
    ModelContext context(const DisorderSample& sample) const;
};

ExperimentConfig parse_config(const Json& j);
ExperimentConfig load_config(const std::string& path, const std::vector<std::string>& overrides);

/// Applies "a.b.c=value" to j; value is parsed as JSON, else taken as a string.
void apply_override(Json& j, const std::string& assignment);

/// Normal form used for hashing: parsed config re-serialized with defaults filled
/// in, without output_dir and threads (they do not change any record).
Json canonical_config(const ExperimentConfig& c);
std::string config_hash(const ExperimentConfig& c);

}  // namespace msalab
