// msalab: command-line runner for the two-particle MSA lab.
//
//   msalab <subcommand> [-c config.json] [--set key=value ...] [-o dir]
//
// Each run writes <subcommand>.jsonl (one record per line), an optional
// <subcommand>.csv summary and manifest.json into the output directory.
// Exit codes: 0 ok, 1 runtime error, 2 invalid config/usage, 3 infeasible schedule.

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "msalab/config.hpp"
#include "msalab/hamiltonian.hpp"
#include "msalab/records.hpp"
#include "msalab/resolvent.hpp"

#ifndef MSALAB_VERSION
#define MSALAB_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using namespace msalab;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;
constexpr int kExitSchedule = 3;

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

// Single writer for all record files of one run.
class Output {
public:
    Output(fs::path dir, std::string hash) : dir_(std::move(dir)), hash_(std::move(hash)) {
        fs::create_directories(dir_);
    }

    void record(const std::string& file, const std::string& type, const Json& data) {
        auto& f = open(file);
        Json line = {{"record", type}, {"config_hash", hash_}, {"data", data}};
        f.stream << line.dump() << '\n';
        ++f.lines;
    }

    void csv_row(const std::string& file, const std::vector<std::string>& header,
                 const std::vector<std::string>& row) {
        auto& f = open(file);
        if (f.lines == 0) {
            f.stream << "config_hash";
            for (const auto& h : header) f.stream << ',' << h;
            f.stream << '\n';
            ++f.lines;
        }
        f.stream << hash_;
        for (const auto& v : row) f.stream << ',' << v;
        f.stream << '\n';
        ++f.lines;
    }

    Json index() const {
        Json files = Json::array();
        for (const auto& [name, f] : files_) {
            files.push_back({{"file", name}, {"lines", f.lines}});
        }
        return files;
    }

    const fs::path& dir() const { return dir_; }

private:
    struct File {
        std::ofstream stream;
        std::size_t lines = 0;
    };

    File& open(const std::string& name) {
        auto it = files_.find(name);
        if (it == files_.end()) {
            it = files_.emplace(name, File{}).first;
            it->second.stream.open(dir_ / name, std::ios::trunc);
            if (!it->second.stream) throw Error("cannot write " + (dir_ / name).string());
        }
        return it->second;
    }

    fs::path dir_;
    std::string hash_;
    std::map<std::string, File> files_;
};

std::string num(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

Box2 target_box(const ExperimentConfig& cfg, const ScaleSchedule& sched) {
    if (cfg.box) return Box2(cfg.box->center, cfg.box->radius);
    const Point1 o(std::vector<int>(static_cast<std::size_t>(cfg.d), 0));
    return Box2(Point2(o, o), sched.length(0));
}

DisorderSample sample_for(const ExperimentConfig& cfg, const Box2& box, std::uint64_t trial) {
    const Box2 boxes[] = {box, Box2(box.center, box.radius + 1)};
    return sample_potential(cfg.distribution, cfg.seed, trial, covering_box(boxes));
}

double base_mass(const ExperimentConfig& cfg, const ScaleSchedule& sched) {
    return cfg.mass ? *cfg.mass : sched.mass(std::min(cfg.k, sched.k_max()));
}

void cmd_sample(const ExperimentConfig& cfg, const ScaleSchedule& sched, Output& out) {
    const Box2 box = target_box(cfg, sched);
    out.record("sample.jsonl", "disorder-sample", sample_for(cfg, box, 0));
}

void cmd_spectrum(const ExperimentConfig& cfg, const ScaleSchedule& sched, Output& out,
                  bool dump_matrix) {
    const Box2 box = target_box(cfg, sched);
    const auto sample = sample_for(cfg, box, 0);
    const auto op = cfg.context(sample).two_particle(box);
    const auto spectral = diagonalize(op);
    out.record("spectrum.jsonl", "spectrum", spectrum_record(op, spectral));
    for (std::size_t s = 0; s < spectral.size(); ++s) {
        out.csv_row("spectrum.csv", {"index", "eigenvalue", "residual"},
                    {std::to_string(s), num(spectral.eigenvalues(static_cast<Eigen::Index>(s))),
                     num(spectral.residuals(static_cast<Eigen::Index>(s)))});
    }
    if (dump_matrix) {
        std::ofstream m(out.dir() / "matrix.txt");
        write_triplets(m, op);
    }
}

void cmd_green(const ExperimentConfig& cfg, const ScaleSchedule& sched, Output& out) {
    const Box2 box = target_box(cfg, sched);
    const auto sample = sample_for(cfg, box, 0);
    const auto op = cfg.context(sample).two_particle(box);
    const Point2 src = cfg.source ? *cfg.source : box.center;
    if (!box.contains(src)) throw InvalidInput("source lies outside the box");
    out.record("green.jsonl", "green-column", green_record(op, green_column(op, cfg.energy, src)));
}

void cmd_classify(const ExperimentConfig& cfg, const ScaleSchedule& sched, Output& out) {
    const Box2 box = target_box(cfg, sched);
    const auto sample = sample_for(cfg, box, 0);
    ClassifyOptions opt;
    opt.mass = base_mass(cfg, sched);
    opt.beta = cfg.schedule.beta;
    opt.J = cfg.schedule.J;
    opt.Lk = sched.length(std::min(cfg.k, sched.k_max()));
    opt.m_hat = cfg.m_hat;
    opt.cnr.sample_seed = cfg.seed;
    const auto report = classify_box(cfg.context(sample), box, cfg.energy, opt);
    out.record("classify.jsonl", "classification", report);
}

void cmd_msa_verify(const ExperimentConfig& cfg, const ScaleSchedule& sched, Output& out) {
    const std::string file = "msa-verify.jsonl";
    const std::string csv = "msa-verify.csv";
    std::size_t hyp = 0, holds = 0, fails = 0;
    for (std::size_t t = 0; t < cfg.seeds; ++t) {
        if (cfg.check == "lemma32") {
            const Box2 box = target_box(cfg, sched);
            const auto sample = sample_for(cfg, box, t);
            const double m_hat = cfg.m_hat ? *cfg.m_hat : 2.0 * cfg.schedule.m0;
            const auto r = lemma32_check(cfg.context(sample), box, cfg.energy, m_hat,
                                         cfg.schedule.beta);
            out.record(file, "lemma32", r);
            hyp += r.hypotheses;
            holds += r.hypotheses && r.holds;
            fails += !r.holds;
            out.csv_row(csv, {"trial", "hypotheses", "holds", "margin"},
                        {std::to_string(t), std::to_string(r.hypotheses),
                         std::to_string(r.holds), num(r.margin)});
        } else if (cfg.check == "lemma45") {
            if (cfg.k + 1 > sched.k_max()) throw InvalidInput("lemma45 needs k + 1 <= k_max");
            const Point1 o(std::vector<int>(static_cast<std::size_t>(cfg.d), 0));
            const Box2 parent = cfg.box ? Box2(cfg.box->center, cfg.box->radius)
                                        : Box2(Point2(o, o), sched.length(cfg.k + 1));
            const auto sample = sample_for(cfg, parent, t);
            CnrOptions cnr;
            cnr.sample_seed = cfg.seed;
            const auto r = lemma45_step(cfg.context(sample), parent, cfg.energy, sched, cfg.k, cnr);
            out.record(file, "lemma45", r);
            hyp += r.hypotheses;
            holds += r.hypotheses && r.holds;
            fails += !r.holds;
            out.csv_row(csv, {"trial", "hypotheses", "holds", "K", "margin", "mass_source"},
                        {std::to_string(t), std::to_string(r.hypotheses), std::to_string(r.holds),
                         std::to_string(r.counters.K.size), num(r.margin), r.mass_source});
        } else if (cfg.check == "boundary-recovery") {
            const Box2 parent = cfg.box ? Box2(cfg.box->center, cfg.box->radius)
                                        : Box2(target_box(cfg, sched).center, 4);
            const auto sample = sample_for(cfg, parent, t);
            const auto r = recovery_sweep(cfg.context(sample), parent, cfg.sub_radius);
            out.record(file, "boundary-recovery", r);
            hyp += 1;
            holds += r.failures == 0;
            fails += r.failures != 0;
            out.csv_row(csv, {"trial", "checked", "skipped", "failures", "max_relative_error"},
                        {std::to_string(t), std::to_string(r.checked),
                         std::to_string(r.skipped_resonant), std::to_string(r.failures),
                         num(r.max_relative_error)});
        } else {
            const Box2 box = target_box(cfg, sched);
            const auto sample = sample_for(cfg, box, t);
            const auto c = initial_step_certificate(cfg.context(sample), box, cfg.energy, cfg.eta,
                                                    cfg.schedule.m0, sched.length(0));
            out.record(file, "certificate", c);
            hyp += c.holds;
            holds += c.holds && c.implication_holds;
            fails += !c.implication_holds;
            out.csv_row(csv, {"trial", "holds", "min_gap", "c0", "max_resolvent_norm"},
                        {std::to_string(t), std::to_string(c.holds), num(c.min_gap), num(c.c0),
                         num(c.max_resolvent_norm)});
        }
    }
    out.record(file, "summary",
               {{"check", cfg.check}, {"seeds", cfg.seeds}, {"hypotheses", hyp},
                {"holds", holds}, {"counterexamples", fails}});
}

void estimate_csv(Output& out, const std::string& csv, const std::string& label,
                  const EstimateRecord& r) {
    out.csv_row(csv,
                {"label", "kind", "trials", "successes", "estimate", "ci_lo", "ci_hi", "bound",
                 "comparison"},
                {label, to_string(r.spec.kind), std::to_string(r.trials),
                 std::to_string(r.successes), num(r.estimate), num(r.ci.lo), num(r.ci.hi),
                 r.bound ? num(*r.bound) : "", to_string(r.comparison)});
}

void cmd_mc_estimate(const ExperimentConfig& cfg, const ScaleSchedule& sched, Output& out) {
    const auto model = cfg.model();
    RunOptions run;
    run.threads = cfg.threads;
    const std::string file = "mc-estimate.jsonl";
    const std::string csv = "mc-estimate.csv";
    if (cfg.mode == "event") {
        const auto r = estimate_event(model, cfg.event, sched, cfg.trials, cfg.seed, run);
        out.record(file, "estimate", r);
        estimate_csv(out, csv, to_string(r.spec.kind), r);
    } else if (cfg.mode == "wegner") {
        WegnerOptions w;
        w.placement = cfg.event.placement;
        const auto rows = wegner_sweep(model, cfg.scales, cfg.energy, cfg.trials, sched, cfg.seed,
                                       w, run);
        for (const auto& row : rows) {
            out.record(file, "wegner-row", row);
            estimate_csv(out, csv, "W1@" + std::to_string(row.l), row.w1);
            if (row.w2) estimate_csv(out, csv, "W2@" + std::to_string(row.l), *row.w2);
        }
    } else {
        const auto r = ss_induction_probe(model, sched, cfg.k, cfg.trials, cfg.seed,
                                          cfg.energy_interval, run);
        for (std::size_t t = 0; t < r.per_trial.size(); ++t) out.record(file, "probe-trial", r.per_trial[t]);
        out.record(file, "estimate", r.b);
        out.record(file, "estimate", r.t);
        out.record(file, "estimate", r.sigma);
        out.record(file, "estimate", r.rest);
        out.record(file, "probe-summary",
                   {{"identity_every_trial", r.identity_every_trial},
                    {"count_inequality", r.count_inequality}});
        estimate_csv(out, csv, "B", r.b);
        estimate_csv(out, csv, "T", r.t);
        estimate_csv(out, csv, "Sigma", r.sigma);
        estimate_csv(out, csv, "rest", r.rest);
    }
}

void cmd_decay_fit(const ExperimentConfig& cfg, Output& out) {
    RunOptions run;
    run.threads = cfg.threads;
    const int L = cfg.box ? cfg.box->radius : 10;
    for (double g : cfg.g_values) {
        auto model = cfg.model();
        model.g = g;
        const auto m = mass_statistics(model, L, cfg.samples, cfg.seed, cfg.bootstrap, run);
        out.record("decay-fit.jsonl", "mass-statistics", m);
        out.csv_row("decay-fit.csv", {"g", "L", "samples", "median_m_hat", "ci_lo", "ci_hi"},
                    {num(g), std::to_string(L), std::to_string(cfg.samples), num(m.median),
                     num(m.ci_lo), num(m.ci_hi)});
    }
}

void error_record(const std::string& kind, const std::string& message,
                  const std::vector<std::string>& diagnostics = {}) {
    Json e = {{"record", "error"}, {"kind", kind}, {"message", message}};
    if (!diagnostics.empty()) e["diagnostics"] = diagnostics;
    std::cerr << e.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-particle multiscale-analysis lab"};
    app.set_version_flag("--version", MSALAB_VERSION);
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    std::string output_dir;
    bool dump_matrix = false;

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"sample", "dump the disorder sample covering the box"},
        {"spectrum", "diagonalize one box"},
        {"green", "one Green's function column"},
        {"classify", "S/NS, resonance, CNR and NT report for one box and energy"},
        {"msa-verify", "batch of lemma32 / lemma45 / boundary-recovery / certificate checks"},
        {"mc-estimate", "Monte Carlo event frequencies, Wegner sweep or induction probe"},
        {"decay-fit", "effective-mass extraction over a sweep of g"},
    };
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("-c,--config", config_path, "JSON config file");
        sub->add_option("-s,--set", overrides, "override, e.g. --set schedule.J=9")
            ->allow_extra_args(false);
        sub->add_option("-o,--output-dir", output_dir, "output directory");
        if (name == "spectrum")
            sub->add_flag("--dump-matrix", dump_matrix, "also write matrix.txt triplets");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        error_record("usage", e.what());
        return kExitConfig;
    }
    const std::string command = app.get_subcommands().front()->get_name();

    ExperimentConfig cfg;
    try {
        cfg = load_config(config_path, overrides);
    } catch (const ConfigError& e) {
        error_record(e.kind(), e.what(), e.diagnostics());
        return kExitConfig;
    } catch (const std::exception& e) {
        error_record("invalid-config", e.what());
        return kExitConfig;
    }

    try {
        const auto constraints = validate_parameters(cfg.schedule_params());
        const auto sched = schedule(cfg.schedule_params(), cfg.k_max);

        fs::path dir = output_dir;
        if (dir.empty()) dir = cfg.output_dir;
        if (dir.empty()) {
            const char* env = std::getenv("MSALAB_OUTPUT_DIR");
            dir = env && *env ? env : "msalab-out";
        }
        const std::string hash = config_hash(cfg);
        Output out(dir, hash);

        if (command == "sample") cmd_sample(cfg, sched, out);
        else if (command == "spectrum") cmd_spectrum(cfg, sched, out, dump_matrix);
        else if (command == "green") cmd_green(cfg, sched, out);
        else if (command == "classify") cmd_classify(cfg, sched, out);
        else if (command == "msa-verify") cmd_msa_verify(cfg, sched, out);
        else if (command == "mc-estimate") cmd_mc_estimate(cfg, sched, out);
        else cmd_decay_fit(cfg, out);

        Json manifest = {
            {"config_hash", hash},
            {"tool_version", MSALAB_VERSION},
            {"timestamp", utc_timestamp()},
            {"subcommand", command},
            {"config", canonical_config(cfg)},
            {"schedule", sched},
            {"constraints", constraints},
            {"non_paper_regime", constraints.non_paper_regime},
            {"files", out.index()},
        };
        std::ofstream(dir / "manifest.json") << manifest.dump(2) << '\n';
        std::cout << (dir / "manifest.json").string() << '\n';
    } catch (const InfeasibleSchedule& e) {
        Json j = {{"record", "error"}, {"kind", e.kind()}, {"message", e.what()},
                  {"first_bad_scale", e.first_bad_scale()}};
        std::cerr << j.dump() << '\n';
        return kExitSchedule;
    } catch (const ConfigError& e) {
        error_record(e.kind(), e.what(), e.diagnostics());
        return kExitConfig;
    } catch (const Error& e) {
        error_record(e.kind(), e.what());
        return kExitRuntime;
    } catch (const std::exception& e) {
        error_record("error", e.what());
        return kExitRuntime;
    }
    return 0;
}
