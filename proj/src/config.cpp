#include "msalab/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace msalab {

namespace {

template <class T>
struct is_optional : std::false_type {};
template <class T>
struct is_optional<std::optional<T>> : std::true_type {};

template <class T>
T convert(const Json& v) {
    if constexpr (std::is_same_v<T, double>) {
        return number_from_json(v);
    } else if constexpr (is_optional<T>::value) {
        return convert<typename T::value_type>(v);
    } else {
        return v.get<T>();
    }
}

std::string join(const std::vector<std::string>& lines) {
    std::string out;
    for (const auto& l : lines) {
        if (!out.empty()) out += "; ";
        out += l;
    }
    return out;
}

// Walks one JSON object, recording a diagnostic per bad field instead of
// stopping at the first.
class Reader {
public:
    Reader(const Json& j, std::string path, std::vector<std::string>& diag)
        : j_(j), path_(std::move(path)), diag_(diag) {
        if (!j_.is_object()) fail("", "expected an object");
    }

    bool has(const char* key) {
        seen_.insert(key);
        return j_.is_object() && j_.contains(key) && !j_.at(key).is_null();
    }

    template <class T>
    void read(const char* key, T& out) {
        if (!has(key)) return;
        try {
            out = convert<T>(j_.at(key));
        } catch (const std::exception& e) {
            fail(key, e.what());
        }
    }

    template <class T, class F>
    void read_with(const char* key, T& out, F&& convert) {
        if (!has(key)) return;
        try {
            out = convert(j_.at(key));
        } catch (const std::exception& e) {
            fail(key, e.what());
        }
    }

    const Json& at(const char* key) const { return j_.at(key); }
    std::string child(const char* key) const { return path_.empty() ? key : path_ + "." + key; }

    void fail(const std::string& key, const std::string& msg) {
        const std::string where = key.empty() ? path_ : child(key.c_str());
        diag_.push_back((where.empty() ? std::string("<root>") : where) + ": " + msg);
    }

    void finish() {
        if (!j_.is_object()) return;
        for (const auto& [k, v] : j_.items()) {
            if (!seen_.count(k)) fail(k, "unknown key");
        }
    }

private:
    const Json& j_;
    std::string path_;
    std::vector<std::string>& diag_;
    std::set<std::string> seen_;
};

template <class F>
void check(std::vector<std::string>& diag, const std::string& field, F&& f) {
    try {
        f();
    } catch (const std::exception& e) {
        diag.push_back(field + ": " + e.what());
    }
}

void read_schedule(Reader& r, const Json& j, ExperimentConfig& c, std::vector<std::string>& diag) {
    Reader s(j, r.child("schedule"), diag);
    auto& p = c.schedule;
    s.read("L0", p.L0);
    s.read("alpha", p.alpha);
    s.read("gamma", p.gamma);
    s.read("m0", p.m0);
    s.read("beta", p.beta);
    s.read("p", p.p);
    s.read("q", p.q);
    s.read("p_tilde", p.p_tilde);
    s.read("J", p.J);
    s.read("k_max", c.k_max);
    s.finish();
}

void read_event(Reader& r, const Json& j, ExperimentConfig& c, std::vector<std::string>& diag) {
    Reader e(j, r.child("event"), diag);
    auto& ev = c.event;
    e.read_with("kind", ev.kind,
                [](const Json& v) { return event_kind_from_string(v.get<std::string>()); });
    e.read("k", ev.k);
    e.read("scale", ev.scale);
    e.read("mass", ev.mass);
    e.read("m_hat", ev.m_hat);
    e.read("n", ev.n);
    e.read("bernoulli_p", ev.bernoulli_p);
    if (e.has("placement")) {
        Reader pl(e.at("placement"), e.child("placement"), diag);
        pl.read("region", ev.placement.region);
        pl.read("max_attempts", ev.placement.max_attempts);
        pl.finish();
    }
    e.finish();
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> diagnostics)
    : InvalidInput("invalid config: " + join(diagnostics)), diagnostics_(std::move(diagnostics)) {}

ExperimentConfig parse_config(const Json& j) {
    std::vector<std::string> diag;
    ExperimentConfig c;
    c.source_json = j;
    Reader r(j, "", diag);
    if (!j.is_object()) throw ConfigError(diag);

    // The preset fixes the schedule and coupling defaults; explicit keys win.
    r.read_with("preset", c.preset,
                [](const Json& v) { return preset_from_string(v.get<std::string>()); });
    c.schedule = c.preset == Preset::Paper ? ScheduleParams::paper() : ScheduleParams::desk();
    c.schedule.preset = c.preset;
    c.g = c.schedule.g;

    r.read("d", c.d);
    r.read_with("adjacency", c.adjacency,
                [](const Json& v) { return adjacency_from_string(v.get<std::string>()); });
    if (r.has("distribution")) {
        Reader dr(r.at("distribution"), "distribution", diag);
        auto& ds = c.distribution;
        dr.read_with("kind", ds.kind, [](const Json& v) {
            return distribution_kind_from_string(v.get<std::string>());
        });
        dr.read("a", ds.a);
        dr.read("b", ds.b);
        dr.read("mean", ds.mean);
        dr.read("stddev", ds.stddev);
        dr.read("weights", ds.weights);
        dr.finish();
    }
    if (r.has("interaction")) {
        Reader ir(r.at("interaction"), "interaction", diag);
        int r0 = c.interaction.r0;
        double u0 = 1.0;
        std::vector<double> profile;
        ir.read("r0", r0);
        ir.read("u0", u0);
        ir.read("profile", profile);
        if (ir.has("u0") && ir.has("profile")) ir.fail("", "give either u0 or profile, not both");
        if (!profile.empty()) {
            c.interaction.r0 = r0;
            c.interaction.profile = profile;
        } else if (r0 >= 0) {
            c.interaction = InteractionSpec::linear(r0, u0);
        } else {
            ir.fail("r0", "must be >= 0");
        }
        ir.finish();
    }
    r.read("g", c.g);
    if (r.has("schedule")) read_schedule(r, r.at("schedule"), c, diag);
    r.read("energy_interval", c.energy_interval);
    r.read("energy", c.energy);
    r.read("trials", c.trials);
    r.read("seed", c.seed);
    r.read("threads", c.threads);
    r.read("output_dir", c.output_dir);
    if (r.has("box")) {
        Reader br(r.at("box"), "box", diag);
        BoxConfig b;
        b.center = Point2(Point1(std::vector<int>(static_cast<std::size_t>(c.d), 0)),
                          Point1(std::vector<int>(static_cast<std::size_t>(c.d), 0)));
        br.read("center", b.center);
        br.read("radius", b.radius);
        br.finish();
        c.box = b;
    }
    r.read("source", c.source);
    r.read("mass", c.mass);
    r.read("m_hat", c.m_hat);
    r.read("eta", c.eta);
    c.event.I = c.energy_interval;
    if (r.has("event")) read_event(r, r.at("event"), c, diag);
    c.event.I = c.energy_interval;
    c.event.energy = c.energy;
    r.read("scales", c.scales);
    r.read("g_values", c.g_values);
    r.read("samples", c.samples);
    r.read("bootstrap", c.bootstrap);
    r.read("seeds", c.seeds);
    r.read("k", c.k);
    r.read("sub_radius", c.sub_radius);
    r.read("check", c.check);
    r.read("mode", c.mode);
    r.finish();

    c.schedule.d = c.d;
    c.schedule.r0 = c.interaction.r0;
    c.schedule.g = c.g;

    check(diag, "d", [&] {
        if (c.d < 1 || c.d > 3) throw InvalidInput("must be 1, 2 or 3");
    });
    check(diag, "distribution", [&] { c.distribution.validate(); });
    check(diag, "interaction", [&] { c.interaction.validate(); });
    check(diag, "g", [&] {
        if (!std::isfinite(c.g)) throw InvalidInput("must be finite");
    });
    check(diag, "energy_interval", [&] {
        if (!(c.energy_interval.hi >= c.energy_interval.lo)) throw InvalidInput("hi < lo");
    });
    check(diag, "trials", [&] {
        if (c.trials < 1) throw InvalidInput("must be >= 1");
    });
    check(diag, "threads", [&] {
        if (c.threads < 1) throw InvalidInput("must be >= 1");
    });
    check(diag, "schedule.k_max", [&] {
        if (c.k_max < 0 || c.k_max > 8) throw InvalidInput("must be in [0, 8]");
    });
    check(diag, "event", [&] { c.event.validate(); });
    check(diag, "box", [&] {
        if (!c.box) return;
        if (c.box->radius < 0) throw InvalidInput("radius must be >= 0");
        if (c.box->center.x1.dim() != c.d || c.box->center.x2.dim() != c.d)
            throw InvalidInput("center coordinates must have length d");
    });
    check(diag, "source", [&] {
        if (c.source && (c.source->x1.dim() != c.d || c.source->x2.dim() != c.d))
            throw InvalidInput("coordinates must have length d");
    });
    check(diag, "scales", [&] {
        for (int l : c.scales)
            if (l < 1) throw InvalidInput("scales must be >= 1");
    });
    check(diag, "sub_radius", [&] {
        if (c.sub_radius < 0) throw InvalidInput("must be >= 0");
    });
    check(diag, "samples", [&] {
        if (c.samples < 1) throw InvalidInput("must be >= 1");
    });
    check(diag, "check", [&] {
        static const std::set<std::string> ok{"lemma32", "lemma45", "boundary-recovery",
                                              "certificate"};
        if (!ok.count(c.check)) throw InvalidInput("unknown check '" + c.check + "'");
    });
    check(diag, "mode", [&] {
        static const std::set<std::string> ok{"event", "wegner", "probe"};
        if (!ok.count(c.mode)) throw InvalidInput("unknown mode '" + c.mode + "'");
    });

    if (!diag.empty()) throw ConfigError(diag);
    return c;
}

void apply_override(Json& j, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ConfigError({"override '" + assignment + "': expected key=value"});
    const std::string path = assignment.substr(0, eq);
    const std::string text = assignment.substr(eq + 1);
    Json value = Json::parse(text, nullptr, false);
    if (value.is_discarded()) value = text;

    Json* node = &j;
    std::size_t start = 0;
    while (true) {
        const auto dot = path.find('.', start);
        const std::string key = path.substr(start, dot == std::string::npos ? dot : dot - start);
        if (key.empty()) throw ConfigError({"override '" + assignment + "': empty key"});
        if (!node->is_object()) *node = Json::object();
        if (dot == std::string::npos) {
            (*node)[key] = value;
            return;
        }
        node = &(*node)[key];
        start = dot + 1;
    }
}

ExperimentConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
    Json j = Json::object();
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in) throw ConfigError({"config: cannot open '" + path + "'"});
        try {
            j = Json::parse(in);
        } catch (const std::exception& e) {
            throw ConfigError({std::string("config: ") + e.what()});
        }
    }
    for (const auto& o : overrides) apply_override(j, o);
    return parse_config(j);
}

ModelSpec ExperimentConfig::model() const {
    ModelSpec m;
    m.d = d;
    m.distribution = distribution;
    m.interaction = interaction;
    m.g = g;
    m.adjacency = adjacency;
    return m;
}

ScheduleParams ExperimentConfig::schedule_params() const { return schedule; }

ModelContext ExperimentConfig::context(const DisorderSample& sample) const {
    ModelContext ctx;
    ctx.sample = &sample;
    ctx.interaction = interaction;
    ctx.g = g;
    ctx.adjacency = adjacency;
    return ctx;
}

Json canonical_config(const ExperimentConfig& c) {
    Json j = Json::object();
    j["d"] = c.d;
    j["adjacency"] = to_string(c.adjacency);
    j["preset"] = to_string(c.preset);
    j["distribution"] = c.distribution;
    j["interaction"] = c.interaction;
    j["g"] = number_to_json(c.g);
    j["schedule"] = c.schedule;
    j["k_max"] = c.k_max;
    j["energy_interval"] = c.energy_interval;
    j["energy"] = number_to_json(c.energy);
    j["trials"] = c.trials;
    j["seed"] = c.seed;
    j["box"] = c.box ? Json{{"center", c.box->center}, {"radius", c.box->radius}} : Json();
    j["source"] = c.source ? Json(*c.source) : Json();
    j["mass"] = c.mass ? number_to_json(*c.mass) : Json();
    j["m_hat"] = c.m_hat ? number_to_json(*c.m_hat) : Json();
    j["eta"] = number_to_json(c.eta);
    j["event"] = c.event;
    j["scales"] = c.scales;
    j["g_values"] = c.g_values;
    j["samples"] = c.samples;
    j["bootstrap"] = c.bootstrap;
    j["seeds"] = c.seeds;
    j["k"] = c.k;
    j["sub_radius"] = c.sub_radius;
    j["check"] = c.check;
    j["mode"] = c.mode;
    return j;
}

std::string config_hash(const ExperimentConfig& c) {
    const std::string text = canonical_config(c).dump();  // keys sorted by nlohmann
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace msalab
