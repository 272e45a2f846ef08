// Python entry points.  Configs and records cross the boundary as JSON text;
// the msalab package turns them into dicts.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "msalab/config.hpp"
#include "msalab/errors.hpp"
#include "msalab/records.hpp"

namespace py = pybind11;
using namespace msalab;

namespace {

ExperimentConfig parse(const std::string& text) { return parse_config(Json::parse(text)); }

Box2 target_box(const ExperimentConfig& cfg, const ScaleSchedule& sched) {
    if (cfg.box) return Box2(cfg.box->center, cfg.box->radius);
    const Point1 o(std::vector<int>(static_cast<std::size_t>(cfg.d), 0));
    return Box2(Point2(o, o), sched.length(0));
}

DisorderSample sample_for(const ExperimentConfig& cfg, const Box2& box) {
    const Box2 boxes[] = {Box2(box.center, box.radius + 1)};
    return sample_potential(cfg.distribution, cfg.seed, 0, covering_box(boxes));
}

std::string schedule_json(const std::string& text) {
    const auto cfg = parse(text);
    Json j = {{"constraints", validate_parameters(cfg.schedule_params())},
              {"schedule", schedule(cfg.schedule_params(), cfg.k_max)}};
    return j.dump();
}

py::array_t<double> spectrum(const std::string& text) {
    const auto cfg = parse(text);
    const auto sched = schedule(cfg.schedule_params(), cfg.k_max);
    const Box2 box = target_box(cfg, sched);
    const auto sample = sample_for(cfg, box);
    const auto sp = diagonalize(cfg.context(sample).two_particle(box));
    return py::array_t<double>(static_cast<py::ssize_t>(sp.size()), sp.eigenvalues.data());
}

std::string classify(const std::string& text) {
    const auto cfg = parse(text);
    const auto sched = schedule(cfg.schedule_params(), cfg.k_max);
    const Box2 box = target_box(cfg, sched);
    const auto sample = sample_for(cfg, box);
    const int k = std::min(cfg.k, sched.k_max());
    ClassifyOptions opt;
    opt.mass = cfg.mass ? *cfg.mass : sched.mass(k);
    opt.beta = cfg.schedule.beta;
    opt.J = cfg.schedule.J;
    opt.Lk = sched.length(k);
    opt.m_hat = cfg.m_hat;
    opt.cnr.sample_seed = cfg.seed;
    return Json(classify_box(cfg.context(sample), box, cfg.energy, opt)).dump();
}

std::string estimate(const std::string& text) {
    const auto cfg = parse(text);
    const auto sched = schedule(cfg.schedule_params(), cfg.k_max);
    RunOptions run;
    run.threads = cfg.threads;
    return Json(estimate_event(cfg.model(), cfg.event, sched, cfg.trials, cfg.seed, run)).dump();
}

}  // namespace

PYBIND11_MODULE(_msalab, m) {
    // later registrations are tried first, so the base class goes first
    py::register_exception<Error>(m, "MsalabError", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<InfeasibleSchedule>(m, "InfeasibleSchedule", PyExc_ValueError);

    m.def("config_hash", [](const std::string& t) { return config_hash(parse(t)); });
    m.def("canonical_config", [](const std::string& t) { return canonical_config(parse(t)).dump(); });
    m.def("schedule", &schedule_json);
    m.def("spectrum", &spectrum);
    m.def("classify", &classify);
    m.def("estimate", &estimate);
    m.def("wilson_interval", [](std::size_t s, std::size_t n) {
        const auto w = wilson_interval(s, n);
        return std::make_pair(w.lo, w.hi);
    });
}
