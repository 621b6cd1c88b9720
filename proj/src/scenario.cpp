#include "relcon/scenario.hpp"

#include <cmath>
#include <stdexcept>

#include "relcon/fields.hpp"
#include "relcon/rng.hpp"
#include "relcon/version.hpp"

namespace relcon {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string kind_key(const std::string& channel, EventKind kind) {
    return channel + ":" + to_string(kind);
}

EventKind kind_from_string(const std::string& s) {
    if (s == "spike") return EventKind::Spike;
    if (s == "peak") return EventKind::Peak;
    throw std::invalid_argument("unknown event kind: " + s);
}

} // namespace

// --- JSON ------------------------------------------------------------------

static void to_json(nlohmann::json& j, const Horizon& h) {
    j = {{"t0", h.t0}, {"t1", h.t1}, {"dt", h.dt}};
}

static void from_json(const nlohmann::json& j, Horizon& h) {
    h.t0 = j.value("t0", 0.0);
    h.t1 = j.at("t1").get<double>();
    h.dt = j.value("dt", 0.01);
}

static void to_json(nlohmann::json& j, const IcRecipe& r) {
    std::visit(
        [&j](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, ExplicitIcs>) {
                j = {{"type", "explicit"}, {"states", v.states}};
            } else if constexpr (std::is_same_v<T, GridAroundRest>) {
                j = {{"type", "grid_around_rest"},
                     {"extent_v", v.extent_v},
                     {"extent_w", v.extent_w},
                     {"nv", v.nv},
                     {"nw", v.nw}};
            } else if constexpr (std::is_same_v<T, RandomBall>) {
                j = {{"type", "random_ball"}, {"radius", v.radius}, {"count", v.count}};
            } else if constexpr (std::is_same_v<T, EiDefaultIcs>) {
                j = {{"type", "ei_default"}, {"count", v.count}, {"e_radius", v.e_radius}};
            } else {
                j = {{"type", "uniform_box"}, {"lo", v.lo}, {"hi", v.hi}, {"count", v.count}};
            }
        },
        r);
}

static void from_json(const nlohmann::json& j, IcRecipe& r) {
    const auto type = j.at("type").get<std::string>();
    if (type == "explicit") {
        r = ExplicitIcs{j.at("states").get<std::vector<std::vector<double>>>()};
    } else if (type == "grid_around_rest") {
        r = GridAroundRest{j.value("extent_v", 0.5), j.value("extent_w", 0.5), j.value("nv", 3),
                           j.value("nw", 3)};
    } else if (type == "random_ball") {
        r = RandomBall{j.value("radius", 0.5), j.value("count", 9)};
    } else if (type == "ei_default") {
        r = EiDefaultIcs{j.value("count", 10), j.value("e_radius", 0.5)};
    } else if (type == "uniform_box") {
        r = UniformBox{j.at("lo").get<std::vector<double>>(),
                       j.at("hi").get<std::vector<double>>(), j.value("count", 5)};
    } else {
        throw std::invalid_argument("unknown ic recipe type: " + type);
    }
}

static void to_json(nlohmann::json& j, const Drive& d) {
    if (const auto* exo = std::get_if<ExoDrive>(&d)) {
        j = {{"type", "exosystem"},
             {"params", exo->params},
             {"k_u", exo->k_u},
             {"init", exo->init}};
    } else {
        to_json(j, std::get<Signal>(d));
    }
}

static void from_json(const nlohmann::json& j, Drive& d) {
    if (j.at("type").get<std::string>() == "exosystem") {
        ExoDrive exo;
        exo.params = j.at("params").get<FhnParams>();
        exo.k_u = j.value("k_u", 0.5);
        if (j.contains("init")) {
            const auto init = j.at("init").get<std::vector<double>>();
            if (init.size() != 4)
                throw std::invalid_argument("exosystem init must have 4 components");
            std::copy(init.begin(), init.end(), exo.init.begin());
        }
        d = exo;
    } else {
        Signal s;
        from_json(j, s);
        d = std::move(s);
    }
}

static void to_json(nlohmann::json& j, const AnalysisPlan& p) {
    j = nlohmann::json::object();
    j["distance"] = p.distance;
    j["band_mu"] = p.band_mu;
    if (p.certificate) {
        nlohmann::json c{{"mu", p.certificate->mu}};
        if (p.certificate->t0) c["t0"] = *p.certificate->t0;
        if (p.certificate->t1) c["t1"] = *p.certificate->t1;
        j["certificate"] = std::move(c);
    }
    if (!p.events.empty()) {
        auto arr = nlohmann::json::array();
        for (const auto& e : p.events)
            arr.push_back({{"channel", e.channel},
                           {"kind", to_string(e.kind)},
                           {"threshold", e.threshold}});
        j["events"] = std::move(arr);
    }
    if (!p.sync.empty()) {
        auto arr = nlohmann::json::array();
        for (const auto& s : p.sync)
            arr.push_back({{"a", s.a},
                           {"a_kind", to_string(s.a_kind)},
                           {"b", s.b},
                           {"b_kind", to_string(s.b_kind)},
                           {"tol", s.tol}});
        j["sync"] = std::move(arr);
    }
    if (p.pairwise_sync)
        j["pairwise_sync"] = {{"channel", p.pairwise_sync->channel},
                              {"kind", to_string(p.pairwise_sync->kind)},
                              {"tol", p.pairwise_sync->tol}};
    if (p.dispersion)
        j["dispersion"] = {{"channel", p.dispersion->channel},
                           {"period", p.dispersion->period},
                           {"t_lo", p.dispersion->t_lo},
                           {"t_hi", p.dispersion->t_hi}};
    if (p.segments) j["segments"] = {{"boundaries", p.segments->boundaries}};
    if (p.regulation_band) j["regulation_band"] = {{"t_lo", p.regulation_band->t_lo}};
}

static void from_json(const nlohmann::json& j, AnalysisPlan& p) {
    p = AnalysisPlan{};
    p.distance = j.value("distance", true);
    p.band_mu = j.value("band_mu", 0.2);
    if (j.contains("certificate")) {
        const auto& c = j.at("certificate");
        CertificateRequest req;
        req.mu = c.value("mu", 0.2);
        if (c.contains("t0")) req.t0 = c.at("t0").get<double>();
        if (c.contains("t1")) req.t1 = c.at("t1").get<double>();
        p.certificate = req;
    }
    if (j.contains("events")) {
        for (const auto& e : j.at("events"))
            p.events.push_back({e.at("channel").get<std::string>(),
                                kind_from_string(e.at("kind").get<std::string>()),
                                e.value("threshold", 1.0)});
    }
    if (j.contains("sync")) {
        for (const auto& s : j.at("sync"))
            p.sync.push_back({s.at("a").get<std::string>(),
                              kind_from_string(s.value("a_kind", std::string("peak"))),
                              s.at("b").get<std::string>(),
                              kind_from_string(s.value("b_kind", std::string("peak"))),
                              s.value("tol", 2.0)});
    }
    if (j.contains("pairwise_sync")) {
        const auto& s = j.at("pairwise_sync");
        p.pairwise_sync = PairwiseSyncRequest{
            s.at("channel").get<std::string>(),
            kind_from_string(s.value("kind", std::string("spike"))), s.value("tol", 2.0)};
    }
    if (j.contains("dispersion")) {
        const auto& s = j.at("dispersion");
        p.dispersion = DispersionRequest{s.value("channel", std::string("y")),
                                         s.at("period").get<double>(), s.at("t_lo").get<double>(),
                                         s.at("t_hi").get<double>()};
    }
    if (j.contains("segments"))
        p.segments = SegmentRequest{j.at("segments").at("boundaries").get<std::vector<double>>()};
    if (j.contains("regulation_band"))
        p.regulation_band = RegulationBandRequest{j.at("regulation_band").at("t_lo").get<double>()};
}

void to_json(nlohmann::json& j, const ScenarioSpec& s) {
    nlohmann::json params;
    std::visit([&params](const auto& p) { params = p; }, s.params);
    nlohmann::json drive;
    to_json(drive, s.drive);
    nlohmann::json ics;
    to_json(ics, s.ics);
    nlohmann::json horizon;
    to_json(horizon, s.horizon);
    nlohmann::json analysis;
    to_json(analysis, s.analysis);
    j = {{"name", s.name},       {"description", s.description},
         {"model", s.model},     {"params", std::move(params)},
         {"signal", std::move(drive)}, {"ics", std::move(ics)},
         {"horizon", std::move(horizon)}, {"seed", s.seed},
         {"analysis", std::move(analysis)}};
}

void from_json(const nlohmann::json& j, ScenarioSpec& s) {
    s.name = j.value("name", std::string{});
    s.description = j.value("description", std::string{});
    s.model = j.at("model").get<std::string>();
    if (s.model == "fhn") {
        s.params = j.at("params").get<FhnParams>();
    } else if (s.model == "ei") {
        s.params = j.at("params").get<EiNetworkParams>();
    } else if (s.model == "lti") {
        s.params = j.at("params").get<LtiParams>();
    } else {
        throw std::invalid_argument("unknown model: " + s.model);
    }
    from_json(j.at("signal"), s.drive);
    if (j.contains("ics")) from_json(j.at("ics"), s.ics);
    from_json(j.at("horizon"), s.horizon);
    s.seed = j.value("seed", std::uint64_t{7});
    if (j.contains("analysis")) from_json(j.at("analysis"), s.analysis);

    if (std::holds_alternative<ExoDrive>(s.drive) && s.model != "ei")
        throw std::invalid_argument("exosystem drive requires the ei model");
}

// --- registry ---------------------------------------------------------------

std::vector<ScenarioSpec> builtin_scenarios() {
    std::vector<ScenarioSpec> out;
    const FhnParams fig1{0.7, 0.8, 1.0 / 12.5};
    const FhnParams exo_nominal{0.6, 0.7, 1.0 / 30.0};

    {
        ScenarioSpec s;
        s.name = "fig1a";
        s.description = "FHN, constant input 0.7: spike train with persistent phase shifts";
        s.params = fig1;
        s.drive = Signal{ConstantSignal{0.7}};
        s.ics = GridAroundRest{};
        s.horizon = {0.0, 400.0, 0.01};
        out.push_back(std::move(s));
    }
    {
        ScenarioSpec s;
        s.name = "fig1b";
        s.description = "FHN, resonant sine 0.7 + 0.2 sin(pi t/23): reliable spiking";
        s.params = fig1;
        s.drive = Signal{SineSignal{0.7, 0.2, kPi / 23.0, 0.0}};
        s.ics = GridAroundRest{};
        s.horizon = {0.0, 400.0, 0.01};
        s.analysis.certificate = CertificateRequest{0.2, {}, {}};
        out.push_back(std::move(s));
    }
    {
        ScenarioSpec s;
        s.name = "fig1c";
        s.description = "FHN, slow square (period 60, amp 0.6, duty 1/3): reliable";
        s.params = fig1;
        s.drive = Signal{SquareSignal{60.0, 0.6, 1.0 / 3.0, 0.0}};
        s.ics = GridAroundRest{};
        s.horizon = {0.0, 400.0, 0.01};
        out.push_back(std::move(s));
    }
    {
        ScenarioSpec s;
        s.name = "fig1d";
        s.description = "FHN, piecewise Gaussian noise (high/medium/low)";
        s.params = fig1;
        NoiseSignal n;
        n.segments = {{0.0, 100.0, 0.5, 0.25}, {100.0, 200.0, 0.3, 0.01},
                      {200.0, 300.0, 0.1, 0.0025}};
        // hold 2.0 gives the noise a macroscopic correlation time; held at the
        // grid dt the input degenerates to its bias on the neuron's time scale
        n.hold_step = 2.0;
        s.drive = Signal{std::move(n)};
        s.ics = GridAroundRest{};
        s.horizon = {0.0, 300.0, 0.01};
        s.analysis.segments = SegmentRequest{{100.0, 200.0}};
        out.push_back(std::move(s));
    }
    {
        ScenarioSpec s;
        s.name = "fig3a";
        s.description = "EI network driven by the half-center exosystem: regulation";
        s.model = "ei";
        s.params = make_ei_params(fig1, exo_nominal, 4.0, 0.5);
        s.drive = ExoDrive{exo_nominal, 0.5, {-1.2, -0.6, 1.0, 0.3}};
        s.ics = EiDefaultIcs{10, 0.5};
        s.horizon = {0.0, 400.0, 0.01};
        s.analysis.events = {{"u", EventKind::Peak, 1.0},
                             {"eta", EventKind::Peak, 1.0},
                             {"y", EventKind::Spike, 1.0}};
        s.analysis.sync = {{"eta", EventKind::Peak, "u", EventKind::Peak, 2.0}};
        s.analysis.regulation_band = RegulationBandRequest{300.0};
        out.push_back(std::move(s));
    }
    {
        ScenarioSpec s;
        s.name = "fig3b";
        s.description = "EI network with sinusoidal disturbance 2 sin(pi t/30): event tracking";
        s.model = "ei";
        s.params = make_ei_params(fig1, exo_nominal, 4.0, 0.5);
        s.drive = Signal{SineSignal{0.0, 2.0, kPi / 30.0, 0.0}};
        s.ics = EiDefaultIcs{10, 0.5};
        s.horizon = {0.0, 400.0, 0.01};
        s.analysis.events = {{"u", EventKind::Peak, 1.0},
                             {"eta", EventKind::Peak, 1.0},
                             {"y", EventKind::Spike, 1.0}};
        s.analysis.sync = {{"eta", EventKind::Peak, "u", EventKind::Peak, 2.0}};
        out.push_back(std::move(s));
    }
    {
        ScenarioSpec s;
        s.name = "fig3c";
        s.description = "EI network with detuned exosystem (eps_u = 1/5): no regulation";
        s.model = "ei";
        s.params = make_ei_params(fig1, exo_nominal, 4.0, 0.5);
        s.drive = ExoDrive{FhnParams{0.6, 0.7, 0.2}, 0.5, {-1.2, -0.6, 1.0, 0.3}};
        s.ics = EiDefaultIcs{10, 0.5};
        s.horizon = {0.0, 400.0, 0.01};
        s.analysis.events = {{"u", EventKind::Peak, 1.0},
                             {"eta", EventKind::Peak, 1.0},
                             {"eta", EventKind::Spike, 1.0},
                             {"y", EventKind::Spike, 1.0}};
        s.analysis.pairwise_sync = PairwiseSyncRequest{"eta", EventKind::Spike, 2.0};
        s.analysis.regulation_band = RegulationBandRequest{300.0};
        out.push_back(std::move(s));
    }
    {
        ScenarioSpec s;
        s.name = "fig4a";
        s.description = "LTI oscillator, resonant input sin(omega t): peak synchronization";
        s.model = "lti";
        s.params = LtiParams{kPi / 30.0};
        s.drive = Signal{SineSignal{0.0, 1.0, kPi / 30.0, 0.0}};
        s.ics = UniformBox{{-1.0, -1.0}, {1.0, 1.0}, 5};
        s.horizon = {0.0, 600.0, 0.01};
        s.analysis.events = {{"y", EventKind::Peak, 1.0}};
        s.analysis.dispersion = DispersionRequest{"y", 60.0, 480.0, 600.0};
        out.push_back(std::move(s));
    }
    {
        ScenarioSpec s;
        s.name = "fig4b";
        s.description = "LTI oscillator, off-resonance input sin(2 omega t)";
        s.model = "lti";
        s.params = LtiParams{kPi / 30.0};
        s.drive = Signal{SineSignal{0.0, 1.0, 2.0 * kPi / 30.0, 0.0}};
        s.ics = UniformBox{{-1.0, -1.0}, {1.0, 1.0}, 5};
        s.horizon = {0.0, 600.0, 0.01};
        s.analysis.events = {{"y", EventKind::Peak, 1.0}};
        s.analysis.dispersion = DispersionRequest{"y", 60.0, 480.0, 600.0};
        out.push_back(std::move(s));
    }
    return out;
}

ScenarioSpec find_builtin(const std::string& name) {
    for (auto& s : builtin_scenarios())
        if (s.name == name) return s;
    throw std::out_of_range("unknown scenario: " + name);
}

// --- initial conditions -------------------------------------------------------

std::vector<std::vector<double>> default_initial_conditions(const ScenarioSpec& spec,
                                                            std::uint64_t seed) {
    auto stream = rng::ic_stream(seed);
    std::vector<std::vector<double>> out;

    if (const auto* ex = std::get_if<ExplicitIcs>(&spec.ics)) return ex->states;

    if (const auto* grid = std::get_if<GridAroundRest>(&spec.ics)) {
        if (spec.model != "fhn")
            throw std::invalid_argument("grid_around_rest requires the fhn model");
        const auto rest = fhn_rest_point(std::get<FhnParams>(spec.params));
        for (int i = 0; i < grid->nv; ++i) {
            const double fv = grid->nv > 1 ? static_cast<double>(i) / (grid->nv - 1) : 0.5;
            for (int k = 0; k < grid->nw; ++k) {
                const double fw = grid->nw > 1 ? static_cast<double>(k) / (grid->nw - 1) : 0.5;
                out.push_back({rest.v - grid->extent_v + 2.0 * grid->extent_v * fv,
                               rest.w - grid->extent_w + 2.0 * grid->extent_w * fw});
            }
        }
        return out;
    }

    if (const auto* ball = std::get_if<RandomBall>(&spec.ics)) {
        if (spec.model != "fhn")
            throw std::invalid_argument("random_ball requires the fhn model");
        const auto rest = fhn_rest_point(std::get<FhnParams>(spec.params));
        for (int i = 0; i < ball->count; ++i) {
            const double r = ball->radius * std::sqrt(stream.uniform01());
            const double th = 2.0 * kPi * stream.uniform01();
            out.push_back({rest.v + r * std::cos(th), rest.w + r * std::sin(th)});
        }
        return out;
    }

    if (const auto* ei = std::get_if<EiDefaultIcs>(&spec.ics)) {
        if (spec.model != "ei") throw std::invalid_argument("ei_default requires the ei model");
        const auto& p = std::get<EiNetworkParams>(spec.params);
        const auto rest = fhn_rest_point(p.e_params);
        for (int i = 0; i < ei->count; ++i) {
            const double r = ei->e_radius * std::sqrt(stream.uniform01());
            const double th = 2.0 * kPi * stream.uniform01();
            std::vector<double> x(6);
            x[0] = rest.v + r * std::cos(th);
            x[1] = rest.w + r * std::sin(th);
            x[2] = stream.uniform(-2.0, 2.0);
            x[3] = stream.uniform(-1.0, 1.0);
            x[4] = stream.uniform(-2.0, 2.0);
            x[5] = stream.uniform(-1.0, 1.0);
            out.push_back(std::move(x));
        }
        return out;
    }

    const auto& box = std::get<UniformBox>(spec.ics);
    if (box.lo.size() != box.hi.size() || box.lo.empty())
        throw std::invalid_argument("uniform_box: lo/hi size mismatch");
    for (int i = 0; i < box.count; ++i) {
        std::vector<double> x(box.lo.size());
        for (std::size_t c = 0; c < x.size(); ++c) x[c] = stream.uniform(box.lo[c], box.hi[c]);
        out.push_back(std::move(x));
    }
    return out;
}

// --- model plumbing -----------------------------------------------------------

std::size_t state_dimension(const ScenarioSpec& spec) {
    if (spec.model == "ei") return std::holds_alternative<ExoDrive>(spec.drive) ? 10 : 6;
    return 2;
}

std::vector<std::string> state_names(const ScenarioSpec& spec) {
    if (spec.model == "fhn") return {"v", "w"};
    if (spec.model == "lti") return {"y", "ydot"};
    std::vector<std::string> names{"v_e", "w_e", "v_i1", "w_i1", "v_i2", "w_i2"};
    if (std::holds_alternative<ExoDrive>(spec.drive)) {
        names.insert(names.end(), {"v_u1", "w_u1", "v_u2", "w_u2"});
    }
    return names;
}

int channel_component(const ScenarioSpec& spec, const std::string& channel) {
    if (channel == "u") return -1;
    const auto names = state_names(spec);
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == channel) return static_cast<int>(i);
    if (spec.model == "ei") {
        if (channel == "y") return 0;
        if (channel == "eta") return 2;
    }
    throw std::invalid_argument("unknown channel '" + channel + "' for model " + spec.model);
}

Metric scenario_metric(const ScenarioSpec& spec) {
    if (spec.model == "fhn") return make_fhn_metric(std::get<FhnParams>(spec.params).epsilon);
    if (spec.model == "ei") {
        const auto& p = std::get<EiNetworkParams>(spec.params);
        return make_net_metric(p.e_params.epsilon, p.u_params.epsilon);
    }
    return make_euclidean_metric();
}

std::uint64_t spec_hash(const ScenarioSpec& spec) {
    nlohmann::json j;
    to_json(j, spec);
    const std::string dump = j.dump();
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const unsigned char c : dump) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string spec_hash_hex(const ScenarioSpec& spec) {
    char buf[19];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(spec_hash(spec)));
    return buf;
}

nlohmann::json apply_overrides(nlohmann::json spec_json,
                               const std::vector<std::string>& overrides) {
    for (const auto& kv : overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("override must look like key=value: " + kv);
        std::string path = "/" + kv.substr(0, eq);
        for (auto& c : path)
            if (c == '.') c = '/';
        const std::string raw = kv.substr(eq + 1);
        nlohmann::json value;
        try {
            value = nlohmann::json::parse(raw);
        } catch (const nlohmann::json::parse_error&) {
            value = raw; // plain string
        }
        spec_json[nlohmann::json::json_pointer(path)] = std::move(value);
    }
    return spec_json;
}

// --- runner ---------------------------------------------------------------------

namespace {

std::vector<double> channel_series(const Trajectory& tr, int comp) {
    if (comp < 0) return tr.inputs;
    std::vector<double> out(tr.samples());
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k] = tr.component(k, static_cast<std::size_t>(comp));
    return out;
}

EnsembleRun integrate_spec(const ScenarioSpec& spec,
                           const std::vector<std::vector<double>>& ics) {
    const auto& h = spec.horizon;
    EnsembleRun run;
    if (const auto* exo = std::get_if<ExoDrive>(&spec.drive)) {
        std::vector<std::vector<double>> full;
        full.reserve(ics.size());
        for (const auto& x : ics) {
            if (x.size() != 6)
                throw std::invalid_argument("ei+exosystem initial conditions must have 6 components");
            std::vector<double> y(x);
            y.insert(y.end(), exo->init.begin(), exo->init.end());
            full.push_back(std::move(y));
        }
        const EiExoField field{std::get<EiNetworkParams>(spec.params), exo->params};
        run = integrate_ensemble(field, full, Signal{ConstantSignal{0.0}}, h.t0, h.t1, h.dt,
                                 spec.seed);
        // expose the generated disturbance as the input column
        for (auto& tr : run.trajectories)
            for (std::size_t k = 0; k < tr.samples(); ++k) tr.inputs[k] = tr.component(k, 6);
        nlohmann::json dj;
        to_json(dj, spec.drive);
        run.signal_spec = std::move(dj);
    } else {
        const auto& sig = std::get<Signal>(spec.drive);
        if (spec.model == "fhn") {
            run = integrate_ensemble(FhnField{std::get<FhnParams>(spec.params)}, ics, sig, h.t0,
                                     h.t1, h.dt, spec.seed);
        } else if (spec.model == "ei") {
            run = integrate_ensemble(EiField{std::get<EiNetworkParams>(spec.params)}, ics, sig,
                                     h.t0, h.t1, h.dt, spec.seed);
        } else {
            run = integrate_ensemble(LtiField{std::get<LtiParams>(spec.params)}, ics, sig, h.t0,
                                     h.t1, h.dt, spec.seed);
        }
    }
    run.model = spec.model;
    std::visit([&run](const auto& p) { run.params = p; }, spec.params);
    run.seed = spec.seed;
    return run;
}

} // namespace

ScenarioResult run_scenario(const ScenarioSpec& spec) {
    ScenarioResult out;
    out.spec = spec;
    out.hash = spec_hash(spec);

    const auto ics = default_initial_conditions(spec, spec.seed);
    out.run = integrate_spec(spec, ics);

    const auto& plan = spec.analysis;
    const auto& h = spec.horizon;

    if (plan.distance && out.run.members() >= 2) {
        out.distance = distance_curve(out.run, scenario_metric(spec));
        out.scalars["distance_initial"] = out.distance.front();
        out.scalars["distance_final"] = out.distance.back();
        out.scalars["distance_ratio"] =
            out.distance.front() > 0.0 ? out.distance.back() / out.distance.front()
                                       : (out.distance.back() > 0.0 ? HUGE_VAL : 1.0);
    }

    if (plan.certificate) {
        if (spec.model != "fhn")
            throw std::invalid_argument("alpha certificate applies to FHN ensembles only");
        const auto& req = *plan.certificate;
        out.certificates.push_back(alpha_certificate(out.run, req.mu, req.t0.value_or(h.t0),
                                                     req.t1.value_or(h.t1),
                                                     std::get<FhnParams>(spec.params)));
    }

    auto ensure_trains = [&](const std::string& channel, EventKind kind, double threshold) {
        const std::string key = kind_key(channel, kind);
        if (out.trains.count(key)) return key;
        const int comp = channel_component(spec, channel);
        std::vector<EventTrain> trains;
        trains.reserve(out.run.members());
        for (const auto& tr : out.run.trajectories) {
            const auto series = channel_series(tr, comp);
            trains.push_back(kind == EventKind::Spike
                                 ? detect_spikes(series, tr.t0, tr.dt, threshold, channel)
                                 : detect_peaks(series, tr.t0, tr.dt, channel));
        }
        out.trains[key] = std::move(trains);
        return key;
    };

    for (const auto& e : plan.events) ensure_trains(e.channel, e.kind, e.threshold);

    for (const auto& s : plan.sync) {
        const auto ka = ensure_trains(s.a, s.a_kind, 1.0);
        const auto kb = ensure_trains(s.b, s.b_kind, 1.0);
        double acc = 0.0;
        for (std::size_t i = 0; i < out.run.members(); ++i)
            acc += event_sync_score(out.trains[ka][i], out.trains[kb][i], s.tol);
        out.scalars["sync_mean:" + s.a + ":" + s.b] = acc / static_cast<double>(out.run.members());
    }

    if (plan.pairwise_sync) {
        const auto& req = *plan.pairwise_sync;
        const auto key = ensure_trains(req.channel, req.kind, 1.0);
        const auto& trains = out.trains[key];
        double mn = 1.0, acc = 0.0;
        std::size_t pairs = 0;
        for (std::size_t i = 0; i < trains.size(); ++i) {
            for (std::size_t j = i + 1; j < trains.size(); ++j) {
                const double s = event_sync_score(trains[i], trains[j], req.tol);
                mn = std::min(mn, s);
                acc += s;
                ++pairs;
            }
        }
        out.scalars["pairwise_sync_min:" + req.channel] = mn;
        if (pairs) out.scalars["pairwise_sync_mean:" + req.channel] = acc / static_cast<double>(pairs);
    }

    if (plan.dispersion) {
        const auto& req = *plan.dispersion;
        const auto key = ensure_trains(req.channel, EventKind::Peak, 1.0);
        const auto disp = peak_phase_dispersion(out.trains[key], req.period, req.t_lo, req.t_hi);
        if (disp) out.scalars["dispersion:" + req.channel] = *disp;
    }

    if (plan.segments) {
        if (out.distance.empty())
            throw std::invalid_argument("segment ratios require the distance curve");
        out.segments = segment_ratios(out.distance, h.t0, h.dt, plan.segments->boundaries);
        for (std::size_t i = 0; i < out.segments.size(); ++i)
            out.scalars["segment_ratio_" + std::to_string(i)] = out.segments[i];
    }

    if (plan.regulation_band) {
        if (spec.model != "ei")
            throw std::invalid_argument("regulation band applies to the ei model");
        const double v_rest = std::get<EiNetworkParams>(spec.params).v_rest;
        const auto& first = out.run.trajectories.front();
        const auto k_lo = static_cast<std::size_t>(
            std::llround((plan.regulation_band->t_lo - first.t0) / first.dt));
        double dev = 0.0;
        for (const auto& tr : out.run.trajectories)
            for (std::size_t k = k_lo; k < tr.samples(); ++k)
                dev = std::max(dev, std::abs(tr.component(k, 0) - v_rest));
        out.scalars["regulation_band_max"] = dev;
    }

    nlohmann::json scalars = nlohmann::json::object();
    for (const auto& [k, v] : out.scalars) scalars[k] = v;
    out.summary = {{"format_version", kFormatVersion},
                   {"toolkit_version", kToolkitVersion},
                   {"name", spec.name},
                   {"spec_hash", spec_hash_hex(spec)},
                   {"seed", spec.seed},
                   {"members", out.run.members()},
                   {"scalars", std::move(scalars)}};
    if (!out.certificates.empty()) out.summary["certificates"] = out.certificates;
    if (!out.segments.empty()) out.summary["segment_ratios"] = out.segments;
    return out;
}

} // namespace relcon
