#include "relcon/signal.hpp"

#include <algorithm>
#include <cmath>

#include "relcon/rng.hpp"

namespace relcon {

Grid make_grid(double t0, double t1, double dt) {
    if (!(dt > 0.0)) throw SignalError("grid: dt must be positive");
    if (t1 < t0) throw SignalError("grid: t1 < t0");
    const double span = t1 - t0;
    const auto steps = static_cast<std::size_t>(std::llround(span / dt));
    if (std::abs(static_cast<double>(steps) * dt - span) > 1e-9 * std::max(1.0, std::abs(span)))
        throw SignalError("grid: (t1 - t0) is not an integer multiple of dt");
    return Grid{t0, dt, steps};
}

bool is_noise(const Signal& s) { return std::holds_alternative<NoiseSignal>(s); }

namespace {

void validate_noise(const NoiseSignal& n) {
    if (n.hold_step < 0.0) throw SignalError("noise: hold_step must be >= 0");
    for (const auto& seg : n.segments) {
        if (!(seg.t_end > seg.t_start)) throw SignalError("noise: segment with t_end <= t_start");
        if (seg.variance < 0.0) throw SignalError("noise: negative variance");
    }
    for (std::size_t i = 1; i < n.segments.size(); ++i) {
        if (n.segments[i].t_start < n.segments[i - 1].t_end)
            throw SignalError("noise: segments overlap or are out of order");
    }
}

} // namespace

void validate(const Signal& s) {
    std::visit(
        [](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, SquareSignal>) {
                if (!(v.period > 0.0)) throw SignalError("square: period must be positive");
                if (!(v.duty_cycle > 0.0 && v.duty_cycle < 1.0))
                    throw SignalError("square: duty_cycle must lie in (0,1)");
            } else if constexpr (std::is_same_v<T, NoiseSignal>) {
                validate_noise(v);
            } else if constexpr (std::is_same_v<T, SamplesSignal>) {
                if (v.times.size() != v.values.size())
                    throw SignalError("samples: times/values size mismatch");
                if (v.times.empty()) throw SignalError("samples: empty");
                if (!std::is_sorted(v.times.begin(), v.times.end()) ||
                    std::adjacent_find(v.times.begin(), v.times.end()) != v.times.end())
                    throw SignalError("samples: times must be strictly increasing");
            }
        },
        s);
}

double eval(const Signal& s, double t) {
    return std::visit(
        [t](const auto& v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, ConstantSignal>) {
                return v.level;
            } else if constexpr (std::is_same_v<T, SineSignal>) {
                return v.bias + v.amplitude * std::sin(v.angular_frequency * t + v.phase);
            } else if constexpr (std::is_same_v<T, SquareSignal>) {
                double ph = std::fmod(t - v.phase, v.period);
                if (ph < 0.0) ph += v.period;
                return ph < v.duty_cycle * v.period ? v.amplitude : 0.0;
            } else if constexpr (std::is_same_v<T, SamplesSignal>) {
                auto it = std::upper_bound(v.times.begin(), v.times.end(), t);
                if (it == v.times.begin()) return v.values.front();
                return v.values[static_cast<std::size_t>(it - v.times.begin()) - 1];
            } else {
                throw SignalError("eval: noise signals require realize()");
            }
        },
        s);
}

namespace {

std::vector<double> realize_noise(const NoiseSignal& n, const Grid& g, std::uint64_t seed) {
    validate_noise(n);
    const double hold = n.hold_step > 0.0 ? n.hold_step : g.dt;
    const auto per_hold = static_cast<std::size_t>(std::llround(hold / g.dt));
    if (per_hold < 1 || std::abs(static_cast<double>(per_hold) * g.dt - hold) > 1e-9 * hold)
        throw SignalError("noise: dt must divide hold_step");

    auto stream = rng::Stream(seed);
    const std::size_t n_holds = g.steps / per_hold + 1;
    std::vector<double> z(n_holds);
    for (auto& zi : z) zi = stream.normal();

    std::vector<double> out(g.samples(), 0.0);
    for (std::size_t k = 0; k < out.size(); ++k) {
        const double t = g.time(k);
        for (const auto& seg : n.segments) {
            if (t >= seg.t_start && t < seg.t_end) {
                out[k] = seg.bias + std::sqrt(seg.variance) * z[k / per_hold];
                break;
            }
        }
    }
    return out;
}

} // namespace

std::vector<double> realize(const Signal& s, const Grid& g) {
    if (const auto* n = std::get_if<NoiseSignal>(&s)) return realize_noise(*n, g, n->seed);
    validate(s);
    std::vector<double> out(g.samples());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = eval(s, g.time(k));
    return out;
}

std::vector<double> realize(const Signal& s, const Grid& g, std::uint64_t seed) {
    if (const auto* n = std::get_if<NoiseSignal>(&s)) return realize_noise(*n, g, seed);
    return realize(s, g);
}

std::string signal_type_name(const Signal& s) {
    switch (s.index()) {
        case 0: return "constant";
        case 1: return "sine";
        case 2: return "square";
        case 3: return "noise";
        default: return "samples";
    }
}

void to_json(nlohmann::json& j, const Signal& s) {
    std::visit(
        [&j](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, ConstantSignal>) {
                j = {{"type", "constant"}, {"level", v.level}};
            } else if constexpr (std::is_same_v<T, SineSignal>) {
                j = {{"type", "sine"},
                     {"bias", v.bias},
                     {"amplitude", v.amplitude},
                     {"angular_frequency", v.angular_frequency},
                     {"phase", v.phase}};
            } else if constexpr (std::is_same_v<T, SquareSignal>) {
                j = {{"type", "square"},
                     {"period", v.period},
                     {"amplitude", v.amplitude},
                     {"duty_cycle", v.duty_cycle},
                     {"phase", v.phase}};
            } else if constexpr (std::is_same_v<T, NoiseSignal>) {
                auto segs = nlohmann::json::array();
                for (const auto& seg : v.segments)
                    segs.push_back({{"t_start", seg.t_start},
                                    {"t_end", seg.t_end},
                                    {"bias", seg.bias},
                                    {"variance", seg.variance}});
                j = {{"type", "noise"},
                     {"segments", std::move(segs)},
                     {"hold_step", v.hold_step},
                     {"seed", v.seed}};
            } else {
                j = {{"type", "samples"}, {"times", v.times}, {"values", v.values}};
            }
        },
        s);
}

void from_json(const nlohmann::json& j, Signal& s) {
    const auto type = j.at("type").get<std::string>();
    if (type == "constant") {
        s = ConstantSignal{j.at("level").get<double>()};
    } else if (type == "sine") {
        s = SineSignal{j.at("bias").get<double>(), j.at("amplitude").get<double>(),
                       j.at("angular_frequency").get<double>(), j.value("phase", 0.0)};
    } else if (type == "square") {
        s = SquareSignal{j.at("period").get<double>(), j.at("amplitude").get<double>(),
                         j.at("duty_cycle").get<double>(), j.value("phase", 0.0)};
    } else if (type == "noise") {
        NoiseSignal n;
        n.hold_step = j.value("hold_step", 0.0);
        n.seed = j.value("seed", std::uint64_t{0});
        for (const auto& seg : j.at("segments"))
            n.segments.push_back({seg.at("t_start").get<double>(), seg.at("t_end").get<double>(),
                                  seg.at("bias").get<double>(), seg.at("variance").get<double>()});
        s = std::move(n);
    } else if (type == "samples") {
        s = SamplesSignal{j.at("times").get<std::vector<double>>(),
                          j.at("values").get<std::vector<double>>()};
    } else {
        throw SignalError("unknown signal type: " + type);
    }
    validate(s);
}

} // namespace relcon
