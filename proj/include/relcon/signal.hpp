#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace relcon {

// Uniform sample grid t_k = t0 + k*dt, k = 0..steps. Timestamps are always
// computed from the index, never by accumulation.
struct Grid {
    double t0 = 0.0;
    double dt = 0.01;
    std::size_t steps = 0;

    std::size_t samples() const { return steps + 1; }
    double time(std::size_t k) const { return t0 + static_cast<double>(k) * dt; }
    double t1() const { return time(steps); }
};

// Builds the grid covering [t0, t1]; t1 - t0 must be an integer multiple of dt.
Grid make_grid(double t0, double t1, double dt);

struct NoiseSegment {
    double t_start = 0.0;
    double t_end = 0.0;
    double bias = 0.0;
    double variance = 0.0;
};

struct ConstantSignal {
    double level = 0.0;
};

// bias + amplitude * sin(angular_frequency * t + phase)
struct SineSignal {
    double bias = 0.0;
    double amplitude = 0.0;
    double angular_frequency = 0.0;
    double phase = 0.0;
};

// Pulse-high at the start of each period: amplitude on [0, duty*period),
// 0 on the rest. phase shifts the pattern in time units.
struct SquareSignal {
    double period = 1.0;
    double amplitude = 0.0;
    double duty_cycle = 0.5;
    double phase = 0.0;
};

// Sample-and-hold Gaussian noise: one draw per hold interval,
// value = bias + sqrt(variance) * z. hold_step 0 means "use the grid dt".
// Outside every segment the value is 0.
struct NoiseSignal {
    std::vector<NoiseSegment> segments;
    double hold_step = 0.0;
    std::uint64_t seed = 0;
};

// Previous-sample hold; before the first sample the first value is held.
struct SamplesSignal {
    std::vector<double> times;
    std::vector<double> values;
};

using Signal = std::variant<ConstantSignal, SineSignal, SquareSignal, NoiseSignal, SamplesSignal>;

struct SignalError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

bool is_noise(const Signal& s);

// Structural checks (square period/duty, segment ordering, sample ordering).
// Throws SignalError on violation.
void validate(const Signal& s);

// Pointwise evaluation of the deterministic variants. Throws SignalError for
// noise signals, which only exist as realizations.
double eval(const Signal& s, double t);

// Freezes one realization of the signal on the grid. Deterministic function
// of (signal, grid, seed); the overload without a seed uses the seed stored
// in the noise variant. Gaussian deviates are drawn sequentially, one per
// hold interval counted from the grid start, whether or not the interval
// lands in a segment, so the stream position never depends on segment layout.
std::vector<double> realize(const Signal& s, const Grid& g);
std::vector<double> realize(const Signal& s, const Grid& g, std::uint64_t seed);

std::string signal_type_name(const Signal& s);

void to_json(nlohmann::json& j, const Signal& s);
void from_json(const nlohmann::json& j, Signal& s);

} // namespace relcon
