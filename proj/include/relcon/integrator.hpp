#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "relcon/rng.hpp"
#include "relcon/signal.hpp"

namespace relcon {

// Integration aborts when any state component leaves [-1e6, 1e6] or turns
// non-finite; the model states are O(1), so anything near the bound is a
// numerical blow-up.
inline constexpr double kDivergenceBound = 1e6;

struct DivergenceError : std::runtime_error {
    DivergenceError(std::size_t step_, int member_)
        : std::runtime_error("state diverged at step " + std::to_string(step_) +
                             (member_ >= 0 ? " (member " + std::to_string(member_) + ")" : "")),
          step(step_),
          member(member_) {}
    std::size_t step;
    int member;
};

// Uniformly sampled solution path. states is row-major, one row of `dim`
// components per grid point; inputs holds the realized input on the same grid.
struct Trajectory {
    double t0 = 0.0;
    double dt = 0.0;
    std::size_t dim = 0;
    std::vector<double> states;
    std::vector<double> inputs;

    std::size_t samples() const { return dim ? states.size() / dim : 0; }
    double time(std::size_t k) const { return t0 + static_cast<double>(k) * dt; }
    std::span<const double> state(std::size_t k) const {
        return {states.data() + k * dim, dim};
    }
    double component(std::size_t k, std::size_t c) const { return states[k * dim + c]; }
};

// Classical fixed-step RK4. The input for one step is the sampled value at the
// step's left endpoint, used for all four stages; noise paths are piecewise
// constant by construction and smooth signals are quantized the same way so
// both run through one code path.
template <class Field>
Trajectory integrate(Field&& field, std::span<const double> x0, std::span<const double> inputs,
                     double t0, double dt, std::size_t steps, int member = -1) {
    if (!(dt > 0.0)) throw std::invalid_argument("integrate: dt must be positive");
    if (inputs.size() < steps + 1) throw std::invalid_argument("integrate: input grid too short");
    const std::size_t dim = x0.size();

    Trajectory tr;
    tr.t0 = t0;
    tr.dt = dt;
    tr.dim = dim;
    tr.states.resize((steps + 1) * dim);
    tr.inputs.assign(inputs.begin(), inputs.begin() + static_cast<std::ptrdiff_t>(steps + 1));

    std::vector<double> x(x0.begin(), x0.end());
    std::vector<double> k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
    std::copy(x.begin(), x.end(), tr.states.begin());

    for (std::size_t k = 0; k < steps; ++k) {
        const double u = inputs[k];
        field(std::span<const double>(x), u, std::span<double>(k1));
        for (std::size_t i = 0; i < dim; ++i) tmp[i] = x[i] + 0.5 * dt * k1[i];
        field(std::span<const double>(tmp), u, std::span<double>(k2));
        for (std::size_t i = 0; i < dim; ++i) tmp[i] = x[i] + 0.5 * dt * k2[i];
        field(std::span<const double>(tmp), u, std::span<double>(k3));
        for (std::size_t i = 0; i < dim; ++i) tmp[i] = x[i] + dt * k3[i];
        field(std::span<const double>(tmp), u, std::span<double>(k4));
        for (std::size_t i = 0; i < dim; ++i)
            x[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);

        for (std::size_t i = 0; i < dim; ++i)
            if (!std::isfinite(x[i]) || std::abs(x[i]) > kDivergenceBound)
                throw DivergenceError(k + 1, member);
        std::copy(x.begin(), x.end(), tr.states.begin() + static_cast<std::ptrdiff_t>((k + 1) * dim));
    }
    return tr;
}

// One frozen input realization shared by every member; members are integrated
// independently and stored by initial-condition index, so the result does not
// depend on scheduling.
struct EnsembleRun {
    std::string model;
    nlohmann::json params;
    nlohmann::json signal_spec;
    std::uint64_t seed = 0;
    double t0 = 0.0;
    double dt = 0.0;
    std::size_t dim = 0;
    std::vector<std::vector<double>> initial_conditions;
    std::vector<Trajectory> trajectories;

    std::size_t members() const { return trajectories.size(); }
    std::size_t samples() const { return trajectories.empty() ? 0 : trajectories.front().samples(); }
};

namespace detail {

template <class Field>
EnsembleRun ensemble_from_path(Field&& field, const std::vector<std::vector<double>>& ics,
                               const std::vector<double>& path, double t0, double dt,
                               std::size_t steps, bool parallel) {
    if (ics.empty()) throw std::invalid_argument("ensemble: need at least one initial condition");
    EnsembleRun run;
    run.t0 = t0;
    run.dt = dt;
    run.dim = ics.front().size();
    run.initial_conditions = ics;
    run.trajectories.resize(ics.size());

    int bad_member = -1;
    std::size_t bad_step = 0;
    const auto n = static_cast<std::ptrdiff_t>(ics.size());
#pragma omp parallel for schedule(static) if (parallel)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
            run.trajectories[static_cast<std::size_t>(i)] =
                integrate(field, std::span<const double>(ics[static_cast<std::size_t>(i)]), path,
                          t0, dt, steps, static_cast<int>(i));
        } catch (const DivergenceError& e) {
#pragma omp critical
            if (bad_member < 0 || static_cast<int>(i) < bad_member) {
                bad_member = static_cast<int>(i);
                bad_step = e.step;
            }
        }
    }
    if (bad_member >= 0) throw DivergenceError(bad_step, bad_member);
    return run;
}

} // namespace detail

inline std::uint64_t effective_noise_seed(const Signal& signal, std::uint64_t run_seed) {
    const auto* n = std::get_if<NoiseSignal>(&signal);
    return rng::noise_seed_for_run(run_seed, n ? n->seed : 0);
}

// OpenMP-parallel over members. The signal is realized once, before the
// parallel region; every member integrates against that same realization.
template <class Field>
EnsembleRun integrate_ensemble(Field&& field, const std::vector<std::vector<double>>& ics,
                               const Signal& signal, double t0, double t1, double dt,
                               std::uint64_t seed) {
    const Grid g = make_grid(t0, t1, dt);
    const auto path = realize(signal, g, effective_noise_seed(signal, seed));
    auto run = detail::ensemble_from_path(std::forward<Field>(field), ics, path, t0, dt, g.steps,
                                          /*parallel=*/true);
    run.seed = seed;
    run.signal_spec = signal;
    return run;
}

// Serial reference implementation, kept for testing against the parallel path.
template <class Field>
EnsembleRun integrate_ensemble_serial(Field&& field, const std::vector<std::vector<double>>& ics,
                                      const Signal& signal, double t0, double t1, double dt,
                                      std::uint64_t seed) {
    const Grid g = make_grid(t0, t1, dt);
    const auto path = realize(signal, g, effective_noise_seed(signal, seed));
    auto run = detail::ensemble_from_path(std::forward<Field>(field), ics, path, t0, dt, g.steps,
                                          /*parallel=*/false);
    run.seed = seed;
    run.signal_spec = signal;
    return run;
}

} // namespace relcon
