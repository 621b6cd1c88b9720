// Timing comparison of the OpenMP kernels against their serial reference:
// frozen-input ensemble integration and the max-pairwise distance curve.

#include <chrono>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "relcon/contraction.hpp"
#include "relcon/fields.hpp"
#include "relcon/integrator.hpp"

using namespace relcon;

namespace {

double seconds(std::chrono::steady_clock::time_point a, std::chrono::steady_clock::time_point b) {
    return std::chrono::duration<double>(b - a).count();
}

} // namespace

int main() {
    const FhnParams params{0.7, 0.8, 1.0 / 12.5};
    const FhnField field{params};
    const Signal input = SineSignal{0.7, 0.2, 3.14159265358979323846 / 23.0, 0.0};

    const int members = 48;
    const double t1 = 400.0, dt = 0.005;
    std::vector<std::vector<double>> ics;
    const auto rest = fhn_rest_point(params);
    for (int i = 0; i < members; ++i)
        ics.push_back({rest.v + 0.02 * i - 0.5, rest.w + 0.01 * i - 0.25});

#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (built without OpenMP)\n");
#endif

    auto t_a = std::chrono::steady_clock::now();
    const auto serial = integrate_ensemble_serial(field, ics, input, 0.0, t1, dt, 7);
    auto t_b = std::chrono::steady_clock::now();
    const auto parallel = integrate_ensemble(field, ics, input, 0.0, t1, dt, 7);
    auto t_c = std::chrono::steady_clock::now();

    bool identical = serial.members() == parallel.members();
    for (std::size_t i = 0; identical && i < serial.members(); ++i)
        identical = serial.trajectories[i].states == parallel.trajectories[i].states;

    const double ts = seconds(t_a, t_b), tp = seconds(t_b, t_c);
    std::printf("integrate_ensemble   %3d members x %7zu steps: serial %7.3f s | omp %7.3f s | "
                "speedup %4.2fx | bitwise %s\n",
                members, serial.trajectories.front().samples() - 1, ts, tp, ts / tp,
                identical ? "equal" : "DIFFERENT");

    const auto metric = make_fhn_metric(params.epsilon);
    t_a = std::chrono::steady_clock::now();
    const auto d_serial = distance_curve_serial(serial, metric);
    t_b = std::chrono::steady_clock::now();
    const auto d_parallel = distance_curve(serial, metric);
    t_c = std::chrono::steady_clock::now();

    const double ds = seconds(t_a, t_b), dp = seconds(t_b, t_c);
    std::printf("distance_curve       %3zu pairs   x %7zu points: serial %7.3f s | omp %7.3f s | "
                "speedup %4.2fx | bitwise %s\n",
                static_cast<std::size_t>(members) * (members - 1) / 2, d_serial.size(), ds, dp,
                ds / dp, d_serial == d_parallel ? "equal" : "DIFFERENT");
    return 0;
}
