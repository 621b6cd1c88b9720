// Acceptance suite: one check per criterion, one PASS/FAIL line each.
// Exit code = number of failed criteria.

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "relcon/contraction.hpp"
#include "relcon/fields.hpp"
#include "relcon/integrator.hpp"
#include "relcon/io.hpp"
#include "relcon/rng.hpp"
#include "relcon/scenario.hpp"

using namespace relcon;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = 3.14159265358979323846;
const FhnParams kFig1{0.7, 0.8, 1.0 / 12.5};

int g_failures = 0;

void report(int id, bool pass, const std::string& what, const std::string& detail) {
    std::printf("[%2d/14] %s  %s%s%s\n", id, pass ? "PASS" : "FAIL", what.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list args;
    va_start(args, f);
    std::vsnprintf(buf, sizeof buf, f, args);
    va_end(args);
    return buf;
}

// the criterion-1 / criterion-2 trajectory pair
std::pair<Trajectory, Trajectory> reference_pair(double dt, double t1) {
    const FhnField field{kFig1};
    const auto steps = static_cast<std::size_t>(std::llround(t1 / dt));
    const std::vector<double> path(steps + 1, 0.0);
    auto a = integrate(field, std::vector<double>{-1.6, -0.6}, path, 0.0, dt, steps);
    auto b = integrate(field, std::vector<double>{-1.4, -0.7}, path, 0.0, dt, steps);
    return {std::move(a), std::move(b)};
}

FhnParams random_valid_params(rng::Stream& s, double b_lo, double b_hi, double eps_lo,
                              double eps_hi) {
    FhnParams p;
    p.b = s.uniform(b_lo, b_hi);
    p.a = s.uniform(1.0 - 2.0 * p.b / 3.0 + 0.05, 0.98);
    p.epsilon = s.uniform(eps_lo, eps_hi);
    return p;
}

Signal random_signal(rng::Stream& s, double horizon) {
    switch (static_cast<int>(s.uniform(0.0, 4.0))) {
        case 0: return ConstantSignal{s.uniform(0.0, 0.8)};
        case 1:
            return SineSignal{s.uniform(0.0, 0.8), s.uniform(0.05, 0.3),
                              2.0 * kPi / s.uniform(20.0, 60.0), 0.0};
        case 2:
            return SquareSignal{s.uniform(20.0, 60.0), s.uniform(0.2, 0.8), s.uniform(0.2, 0.6),
                                0.0};
        default: {
            NoiseSignal n;
            n.segments = {{0.0, horizon, s.uniform(0.1, 0.5), s.uniform(0.0, 0.25)}};
            n.hold_step = 1.0;
            n.seed = static_cast<std::uint64_t>(s.uniform(0.0, 1e9));
            return n;
        }
    }
}

// --- criteria ----------------------------------------------------------------

void criterion_1() {
    const double dt = 0.01;
    const auto [a, b] = reference_pair(dt, 20.0);

    // maximal prefix window with both trajectories in C_down(0.2)
    std::size_t exit_k = a.samples();
    for (std::size_t k = 0; k < a.samples(); ++k) {
        if (region_fhn(a.component(k, 0), 0.2) != RegionLabel::Lower ||
            region_fhn(b.component(k, 0), 0.2) != RegionLabel::Lower) {
            exit_k = k;
            break;
        }
    }
    const double window = (exit_k == a.samples() ? a.time(a.samples() - 1) : a.time(exit_k - 1));
    const bool long_enough = window >= 10.0;

    const double lambda = std::sqrt(0.2);
    const double d0 = metric_fhn(a.state(0), b.state(0), kFig1.epsilon);
    double worst = 0.0, worst_t = 0.0;
    const std::size_t last = (exit_k == a.samples() ? a.samples() : exit_k);
    for (std::size_t k = 1; k < last; ++k) {
        const double d = metric_fhn(a.state(k), b.state(k), kFig1.epsilon);
        const double bound = std::exp(-lambda * a.time(k)) * d0 * (1.0 + 1e-6);
        if (d / bound > worst) {
            worst = d / bound;
            worst_t = a.time(k);
        }
    }
    const bool bound_holds = worst <= 1.0;
    report(1, long_enough && bound_holds, "Prop. 1 quantitative bound, lambda = sqrt(0.2)",
           fmt("co-dwell window %.2f (need >= 10), worst d/bound %.3f at t = %.2f", window, worst,
               worst_t));
}

void criterion_2() {
    const double dt = 1e-3;
    const auto [a, b] = reference_pair(dt, 10.0);
    double worst = 0.0;
    for (std::size_t k = 1; k + 1 < a.samples(); ++k) {
        auto d2 = [&](std::size_t i) {
            const double d = metric_fhn(a.state(i), b.state(i), kFig1.epsilon);
            return d * d;
        };
        const double fd = (d2(k + 1) - d2(k - 1)) / (2.0 * dt);
        const NeuronState xa{a.component(k, 0), a.component(k, 1)};
        const NeuronState xb{b.component(k, 0), b.component(k, 1)};
        const double exact = -nu(xa, xb, kFig1.b) + 3.0;
        worst = std::max(worst, std::abs(fd - exact) / std::abs(exact));
    }
    report(2, worst <= 1e-3, "derivative identity d(d^2)/dt = -nu + 3 (d^2 reading)",
           fmt("max relative error %.3g at dt = 1e-3", worst));
}

void criterion_3() {
    rng::Stream s(1003);
    const double horizon = 50.0, dt = 0.01;
    const auto steps = static_cast<std::size_t>(std::llround(horizon / dt));
    int checked = 0, mismatches = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto p = random_valid_params(s, 0.55, 0.95, 0.04, 0.2);
        const Signal sig = random_signal(s, horizon);
        const auto path = realize(sig, Grid{0.0, dt, steps}, 1000 + trial);
        const FhnField field{p};
        const auto a = integrate(field, std::vector<double>{s.uniform(-2, 2), s.uniform(-1, 1)},
                                 path, 0.0, dt, steps);
        const auto b = integrate(field, std::vector<double>{s.uniform(-2, 2), s.uniform(-1, 1)},
                                 path, 0.0, dt, steps);
        const auto r = integral_criterion(a, b, 0.0, horizon, p.b);
        if (std::abs(r.lhs - r.rhs) <= 10.0 * dt) continue;
        ++checked;
        const double d0 = metric_fhn(a.state(0), b.state(0), p.epsilon);
        const double d1 = metric_fhn(a.state(steps), b.state(steps), p.epsilon);
        if (r.contracts != (d1 < d0)) ++mismatches;
    }
    report(3, mismatches == 0 && checked > 0, "integral criterion == direct d(t1) vs d(t0)",
           fmt("%d/100 pairs above quadrature tolerance, %d verdict mismatches", checked,
               mismatches));
}

void criterion_4() {
    rng::Stream s(1004);
    const double horizon = 40.0, dt = 0.01, mu = 0.2;
    int met = 0, violations = 0;
    double worst_excess = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const auto p = random_valid_params(s, 0.7, 0.9, 0.05, 0.15);
        const Signal sig = random_signal(s, horizon);
        const auto rest = fhn_rest_point(p);
        std::vector<std::vector<double>> ics;
        for (int i = 0; i < 5; ++i)
            ics.push_back({rest.v + s.uniform(-1.0, 1.0), rest.w + s.uniform(-0.5, 0.5)});
        const auto run = integrate_ensemble(FhnField{p}, ics, sig, 0.0, horizon, dt,
                                            static_cast<std::uint64_t>(trial));
        const auto cert = alpha_certificate(run, mu, 0.0, horizon, p);
        if (!cert.precondition_met) continue;
        ++met;
        if (cert.measured_ratio > cert.alpha + 1e-9) {
            ++violations;
            worst_excess = std::max(worst_excess, cert.measured_ratio / cert.alpha);
        }
    }
    report(4, violations == 0, "certificate soundness over 200 randomized ensembles",
           fmt("precondition met in %d runs, %d violations%s", met, violations,
               violations ? fmt(", worst measured/alpha = %.3g", worst_excess).c_str() : ""));
}

void criterion_5() {
    auto ratio = [](const char* name) {
        const auto r = run_scenario(find_builtin(name));
        return r.scalars.at("distance_ratio");
    };
    const double ra = ratio("fig1a");
    const double rb = ratio("fig1b");
    const double rc = ratio("fig1c");
    const bool pass = rb < 0.1 && rc < 0.1 && ra > 0.5;
    report(5, pass, "Fig. 1 reliability ordering at t = 400",
           fmt("ratio(fig1a) = %.3g (need > 0.5), ratio(fig1b) = %.3g, ratio(fig1c) = %.3g "
               "(need < 0.1)",
               ra, rb, rc));
}

void criterion_6() {
    int good = 0;
    std::string pattern;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto spec = find_builtin("fig1d");
        spec.seed = seed;
        const auto r = run_scenario(spec);
        const auto& seg = r.segments;
        const bool ok = seg.size() == 3 && seg[0] < 1.0 && seg[1] > 1.0 && seg[2] < 1.0;
        good += ok;
        pattern += ok ? 'Y' : 'n';
    }
    report(6, good >= 8, "Fig. 1-D segment trend (<1, >1, <1) for >= 8 of 10 seeds",
           fmt("%d/10 seeds [%s]", good, pattern.c_str()));
}

void criterion_7() {
    auto spec = find_builtin("fig3a");
    const auto r = run_scenario(spec);
    const auto& u_peaks = r.trains.at("u:peak").front().times;
    int in_window = 0;
    for (const double t : u_peaks)
        if (t >= 100.0 && t <= 400.0) ++in_window;

    // exact internal-model identity on random states
    const auto& p = std::get<EiNetworkParams>(spec.params);
    rng::Stream s(1007);
    int identity_failures = 0;
    for (int i = 0; i < 1000; ++i) {
        const ExoState z{s.uniform(-2.5, 2.5), s.uniform(-1.5, 1.5), s.uniform(-2.5, 2.5),
                         s.uniform(-1.5, 1.5)};
        const NetworkState x{p.v_rest, s.uniform(-1, 1), z.v_u1, z.w_u1, z.v_u2, z.w_u2};
        const auto dn = ei_deriv(x, s.uniform(-2, 2), p);
        const auto de = exo_deriv(z, p.u_params, p.k_u);
        const double err = std::max({std::abs(dn.v_i1 - de.v_u1), std::abs(dn.w_i1 - de.w_u1),
                                     std::abs(dn.v_i2 - de.v_u2), std::abs(dn.w_i2 - de.w_u2)});
        if (err > 1e-15) ++identity_failures;
    }
    report(7, in_window >= 5 && identity_failures == 0,
           "exosystem oscillation and internal-model identity",
           fmt("%d exosystem peaks in [100,400] (need >= 5), %d identity failures over 1000 states",
               in_window, identity_failures));
}

void criterion_8() {
    const auto r = run_scenario(find_builtin("fig3a"));
    const double band = r.scalars.at("regulation_band_max");
    const double ratio = r.scalars.at("distance_ratio");
    report(8, band <= 0.05 && ratio <= 0.01, "Fig. 3-A regulation at seed 7",
           fmt("max |y - v_rest| on [300,400] = %.3g (need <= 0.05), distance ratio = %.3g "
               "(need <= 0.01)",
               band, ratio));
}

void criterion_9() {
    const auto r = run_scenario(find_builtin("fig3c"));
    const double ratio = r.scalars.at("distance_ratio");
    const double min_sync = r.scalars.at("pairwise_sync_min:eta");
    report(9, ratio >= 0.2 && min_sync < 0.5, "Fig. 3-C non-regulation at seed 7",
           fmt("distance ratio = %.3g (need >= 0.2), min pairwise eta spike sync = %.3g "
               "(need < 0.5)",
               ratio, min_sync));
}

void criterion_10() {
    const auto r = run_scenario(find_builtin("fig3b"));
    const double sync = r.scalars.at("sync_mean:eta:u");
    int spikes_after = 0;
    for (const auto& train : r.trains.at("y:spike"))
        for (const double t : train.times)
            if (t > 100.0) ++spikes_after;
    report(10, sync >= 0.9 && spikes_after == 0, "Fig. 3-B event tracking at seed 7",
           fmt("mean eta-u peak sync = %.3g (need >= 0.9), y spikes after t=100: %d (need 0)",
               sync, spikes_after));
}

void criterion_11() {
    rng::Stream s(1011);
    bool balanced_ok = true;
    for (int i = 0; i < 50; ++i) {
        const double k = s.uniform(0.0, 10.0);
        if (std::abs(sigma_of_gains(k, k)) > 1e-12) balanced_ok = false;
    }
    const double s40 = sigma_of_gains(4.0, 0.0);
    const bool closed_form_ok = std::abs(s40 - 2.0 * (std::sqrt(2.0) - 1.0)) <= 1e-10;

    bool rho_ok = true, oracle_ok = true;
    double worst_gap = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double ke = s.uniform(0.0, 10.0), ku = s.uniform(0.0, 10.0);
        const auto K = coupling_matrix(ke, ku);
        if (K[4] - K[5] - K[7] + K[8] != 0.0) rho_ok = false;
        const double gap = std::abs(sigma_of_gains(ke, ku) - oracles::max_eigenvalue_charpoly(K));
        worst_gap = std::max(worst_gap, gap);
        if (gap > 1e-10) oracle_ok = false;
    }
    report(11, balanced_ok && closed_form_ok && rho_ok && oracle_ok,
           "sigma and K: balanced zero, closed form, rho K rho^T, oracle agreement",
           fmt("sigma(4,0) = %.12f, worst |sigma - oracle| = %.2g", s40, worst_gap));
}

void criterion_12() {
    const auto ra = run_scenario(find_builtin("fig4a"));
    const auto rb = run_scenario(find_builtin("fig4b"));
    const double da = ra.scalars.at("dispersion:y");
    const double db = rb.scalars.at("dispersion:y");
    report(12, da <= 0.05 * 2.0 * kPi && db >= 4.0 * da, "LTI peak synchronization (Fig. 4)",
           fmt("resonant dispersion = %.4g (need <= %.4g), 2w dispersion = %.4g (need >= 4x)",
               da, 0.05 * 2.0 * kPi, db));
}

void criterion_13() {
    const double omega = kPi / 30.0;
    const oracles::LtiResonanceEmbedding field{omega};
    const std::vector<double> dts{0.04, 0.02, 0.01, 0.005};
    std::vector<double> errs;
    for (const double dt : dts) {
        const auto steps = static_cast<std::size_t>(std::llround(60.0 / dt));
        const std::vector<double> path(steps + 1, 0.0);
        const auto tr = integrate(field, std::vector<double>{0.0, 0.0, 0.0, 1.0}, path, 0.0, dt,
                                  steps);
        double sup = 0.0;
        for (std::size_t k = 0; k <= steps; ++k)
            sup = std::max(sup, std::abs(tr.component(k, 0) -
                                         oracles::lti_resonance_exact(omega, tr.time(k))));
        errs.push_back(sup);
    }
    // least-squares slope of log(err) vs log(dt)
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < dts.size(); ++i) {
        const double x = std::log(dts[i]), y = std::log(errs[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(dts.size());
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    report(13, slope >= 3.7 && slope <= 4.3, "integrator order on the resonance closed form",
           fmt("slope = %.3f over dt {0.04, 0.02, 0.01, 0.005}, sup errors {%.2g, %.2g, %.2g, "
               "%.2g}",
               slope, errs[0], errs[1], errs[2], errs[3]));
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void criterion_14() {
    const char* bin = std::getenv("RELCON_BIN");
    if (!bin) {
        report(14, false, "CLI determinism", "RELCON_BIN not set");
        return;
    }
    const fs::path root = fs::temp_directory_path() / "relcon_acceptance_det";
    fs::remove_all(root);
    auto invoke = [&](const std::string& dir, const char* env) {
        const std::string cmd = std::string(env) + " " + bin + " run fig1d --seed 7 --out " +
                                (root / dir).string() + " > /dev/null 2>&1";
        return std::system(cmd.c_str());
    };
    const int r1 = invoke("a", "OMP_NUM_THREADS=1");
    const int r2 = invoke("b", "OMP_NUM_THREADS=1");
    const int r3 = invoke("c", "OMP_NUM_THREADS=4");
    const bool ran = r1 == 0 && r2 == 0 && r3 == 0;
    const auto a = read_file(root / "a" / "trajectories.csv");
    const auto b = read_file(root / "b" / "trajectories.csv");
    const auto c = read_file(root / "c" / "trajectories.csv");
    const bool identical = ran && !a.empty() && a == b && a == c;
    report(14, identical, "CLI determinism across invocations and thread counts",
           fmt("exit codes %d/%d/%d, %zu bytes, repeat %s, threads %s", r1, r2, r3, a.size(),
               a == b ? "equal" : "DIFFER", a == c ? "equal" : "DIFFER"));
    fs::remove_all(root);
}

} // namespace

int main() {
    std::printf("acceptance criteria\n");
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11();
    criterion_12();
    criterion_13();
    criterion_14();
    std::printf("%d of 14 criteria failed\n", g_failures);
    return g_failures;
}
