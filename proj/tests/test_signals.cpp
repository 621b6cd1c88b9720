#include <doctest.h>

#include <cmath>

#include "relcon/rng.hpp"
#include "relcon/signal.hpp"

using namespace relcon;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("constant signal realizes to its level everywhere") {
    const Signal s = ConstantSignal{0.7};
    const auto path = realize(s, make_grid(0.0, 10.0, 0.1));
    for (const double v : path) CHECK(v == 0.7);
}

TEST_CASE("sine evaluation") {
    const Signal s = SineSignal{0.7, 0.2, kPi / 23.0, 0.0};
    CHECK(eval(s, 11.5) == doctest::Approx(0.9).epsilon(1e-12));
    CHECK(eval(s, 0.0) == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("square wave evaluation and period mean") {
    const Signal s = SquareSignal{60.0, 0.6, 1.0 / 3.0, 0.0};
    CHECK(eval(s, 10.0) == 0.6);
    CHECK(eval(s, 30.0) == 0.0);
    CHECK(eval(s, 19.99) == 0.6);
    CHECK(eval(s, 20.0) == 0.0);
    // negative time wraps
    CHECK(eval(s, -50.0) == 0.6);

    const double dt = 0.01;
    const auto path = realize(s, make_grid(0.0, 60.0 - dt, dt));
    double mean = 0.0;
    for (const double v : path) mean += v;
    mean /= static_cast<double>(path.size());
    CHECK(std::abs(mean - 0.6 / 3.0) <= 0.6 * dt / 60.0 + 1e-12);
}

TEST_CASE("zero-variance noise equals its bias on the segment and 0 outside") {
    NoiseSignal n;
    n.segments = {{0.0, 10.0, 0.3, 0.0}};
    const Signal s = n;
    const auto path = realize(s, make_grid(0.0, 20.0, 0.1));
    for (std::size_t k = 0; k < path.size(); ++k) {
        const double t = 0.1 * static_cast<double>(k);
        if (t < 10.0 - 1e-12)
            CHECK(path[k] == 0.3);
        else
            CHECK(path[k] == 0.0);
    }
}

TEST_CASE("noise realization is deterministic in the seed") {
    NoiseSignal n;
    n.segments = {{0.0, 50.0, 0.5, 0.25}};
    n.seed = 42;
    const Signal s = n;
    const Grid g = make_grid(0.0, 50.0, 0.01);
    const auto a = realize(s, g);
    const auto b = realize(s, g);
    CHECK(a == b);
    const auto c = realize(s, g, 43);
    CHECK(a != c);
}

TEST_CASE("noise hold interval reuses one draw per interval") {
    NoiseSignal n;
    n.segments = {{0.0, 10.0, 0.0, 1.0}};
    n.hold_step = 0.5;
    const Signal s = n;
    const auto path = realize(s, make_grid(0.0, 10.0, 0.1));
    for (std::size_t k = 0; k + 1 < path.size() - 1; ++k) {
        if ((k + 1) % 5 != 0) CHECK(path[k] == path[k + 1]);
    }
    // distinct intervals almost surely differ
    CHECK(path[0] != path[5]);
}

TEST_CASE("signal validation errors") {
    CHECK_THROWS_AS(validate(Signal{SquareSignal{0.0, 1.0, 0.5, 0.0}}), SignalError);
    CHECK_THROWS_AS(validate(Signal{SquareSignal{10.0, 1.0, 1.0, 0.0}}), SignalError);

    NoiseSignal overlap;
    overlap.segments = {{0.0, 10.0, 0.0, 1.0}, {5.0, 15.0, 0.0, 1.0}};
    CHECK_THROWS_AS(validate(Signal{overlap}), SignalError);

    NoiseSignal nn;
    nn.segments = {{0.0, 10.0, 0.0, -1.0}};
    CHECK_THROWS_AS(validate(Signal{nn}), SignalError);

    CHECK_THROWS_AS(make_grid(0.0, 1.0, 0.0), SignalError);
    CHECK_THROWS_AS(make_grid(1.0, 0.0, 0.1), SignalError);

    NoiseSignal bad_hold;
    bad_hold.segments = {{0.0, 1.0, 0.0, 1.0}};
    bad_hold.hold_step = 0.25;
    CHECK_THROWS_AS(realize(Signal{bad_hold}, make_grid(0.0, 1.0, 0.1)), SignalError);

    CHECK_THROWS_AS(eval(Signal{NoiseSignal{}}, 0.0), SignalError);

    CHECK_THROWS_AS(validate(Signal{SamplesSignal{{0.0, 0.0, 1.0}, {1.0, 2.0, 3.0}}}),
                    SignalError);
}

TEST_CASE("samples signal holds the previous sample") {
    const Signal s = SamplesSignal{{0.0, 1.0, 2.0}, {5.0, 6.0, 7.0}};
    CHECK(eval(s, -0.5) == 5.0);
    CHECK(eval(s, 0.0) == 5.0);
    CHECK(eval(s, 0.99) == 5.0);
    CHECK(eval(s, 1.0) == 6.0);
    CHECK(eval(s, 10.0) == 7.0);
}

TEST_CASE("signal json round trip") {
    std::vector<Signal> signals;
    signals.emplace_back(ConstantSignal{0.25});
    signals.emplace_back(SineSignal{0.7, 0.2, kPi / 23.0, 0.5});
    signals.emplace_back(SquareSignal{60.0, 0.6, 1.0 / 3.0, 2.0});
    NoiseSignal n;
    n.segments = {{0.0, 100.0, 0.5, 0.25}, {100.0, 200.0, 0.3, 0.01}};
    n.hold_step = 2.0;
    n.seed = 9;
    signals.emplace_back(n);
    signals.emplace_back(SamplesSignal{{0.0, 1.5}, {2.0, -1.0}});

    for (const auto& s : signals) {
        nlohmann::json j;
        to_json(j, s);
        Signal back;
        from_json(j, back);
        nlohmann::json j2;
        to_json(j2, back);
        CHECK(j == j2);
        if (!is_noise(s)) {
            for (double t : {0.0, 0.3, 7.7}) CHECK(eval(s, t) == eval(back, t));
        }
    }
}

TEST_CASE("uniform stream bits are platform-pinned") {
    // mt19937_64 is fully specified; freeze a couple of mapped values so a
    // toolchain change that broke reproducibility would show up here.
    rng::Stream s(7);
    const double u0 = s.uniform01();
    rng::Stream s2(7);
    CHECK(u0 == s2.uniform01());
    CHECK(u0 == doctest::Approx(0.75438530415285798).epsilon(1e-15));
    CHECK(rng::splitmix64(0) == 0xe220a8397b1dcdafull);
}
