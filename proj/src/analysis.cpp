#include "relcon/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

namespace relcon {

const char* to_string(EventKind k) { return k == EventKind::Spike ? "spike" : "peak"; }

EventTrain detect_spikes(std::span<const double> v, double t0, double dt, double threshold,
                         std::string channel) {
    EventTrain train;
    train.kind = EventKind::Spike;
    train.channel = std::move(channel);
    for (std::size_t k = 1; k < v.size(); ++k) {
        if (v[k - 1] < threshold && v[k] >= threshold) {
            const double frac = (threshold - v[k - 1]) / (v[k] - v[k - 1]);
            train.times.push_back(t0 + (static_cast<double>(k - 1) + frac) * dt);
        }
    }
    return train;
}

EventTrain detect_peaks(std::span<const double> y, double t0, double dt, std::string channel) {
    EventTrain train;
    train.kind = EventKind::Peak;
    train.channel = std::move(channel);
    if (y.size() < 3) return train;
    for (std::size_t k = 1; k + 1 < y.size(); ++k) {
        if (y[k - 1] < y[k] && y[k] >= y[k + 1]) {
            double off = 0.0;
            if (y[k] > y[k + 1]) { // plateaus keep the leftmost grid time
                const double den = y[k - 1] - 2.0 * y[k] + y[k + 1];
                if (std::abs(den) > 0.0) off = 0.5 * (y[k - 1] - y[k + 1]) / den;
                off = std::clamp(off, -0.5, 0.5);
            }
            train.times.push_back(t0 + (static_cast<double>(k) + off) * dt);
        }
    }
    return train;
}

double event_sync_score(const EventTrain& a, const EventTrain& b, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("event_sync_score: tol must be > 0");
    const std::size_t na = a.times.size(), nb = b.times.size();
    if (na == 0 && nb == 0) return 1.0;
    if (na == 0 || nb == 0) return 0.0;

    // candidate pairs sorted by |dt|, ties broken by index for determinism
    std::vector<std::tuple<double, std::size_t, std::size_t>> cands;
    for (std::size_t i = 0; i < na; ++i) {
        for (std::size_t j = 0; j < nb; ++j) {
            const double gap = std::abs(a.times[i] - b.times[j]);
            if (gap <= tol) cands.emplace_back(gap, i, j);
        }
    }
    std::sort(cands.begin(), cands.end());
    std::vector<char> used_a(na, 0), used_b(nb, 0);
    std::size_t matches = 0;
    for (const auto& [gap, i, j] : cands) {
        (void)gap;
        if (!used_a[i] && !used_b[j]) {
            used_a[i] = used_b[j] = 1;
            ++matches;
        }
    }
    return 2.0 * static_cast<double>(matches) / static_cast<double>(na + nb);
}

std::optional<double> peak_phase_dispersion(const std::vector<EventTrain>& trains, double period,
                                            double t_lo, double t_hi) {
    if (!(period > 0.0)) throw std::invalid_argument("peak_phase_dispersion: period must be > 0");
    double c = 0.0, s = 0.0;
    std::size_t n = 0;
    for (const auto& train : trains) {
        for (const double t : train.times) {
            if (t < t_lo || t > t_hi) continue;
            constexpr double kTwoPi = 6.28318530717958647692;
            double ph = std::fmod(t, period);
            if (ph < 0.0) ph += period;
            const double theta = ph * kTwoPi / period;
            c += std::cos(theta);
            s += std::sin(theta);
            ++n;
        }
    }
    if (n < 2) return std::nullopt;
    const double r = std::hypot(c, s) / static_cast<double>(n);
    if (r <= 0.0) return std::sqrt(-2.0 * std::log(1e-300));
    return std::sqrt(-2.0 * std::log(std::min(r, 1.0)));
}

std::vector<double> segment_ratios(std::span<const double> curve, double t0, double dt,
                                   std::span<const double> boundaries) {
    if (curve.empty()) throw std::invalid_argument("segment_ratios: empty curve");
    const double t_end = t0 + static_cast<double>(curve.size() - 1) * dt;
    std::vector<std::size_t> cuts{0};
    for (const double b : boundaries) {
        if (!(b > t0 && b < t_end)) throw std::invalid_argument("segment_ratios: boundary outside window");
        const auto k = static_cast<std::size_t>(std::llround((b - t0) / dt));
        if (k <= cuts.back()) throw std::invalid_argument("segment_ratios: boundaries not increasing");
        cuts.push_back(k);
    }
    cuts.push_back(curve.size() - 1);

    std::vector<double> out;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double start = curve[cuts[i]];
        const double end = curve[cuts[i + 1]];
        out.push_back(start == 0.0 && end == 0.0 ? 1.0 : end / start);
    }
    return out;
}

} // namespace relcon
