#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace relcon {

enum class EventKind { Spike, Peak };

const char* to_string(EventKind k);

struct EventTrain {
    std::vector<double> times; // strictly increasing
    EventKind kind = EventKind::Peak;
    std::string channel;
};

// One event per upward threshold crossing (previous sample < threshold <=
// current); event times are linearly interpolated between samples. The
// default threshold 1.0 is the boundary of the upper contraction region.
EventTrain detect_spikes(std::span<const double> v, double t0, double dt, double threshold = 1.0,
                         std::string channel = "v");

// Local maxima by the three-point test y[k-1] < y[k] >= y[k+1] (plateaus
// report the leftmost index), refined by the quadratic vertex through the
// three samples.
EventTrain detect_peaks(std::span<const double> y, double t0, double dt,
                        std::string channel = "y");

// Greedy one-to-one matching of nearest events within +-tol;
// score = 2 * matches / (|a| + |b|). Two empty trains score 1, one empty
// train scores 0.
double event_sync_score(const EventTrain& a, const EventTrain& b, double tol);

// Circular standard deviation sqrt(-2 ln R) of the event phases
// (t mod period) * 2*pi / period, pooled across trains, restricted to
// [t_lo, t_hi]. Fewer than 2 pooled events -> nullopt.
std::optional<double> peak_phase_dispersion(const std::vector<EventTrain>& trains, double period,
                                            double t_lo, double t_hi);

// d(end)/d(start) per segment, segments delimited by the curve window and the
// given boundaries (strictly increasing, inside the window). 0/0 reports 1.
std::vector<double> segment_ratios(std::span<const double> curve, double t0, double dt,
                                   std::span<const double> boundaries);

} // namespace relcon
