#include "relcon/contraction.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace relcon {

const char* to_string(RegionLabel r) {
    switch (r) {
        case RegionLabel::Lower: return "lower";
        case RegionLabel::Upper: return "upper";
        default: return "interior";
    }
}

double metric_fhn(const NeuronState& a, const NeuronState& b, double epsilon) {
    const double dv = a.v - b.v;
    const double dw = a.w - b.w;
    return std::sqrt(0.5 * dv * dv + dw * dw / (2.0 * epsilon));
}

double metric_fhn(std::span<const double> a, std::span<const double> b, double epsilon) {
    return metric_fhn(NeuronState{a[0], a[1]}, NeuronState{b[0], b[1]}, epsilon);
}

double metric_net(std::span<const double> a, std::span<const double> b, double eps_e,
                  double eps_u) {
    const double p[6] = {1.0, 1.0 / eps_e, 1.0, 1.0 / eps_u, 1.0, 1.0 / eps_u};
    double acc = 0.0;
    for (int i = 0; i < 6; ++i) {
        const double d = a[i] - b[i];
        acc += p[i] * d * d;
    }
    return std::sqrt(acc);
}

RegionLabel region_fhn(double v, double mu) {
    const double bound = std::sqrt(1.0 + mu);
    if (mu > 0.0) {
        if (v <= -bound) return RegionLabel::Lower;
        if (v >= bound) return RegionLabel::Upper;
    } else {
        if (v < -bound) return RegionLabel::Lower;
        if (v > bound) return RegionLabel::Upper;
    }
    return RegionLabel::Interior;
}

RegionLabel region_fhn(const NeuronState& x, double mu) { return region_fhn(x.v, mu); }

NetRegion region_net(std::span<const double> x, double mu) {
    NetRegion r;
    const double v[3] = {x[0], x[2], x[4]};
    r.in_region = true;
    for (int i = 0; i < 3; ++i) {
        if (!(v[i] * v[i] >= 1.0 + mu)) r.in_region = false;
        r.signs[i] = v[i] < 0.0 ? -1 : +1;
    }
    return r;
}

double lambda_rate(double mu, double b) {
    if (!(mu > 0.0) || !(b > 0.0)) throw std::invalid_argument("lambda_rate: mu, b must be > 0");
    return std::sqrt(std::min(mu, b));
}

std::array<double, 9> coupling_matrix(double k_e, double k_u) {
    const double off = 0.5 * (k_u - k_e);
    return {-k_e, off, 0.0, off, -k_u, -k_u, 0.0, -k_u, -k_u};
}

namespace {

// cyclic Jacobi on a symmetric 3x3; plenty for 1e-12 absolute accuracy
double max_eigenvalue_sym3(std::array<double, 9> m) {
    auto& a = m;
    const auto at = [&a](int i, int j) -> double& { return a[static_cast<std::size_t>(3 * i + j)]; };
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = std::abs(at(0, 1)) + std::abs(at(0, 2)) + std::abs(at(1, 2));
        double scale = 0.0;
        for (int i = 0; i < 3; ++i) scale = std::max(scale, std::abs(at(i, i)));
        if (off <= 1e-300 || off <= 1e-16 * std::max(scale, 1.0)) break;
        for (int p = 0; p < 2; ++p) {
            for (int q = p + 1; q < 3; ++q) {
                const double apq = at(p, q);
                if (apq == 0.0) continue;
                const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double app = at(p, p), aqq = at(q, q);
                at(p, p) = app - t * apq;
                at(q, q) = aqq + t * apq;
                at(p, q) = at(q, p) = 0.0;
                const int r = 3 - p - q; // the remaining index
                const double arp = at(r, p), arq = at(r, q);
                at(r, p) = at(p, r) = c * arp - s * arq;
                at(r, q) = at(q, r) = s * arp + c * arq;
            }
        }
    }
    return std::max({at(0, 0), at(1, 1), at(2, 2)});
}

} // namespace

double sigma_of_gains(double k_e, double k_u) {
    return max_eigenvalue_sym3(coupling_matrix(k_e, k_u));
}

double nu(const NeuronState& a, const NeuronState& b, double b_param) {
    const double dv = a.v - b.v;
    const double dw = a.w - b.w;
    return 3.0 + (a.v * a.v + b.v * b.v + a.v * b.v - 3.0) * dv * dv / 3.0 + b_param * dw * dw;
}

Metric make_fhn_metric(double epsilon) {
    return [epsilon](std::span<const double> a, std::span<const double> b) {
        return metric_fhn(a, b, epsilon);
    };
}

Metric make_net_metric(double eps_e, double eps_u) {
    return [eps_e, eps_u](std::span<const double> a, std::span<const double> b) {
        return metric_net(a, b, eps_e, eps_u);
    };
}

Metric make_euclidean_metric() {
    return [](std::span<const double> a, std::span<const double> b) {
        double acc = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            const double d = a[i] - b[i];
            acc += d * d;
        }
        return std::sqrt(acc);
    };
}

namespace {

std::vector<double> distance_curve_impl(const EnsembleRun& run, const Metric& m, bool parallel) {
    if (run.members() < 2)
        throw std::invalid_argument("distance_curve: need at least two trajectories");
    const auto samples = static_cast<std::ptrdiff_t>(run.samples());
    const std::size_t members = run.members();
    std::vector<double> out(static_cast<std::size_t>(samples), 0.0);
#pragma omp parallel for schedule(static) if (parallel)
    for (std::ptrdiff_t k = 0; k < samples; ++k) {
        double best = 0.0;
        for (std::size_t i = 0; i < members; ++i) {
            const auto xi = run.trajectories[i].state(static_cast<std::size_t>(k));
            for (std::size_t j = i + 1; j < members; ++j) {
                best = std::max(best,
                                m(xi, run.trajectories[j].state(static_cast<std::size_t>(k))));
            }
        }
        out[static_cast<std::size_t>(k)] = best;
    }
    return out;
}

std::size_t grid_index(const Trajectory& tr, double t, const char* what) {
    const auto k = std::llround((t - tr.t0) / tr.dt);
    if (k < 0 || static_cast<std::size_t>(k) >= tr.samples() ||
        std::abs(tr.time(static_cast<std::size_t>(k)) - t) > 1e-9 * std::max(1.0, std::abs(t)))
        throw std::invalid_argument(std::string(what) + ": time is outside the stored grid");
    return static_cast<std::size_t>(k);
}

} // namespace

std::vector<double> distance_curve(const EnsembleRun& run, const Metric& m) {
    return distance_curve_impl(run, m, true);
}

std::vector<double> distance_curve_serial(const EnsembleRun& run, const Metric& m) {
    return distance_curve_impl(run, m, false);
}

IntegralCriterionResult integral_criterion(const Trajectory& a, const Trajectory& b, double t0,
                                           double t1, double b_param) {
    if (a.samples() != b.samples() || a.t0 != b.t0 || a.dt != b.dt)
        throw std::invalid_argument("integral_criterion: trajectories on different grids");
    const std::size_t k0 = grid_index(a, t0, "integral_criterion");
    const std::size_t k1 = grid_index(a, t1, "integral_criterion");
    if (k1 < k0) throw std::invalid_argument("integral_criterion: t1 < t0");

    // accumulate nu - 3 so the degenerate pair (nu identically 3) lands on an
    // exact zero instead of trapezoid-weight rounding noise
    double co_excess = 0.0, other_excess = 0.0, co_measure = 0.0, other_measure = 0.0;
    for (std::size_t k = k0; k <= k1; ++k) {
        const NeuronState xa{a.component(k, 0), a.component(k, 1)};
        const NeuronState xb{b.component(k, 0), b.component(k, 1)};
        const double w = (k == k0 || k == k1) ? 0.5 * a.dt : a.dt;
        const RegionLabel ra = region_fhn(xa, 0.0);
        const RegionLabel rb = region_fhn(xb, 0.0);
        const bool together = ra == rb && ra != RegionLabel::Interior;
        (together ? co_excess : other_excess) += w * (nu(xa, xb, b_param) - 3.0);
        (together ? co_measure : other_measure) += w;
    }
    IntegralCriterionResult r;
    r.lhs = co_excess + 3.0 * co_measure;
    r.rhs = 3.0 * (t1 - t0) - (other_excess + 3.0 * other_measure);
    // lhs > rhs, evaluated in the well-conditioned form int(nu - 3) > 0
    r.contracts = co_excess + other_excess > 0.0;
    return r;
}

RegionClassifier fhn_region_classifier(double mu) {
    return [mu](std::span<const double> x) {
        switch (region_fhn(x[0], mu)) {
            case RegionLabel::Lower: return 0;
            case RegionLabel::Upper: return 1;
            default: return -1;
        }
    };
}

RegionClassifier net_region_classifier(double mu) {
    return [mu](std::span<const double> x) {
        const NetRegion r = region_net(x, mu);
        if (!r.in_region) return -1;
        int id = 0;
        for (int i = 0; i < 3; ++i) id = 2 * id + (r.signs[i] > 0 ? 1 : 0);
        return id;
    };
}

double co_contraction_time(const EnsembleRun& run, double t0, double t1,
                           const RegionClassifier& classify) {
    if (run.members() < 1) throw std::invalid_argument("co_contraction_time: empty ensemble");
    const auto& first = run.trajectories.front();
    const std::size_t k0 = grid_index(first, t0, "co_contraction_time");
    const std::size_t k1 = grid_index(first, t1, "co_contraction_time");
    std::size_t count = 0;
    for (std::size_t k = k0; k < k1; ++k) {
        const int label = classify(first.state(k));
        if (label < 0) continue;
        bool together = true;
        for (std::size_t i = 1; i < run.members() && together; ++i)
            together = classify(run.trajectories[i].state(k)) == label;
        if (together) ++count;
    }
    return static_cast<double>(count) * run.dt;
}

ContractionCertificate alpha_certificate(const EnsembleRun& run, double mu, double t0, double t1,
                                         const FhnParams& p) {
    if (!(mu > 0.0)) throw std::invalid_argument("alpha_certificate: mu must be > 0");
    ContractionCertificate c;
    c.mu = mu;
    c.lambda = lambda_rate(mu, p.b);
    c.t0 = t0;
    c.t1 = t1;
    c.delta_c = co_contraction_time(run, t0, t1, fhn_region_classifier(mu));
    const double span = t1 - t0;
    const double sqrt2 = std::sqrt(2.0);
    c.alpha = std::exp(-c.lambda * c.delta_c + sqrt2 * (span - c.delta_c));
    c.precondition_met = c.delta_c > sqrt2 / (sqrt2 + c.lambda) * span;

    const auto& first = run.trajectories.front();
    const std::size_t k0 = grid_index(first, t0, "alpha_certificate");
    const std::size_t k1 = grid_index(first, t1, "alpha_certificate");
    double worst = 0.0;
    for (std::size_t i = 0; i < run.members(); ++i) {
        for (std::size_t j = i + 1; j < run.members(); ++j) {
            const auto& ta = run.trajectories[i];
            const auto& tb = run.trajectories[j];
            const double d0 = metric_fhn(ta.state(k0), tb.state(k0), p.epsilon);
            if (d0 == 0.0) continue;
            const double d1 = metric_fhn(ta.state(k1), tb.state(k1), p.epsilon);
            worst = std::max(worst, d1 / d0);
        }
    }
    c.measured_ratio = worst;
    return c;
}

void to_json(nlohmann::json& j, const ContractionCertificate& c) {
    j = {{"mu", c.mu},
         {"lambda", c.lambda},
         {"t0", c.t0},
         {"t1", c.t1},
         {"delta_c", c.delta_c},
         {"alpha", c.alpha},
         {"precondition_met", c.precondition_met},
         {"measured_ratio", c.measured_ratio}};
}

void from_json(const nlohmann::json& j, ContractionCertificate& c) {
    c.mu = j.at("mu").get<double>();
    c.lambda = j.at("lambda").get<double>();
    c.t0 = j.at("t0").get<double>();
    c.t1 = j.at("t1").get<double>();
    c.delta_c = j.at("delta_c").get<double>();
    c.alpha = j.at("alpha").get<double>();
    c.precondition_met = j.at("precondition_met").get<bool>();
    c.measured_ratio = j.at("measured_ratio").get<double>();
}

} // namespace relcon
