#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include <json.hpp>

#include "relcon/integrator.hpp"
#include "relcon/models.hpp"

namespace relcon {

enum class RegionLabel { Lower, Upper, Interior };

const char* to_string(RegionLabel r);

// d(xa, xb) = sqrt( (va-vb)^2/2 + (wa-wb)^2/(2 eps) )
double metric_fhn(const NeuronState& a, const NeuronState& b, double epsilon);
double metric_fhn(std::span<const double> a, std::span<const double> b, double epsilon);

// Network metric on (v_e,w_e,v_i1,w_i1,v_i2,w_i2) with weight matrix
// P = diag(1, 1/eps_e, 1, 1/eps_u, 1, 1/eps_u); no 1/2 factor here.
double metric_net(std::span<const double> a, std::span<const double> b, double eps_e,
                  double eps_u);

// Lower if v <= -sqrt(1+mu), Upper if v >= sqrt(1+mu), else Interior.
// mu = 0 gives the open-region limit and uses strict inequalities.
RegionLabel region_fhn(double v, double mu);
RegionLabel region_fhn(const NeuronState& x, double mu);

// Membership of the 6d state in C(mu) = {v_e^2 >= 1+mu, v_i1^2 >= 1+mu,
// v_i2^2 >= 1+mu}, plus the sign pattern of (v_e, v_i1, v_i2) used to select
// a convex subset (product of half-planes).
struct NetRegion {
    bool in_region = false;
    std::array<int, 3> signs{0, 0, 0}; // +1 / -1
};
NetRegion region_net(std::span<const double> x, double mu);

// Contraction rate of Prop.-style region bounds: sqrt(min(mu, b)).
double lambda_rate(double mu, double b);

// Symmetric coupling matrix K of the EI network, row-major 3x3.
std::array<double, 9> coupling_matrix(double k_e, double k_u);

// Largest eigenvalue of K, computed by cyclic Jacobi rotations to ~1e-15
// accuracy. Non-negativity (rho K rho^T = 0 for rho = [0,1,-1]) must emerge
// numerically; the result is never clamped.
double sigma_of_gains(double k_e, double k_u);

// nu(xa, xb) = 3 + (va^2+vb^2+va*vb-3)(va-vb)^2/3 + b (wa-wb)^2;
// -nu + 3 is the exact time derivative of d^2 along any two solutions under a
// common input.
double nu(const NeuronState& a, const NeuronState& b, double b_param);

using Metric = std::function<double(std::span<const double>, std::span<const double>)>;

Metric make_fhn_metric(double epsilon);
Metric make_net_metric(double eps_e, double eps_u); // uses the first 6 components
Metric make_euclidean_metric();

// Pointwise maximum of the metric over all unordered trajectory pairs.
// The parallel version is OpenMP over grid points and bitwise identical to
// the serial reference.
std::vector<double> distance_curve(const EnsembleRun& run, const Metric& m);
std::vector<double> distance_curve_serial(const EnsembleRun& run, const Metric& m);

struct IntegralCriterionResult {
    double lhs = 0.0;      // integral of nu over T_c
    double rhs = 0.0;      // 3 (t1-t0) - integral of nu over T_i
    bool contracts = false; // lhs > rhs
};

// Trapezoid quadrature on the stored grid; T_c = grid points where both
// states are in the same open contraction region (mu = 0 classification).
IntegralCriterionResult integral_criterion(const Trajectory& a, const Trajectory& b, double t0,
                                           double t1, double b_param);

// Region classifier for co-contraction measurements: returns a label id >= 0
// when the state is inside a contraction region, -1 otherwise; two states are
// co-classified when their ids are equal and >= 0.
using RegionClassifier = std::function<int(std::span<const double>)>;

RegionClassifier fhn_region_classifier(double mu);
RegionClassifier net_region_classifier(double mu);

// Total time (left-endpoint step counting, measure = count * dt) in [t0, t1]
// during which every member is simultaneously in the same region.
double co_contraction_time(const EnsembleRun& run, double t0, double t1,
                           const RegionClassifier& classify);

struct ContractionCertificate {
    double mu = 0.0;
    double lambda = 0.0;
    double t0 = 0.0;
    double t1 = 0.0;
    double delta_c = 0.0;
    double alpha = 0.0;
    bool precondition_met = false;
    double measured_ratio = 0.0;
};

// alpha = exp(-lambda(mu) delta_c + sqrt(2) (t1-t0-delta_c)); the precondition
// delta_c > sqrt(2) (sqrt(2)+lambda)^-1 (t1-t0) is strict, and implies
// alpha in [0,1). measured_ratio is the max over trajectory pairs of
// d(t1)/d(t0) in the FHN metric (pairs starting at distance 0 are skipped).
ContractionCertificate alpha_certificate(const EnsembleRun& run, double mu, double t0, double t1,
                                         const FhnParams& p);

void to_json(nlohmann::json& j, const ContractionCertificate& c);
void from_json(const nlohmann::json& j, ContractionCertificate& c);

} // namespace relcon
