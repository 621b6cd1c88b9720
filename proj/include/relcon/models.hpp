#pragma once

#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace relcon {

// FitzHugh-Nagumo constants. The admissible range is
//   1 - 2b/3 < a < 1,   b in (0,1),   epsilon < 1/b;
// violations are reported by validate_params but do not block simulation
// (out-of-range parameters are legitimate experiments).
struct FhnParams {
    double a = 0.7;
    double b = 0.8;
    double epsilon = 0.08;
};

std::vector<std::string> validate_params(const FhnParams& p);

struct NeuronState {
    double v = 0.0;
    double w = 0.0;
};

// (v - v^3/3 - w + u, eps*(v - b*w + a))
NeuronState fhn_deriv(const NeuronState& x, double u, const FhnParams& p);

// Equilibrium for u = 0: the real root of v^3 + (3/b)(1-b)v + 3a/b = 0 and
// w = (v + a)/b. Safeguarded Newton with bisection fallback; the residual of
// the cubic is driven below 1e-13. Inside the admissible range v* < -1.
NeuronState fhn_rest_point(const FhnParams& p);

// EI network: plant E (FHN, params e_params, coupling k_e) driven by u and
// inhibited by the controller output eta = v_i1; controller I is a half-center
// pair with the exosystem's parameters. v_rest is the rest potential of the
// uncoupled plant and is computed once at construction.
struct EiNetworkParams {
    FhnParams e_params{0.7, 0.8, 0.08};
    FhnParams u_params{0.6, 0.7, 1.0 / 30.0};
    double k_e = 4.0;
    double k_u = 0.5;
    double v_rest = 0.0;
    // Keep the w_i1 (as printed) form of the second recovery equations instead
    // of the symmetric w_i2 form. Off by default.
    bool literal_typo_mode = false;
};

EiNetworkParams make_ei_params(const FhnParams& e_params, const FhnParams& u_params, double k_e,
                               double k_u, bool literal_typo_mode = false);

// Component order is fixed: (v_e, w_e, v_i1, w_i1, v_i2, w_i2).
struct NetworkState {
    double v_e = 0, w_e = 0, v_i1 = 0, w_i1 = 0, v_i2 = 0, w_i2 = 0;
};

NetworkState ei_deriv(const NetworkState& x, double u, const EiNetworkParams& p);

struct ExoState {
    double v_u1 = 0, w_u1 = 0, v_u2 = 0, w_u2 = 0;
};

// Half-center oscillator; output u = v_u1.
ExoState exo_deriv(const ExoState& x, const FhnParams& p_u, double k_u,
                   bool literal_typo_mode = false);

struct LtiParams {
    double omega = 1.0;
};

// First-order form of  y'' + omega^2 y = u:  state (y, ydot).
inline void lti_deriv(std::span<const double> x, double u, const LtiParams& p,
                      std::span<double> dxdt) {
    dxdt[0] = x[1];
    dxdt[1] = u - p.omega * p.omega * x[0];
}

void to_json(nlohmann::json& j, const FhnParams& p);
void from_json(const nlohmann::json& j, FhnParams& p);
void to_json(nlohmann::json& j, const EiNetworkParams& p);
void from_json(const nlohmann::json& j, EiNetworkParams& p);
void to_json(nlohmann::json& j, const LtiParams& p);
void from_json(const nlohmann::json& j, LtiParams& p);

} // namespace relcon
