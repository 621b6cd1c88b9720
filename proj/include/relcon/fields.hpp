#pragma once

#include <span>

#include "relcon/models.hpp"

namespace relcon {

// Adapters exposing the model derivatives through the integrator's
// (state, input, out) vector-field interface.

struct FhnField {
    FhnParams p;
    static constexpr std::size_t dim = 2;
    void operator()(std::span<const double> x, double u, std::span<double> d) const {
        const auto dx = fhn_deriv({x[0], x[1]}, u, p);
        d[0] = dx.v;
        d[1] = dx.w;
    }
};

struct EiField {
    EiNetworkParams p;
    static constexpr std::size_t dim = 6;
    void operator()(std::span<const double> x, double u, std::span<double> d) const {
        const auto dx = ei_deriv({x[0], x[1], x[2], x[3], x[4], x[5]}, u, p);
        d[0] = dx.v_e;
        d[1] = dx.w_e;
        d[2] = dx.v_i1;
        d[3] = dx.w_i1;
        d[4] = dx.v_i2;
        d[5] = dx.w_i2;
    }
};

// EI network with the exosystem co-simulated in the same state vector,
// components (v_e,w_e,v_i1,w_i1,v_i2,w_i2,v_u1,w_u1,v_u2,w_u2); the external
// input is ignored and u = v_u1 is taken from the state, so the disturbance
// is generated inside the same RK4 step.
struct EiExoField {
    EiNetworkParams p;
    FhnParams exo_params;
    static constexpr std::size_t dim = 10;
    void operator()(std::span<const double> x, double /*u*/, std::span<double> d) const {
        const double u = x[6];
        const auto dn = ei_deriv({x[0], x[1], x[2], x[3], x[4], x[5]}, u, p);
        const auto de = exo_deriv({x[6], x[7], x[8], x[9]}, exo_params, p.k_u,
                                  p.literal_typo_mode);
        d[0] = dn.v_e;
        d[1] = dn.w_e;
        d[2] = dn.v_i1;
        d[3] = dn.w_i1;
        d[4] = dn.v_i2;
        d[5] = dn.w_i2;
        d[6] = de.v_u1;
        d[7] = de.w_u1;
        d[8] = de.v_u2;
        d[9] = de.w_u2;
    }
};

struct LtiField {
    LtiParams p;
    static constexpr std::size_t dim = 2;
    void operator()(std::span<const double> x, double u, std::span<double> d) const {
        lti_deriv(x, u, p, d);
    }
};

} // namespace relcon
