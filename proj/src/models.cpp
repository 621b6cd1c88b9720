#include "relcon/models.hpp"

#include <cmath>
#include <stdexcept>

namespace relcon {

std::vector<std::string> validate_params(const FhnParams& p) {
    std::vector<std::string> out;
    if (!(1.0 - 2.0 * p.b / 3.0 < p.a && p.a < 1.0)) out.push_back("1-2b/3 < a < 1 violated");
    if (!(p.b > 0.0 && p.b < 1.0)) out.push_back("b in (0,1) violated");
    if (!(p.epsilon < 1.0 / p.b)) out.push_back("epsilon < 1/b violated");
    return out;
}

NeuronState fhn_deriv(const NeuronState& x, double u, const FhnParams& p) {
    return {x.v - x.v * x.v * x.v / 3.0 - x.w + u, p.epsilon * (x.v - p.b * x.w + p.a)};
}

NeuronState fhn_rest_point(const FhnParams& p) {
    const double pc = 3.0 * (1.0 - p.b) / p.b;
    const double qc = 3.0 * p.a / p.b;
    auto f = [&](double v) { return v * v * v + pc * v + qc; };

    // bracket a sign change, then Newton with bisection safeguard
    double lo = -2.0, hi = 2.0;
    for (int i = 0; i < 64 && f(lo) > 0.0; ++i) lo *= 2.0;
    for (int i = 0; i < 64 && f(hi) < 0.0; ++i) hi *= 2.0;
    if (!(f(lo) <= 0.0 && f(hi) >= 0.0))
        throw std::runtime_error("fhn_rest_point: failed to bracket the cubic root");

    double v = -1.2;
    if (v < lo || v > hi) v = 0.5 * (lo + hi);
    const double tol = 1e-13 * (1.0 + std::abs(qc) + std::abs(pc));
    for (int it = 0; it < 200; ++it) {
        const double fv = f(v);
        if (std::abs(fv) <= tol) break;
        if (fv > 0.0) hi = v; else lo = v;
        const double dfv = 3.0 * v * v + pc;
        double step = dfv != 0.0 ? v - fv / dfv : lo - 1.0;
        if (!(step > lo && step < hi)) step = 0.5 * (lo + hi);
        v = step;
    }
    return {v, (v + p.a) / p.b};
}

EiNetworkParams make_ei_params(const FhnParams& e_params, const FhnParams& u_params, double k_e,
                               double k_u, bool literal_typo_mode) {
    if (k_e < 0.0 || k_u < 0.0)
        throw std::invalid_argument("ei params: coupling gains must be >= 0");
    EiNetworkParams p;
    p.e_params = e_params;
    p.u_params = u_params;
    p.k_e = k_e;
    p.k_u = k_u;
    p.v_rest = fhn_rest_point(e_params).v;
    p.literal_typo_mode = literal_typo_mode;
    return p;
}

NetworkState ei_deriv(const NetworkState& x, double u, const EiNetworkParams& p) {
    const auto& pe = p.e_params;
    const auto& pu = p.u_params;
    const double y = x.v_e;
    const double eta = x.v_i1;
    NetworkState d;
    d.v_e = x.v_e - x.v_e * x.v_e * x.v_e / 3.0 - x.w_e + p.k_e * (u - eta + p.v_rest - y);
    d.w_e = pe.epsilon * (x.v_e - pe.b * x.w_e + pe.a);
    // controller block; expressions mirror exo_deriv so that y = v_rest makes
    // them bit-identical to the exosystem's (internal-model property)
    d.v_i1 = x.v_i1 - x.v_i1 * x.v_i1 * x.v_i1 / 3.0 - x.w_i1 + p.k_u * (y - p.v_rest - x.v_i2 - x.v_i1);
    d.w_i1 = pu.epsilon * (x.v_i1 - pu.b * x.w_i1 + pu.a);
    d.v_i2 = x.v_i2 - x.v_i2 * x.v_i2 * x.v_i2 / 3.0 - x.w_i2 + p.k_u * (-x.v_i1 - x.v_i2);
    d.w_i2 = pu.epsilon * (x.v_i2 - pu.b * (p.literal_typo_mode ? x.w_i1 : x.w_i2) + pu.a);
    return d;
}

ExoState exo_deriv(const ExoState& x, const FhnParams& p_u, double k_u, bool literal_typo_mode) {
    ExoState d;
    d.v_u1 = x.v_u1 - x.v_u1 * x.v_u1 * x.v_u1 / 3.0 - x.w_u1 + k_u * (-x.v_u2 - x.v_u1);
    d.w_u1 = p_u.epsilon * (x.v_u1 - p_u.b * x.w_u1 + p_u.a);
    d.v_u2 = x.v_u2 - x.v_u2 * x.v_u2 * x.v_u2 / 3.0 - x.w_u2 + k_u * (-x.v_u1 - x.v_u2);
    d.w_u2 = p_u.epsilon * (x.v_u2 - p_u.b * (literal_typo_mode ? x.w_u1 : x.w_u2) + p_u.a);
    return d;
}

void to_json(nlohmann::json& j, const FhnParams& p) {
    j = {{"a", p.a}, {"b", p.b}, {"epsilon", p.epsilon}};
}

void from_json(const nlohmann::json& j, FhnParams& p) {
    p.a = j.at("a").get<double>();
    p.b = j.at("b").get<double>();
    p.epsilon = j.at("epsilon").get<double>();
}

void to_json(nlohmann::json& j, const EiNetworkParams& p) {
    j = {{"e_params", p.e_params},       {"u_params", p.u_params},
         {"k_e", p.k_e},                 {"k_u", p.k_u},
         {"v_rest", p.v_rest},           {"literal_typo_mode", p.literal_typo_mode}};
}

void from_json(const nlohmann::json& j, EiNetworkParams& p) {
    FhnParams e = j.at("e_params").get<FhnParams>();
    FhnParams u = j.at("u_params").get<FhnParams>();
    p = make_ei_params(e, u, j.at("k_e").get<double>(), j.at("k_u").get<double>(),
                       j.value("literal_typo_mode", false));
    // stored v_rest wins if present and consistent; recomputation guards stale files
    if (j.contains("v_rest")) {
        const double stored = j.at("v_rest").get<double>();
        if (std::abs(stored - p.v_rest) > 1e-9)
            throw std::invalid_argument("ei params: stored v_rest disagrees with e_params");
        p.v_rest = stored;
    }
}

void to_json(nlohmann::json& j, const LtiParams& p) { j = {{"omega", p.omega}}; }

void from_json(const nlohmann::json& j, LtiParams& p) {
    p.omega = j.at("omega").get<double>();
    if (!(p.omega > 0.0)) throw std::invalid_argument("lti params: omega must be positive");
}

} // namespace relcon
