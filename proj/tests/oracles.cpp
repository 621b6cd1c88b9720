#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace oracles {

double max_eigenvalue_charpoly(const std::array<double, 9>& m) {
    const double a11 = m[0], a12 = m[1], a13 = m[2];
    const double a22 = m[4], a23 = m[5], a33 = m[8];
    const double p1 = a12 * a12 + a13 * a13 + a23 * a23;
    if (p1 == 0.0) return std::max({a11, a22, a33});

    const double q = (a11 + a22 + a33) / 3.0;
    const double p2 = (a11 - q) * (a11 - q) + (a22 - q) * (a22 - q) + (a33 - q) * (a33 - q) +
                      2.0 * p1;
    const double p = std::sqrt(p2 / 6.0);
    // B = (A - qI)/p, r = det(B)/2
    const double b11 = (a11 - q) / p, b22 = (a22 - q) / p, b33 = (a33 - q) / p;
    const double b12 = a12 / p, b13 = a13 / p, b23 = a23 / p;
    double r = (b11 * (b22 * b33 - b23 * b23) - b12 * (b12 * b33 - b23 * b13) +
                b13 * (b12 * b23 - b22 * b13)) /
               2.0;
    r = std::clamp(r, -1.0, 1.0);
    const double phi = std::acos(r) / 3.0;
    return q + 2.0 * p * std::cos(phi);
}

double rest_v_bisection(const relcon::FhnParams& p, double lo, double hi) {
    const double pc = 3.0 * (1.0 - p.b) / p.b;
    const double qc = 3.0 * p.a / p.b;
    auto f = [&](double v) { return v * v * v + pc * v + qc; };
    if (!(f(lo) < 0.0 && f(hi) > 0.0)) throw std::runtime_error("bisection: bad bracket");
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

std::array<double, 6> ei_deriv_reference(const std::array<double, 6>& x, double u,
                                         const relcon::EiNetworkParams& p) {
    const double ae = p.e_params.a, be = p.e_params.b, ee = p.e_params.epsilon;
    const double au = p.u_params.a, bu = p.u_params.b, eu = p.u_params.epsilon;
    const double ve = x[0], we = x[1], v1 = x[2], w1 = x[3], v2 = x[4], w2 = x[5];
    std::array<double, 6> d{};
    d[0] = ve - ve * ve * ve / 3.0 - we + p.k_e * (u - v1 + p.v_rest - ve);
    d[1] = ee * (ve - be * we + ae);
    d[2] = v1 - v1 * v1 * v1 / 3.0 - w1 + p.k_u * (ve - p.v_rest - v2 - v1);
    d[3] = eu * (v1 - bu * w1 + au);
    d[4] = v2 - v2 * v2 * v2 / 3.0 - w2 + p.k_u * (-v1 - v2);
    d[5] = eu * (v2 - bu * w2 + au);
    return d;
}

double lti_resonance_exact(double omega, double t) {
    return std::sin(omega * t) / (2.0 * omega * omega) - t * std::cos(omega * t) / (2.0 * omega);
}

} // namespace oracles
