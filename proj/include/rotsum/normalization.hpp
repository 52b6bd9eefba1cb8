#pragma once

// Centering and scaling constants of the limit laws. The scale arguments must
// be >= 16 wherever log log appears, so every constant is finite and the
// scales positive; enforced here once.

#include "rotsum/pparam.hpp"
#include "rotsum/sudler.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace rotsum {

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

namespace detail {
inline void require_scale(double s, const char* who) {
    if (!(s >= 16.0)) throw std::domain_error(std::string(who) + ": scale argument must be >= 16");
}
}  // namespace detail

// sigma = (3/(8 pi)) log(scale); used with scale = M, Q or per-sample q.
inline double sigma_scale(double scale) {
    if (!(scale >= 2.0)) throw std::domain_error("sigma_scale: scale must be >= 2");
    return 3.0 / (8.0 * std::numbers::pi) * std::log(scale);
}

// E_{p,scale} = sgn(p) (3/(4 pi^2)) log(s) log log(s) + D_p log(s).
inline double e_p_scale(double scale, const PParam& p, double d_p) {
    detail::require_scale(scale, "e_p_scale");
    double l = std::log(scale);
    return p.sgn() * 3.0 / (4.0 * std::numbers::pi * std::numbers::pi) * l * std::log(l) + d_p * l;
}

// B_Q = (3/(4 pi^2)) log Q log log Q - (3/(4 pi^2)) (gamma + log(pi/3)) log Q;
// the centering of the constant-free partial-quotient statistic.
inline double b_q(double Q) {
    detail::require_scale(Q, "b_q");
    double l = std::log(Q);
    double c = 3.0 / (4.0 * std::numbers::pi * std::numbers::pi);
    return c * l * std::log(l) - c * (kEulerGamma + std::log(std::numbers::pi / 3.0)) * l;
}

// B_M = 2 E_M + (4/pi)(log 2) sigma_M, the centering of the range diameter.
inline double b_m(double M, double d_inf) {
    return 2.0 * e_p_scale(M, PParam::plus_inf(), d_inf) + 4.0 / std::numbers::pi * std::log(2.0) * sigma_scale(M);
}

// Sudler-family constants: sigma~ = (3 Vol(4_1)/(2 pi^2)) log M and
// E~_{p,M} = (3 Vol(4_1)/pi^3) log M log log M + D~_p log M.
inline double sigma_tilde_scale(double scale) {
    if (!(scale >= 2.0)) throw std::domain_error("sigma_tilde_scale: scale must be >= 2");
    return 3.0 * vol41() / (2.0 * std::numbers::pi * std::numbers::pi) * std::log(scale);
}

inline double e_tilde_p_scale(double scale, double d_tilde_p) {
    detail::require_scale(scale, "e_tilde_p_scale");
    double l = std::log(scale);
    return 3.0 * vol41() / std::pow(std::numbers::pi, 3) * l * std::log(l) + d_tilde_p * l;
}

struct NormalizationParams {
    double E = 0.0;
    double sigma = 0.0;
    double B = 0.0;
    std::string context;  // "farey(Q)" or "real(M)"
    std::string p;
};

}  // namespace rotsum
