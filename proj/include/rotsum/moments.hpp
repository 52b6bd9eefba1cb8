#pragma once

// The exponential-moment functionals of the Birkhoff sum S_N at rationals:
//
//   log J_p(r)  = (1/p) log sum_{N<q} e^{p S_N(r)}     (finite p != 0)
//   log J_inf   = max_{N<q} S_N,  log J_-inf = min_{N<q} S_N
//   h_p(r)      = log J_p(r) - log J_p(T^2 r)
//
// together with g_p, the continued-fraction main term of the h_p asymptotics,
// and the one-sided limit values W_p. For p = +-inf everything stays in exact
// rational arithmetic; finite p goes through shift-stabilized log-sum-exp
// (p S_N reaches +-q|p|/8, so direct exponentiation is never used).

#include "rotsum/cf.hpp"
#include "rotsum/pparam.hpp"
#include "rotsum/scan.hpp"

#include <cmath>
#include <stdexcept>

namespace rotsum {

namespace detail {
// The full-period horizon q as an int64, for functionals that scan all of
// 0 <= N < q.
inline std::int64_t full_horizon(const Rational& r) {
    if (r.den() > BigInt(4000000000000000000LL))
        throw std::domain_error("denominator exceeds the scannable horizon");
    return r.den().convert_to<std::int64_t>();
}
}  // namespace detail

// Exact extremum of S_N(r) over 0 <= N < q.
inline Rational log_jp_exact(const Rational& r, bool maximum) {
    if (r.sign() < 0 || r >= Rational(1)) throw std::domain_error("log_jp_exact: r must be in [0,1)");
    if (r.is_zero()) return Rational(0);
    BirkhoffScan scan = prefix_scan(r, detail::full_horizon(r));
    return maximum ? scan.max_exact : scan.min_exact;
}

inline double log_jp(const Rational& r, const PParam& p) {
    if (r.sign() < 0 || r >= Rational(1)) throw std::domain_error("log_jp: r must be in [0,1)");
    if (r.is_zero()) return 0.0;
    if (!p.is_finite()) return log_jp_exact(r, p.positive()).to_double();
    BirkhoffScan scan = prefix_scan(r, detail::full_horizon(r), {p.value()});
    return scan.lse_at(p.value()) / p.value();
}

// Horizon-M variant on a rational source (any M >= 1).
inline double log_jp_m(const Rational& r, const PParam& p, std::int64_t M) {
    if (M < 1) throw std::domain_error("log_jp_m: M must be >= 1");
    if (r.sign() < 0 || r >= Rational(1)) throw std::domain_error("log_jp_m: source must be in [0,1)");
    if (r.is_zero()) return 0.0;
    if (!p.is_finite()) {
        BirkhoffScan scan = prefix_scan(r, M);
        return p.positive() ? scan.max_exact.to_double() : scan.min_exact.to_double();
    }
    BirkhoffScan scan = prefix_scan(r, M, {p.value()});
    return scan.lse_at(p.value()) / p.value();
}

// Horizon-M variant on a real source given as a (hi, lo) double pair.
inline double log_jp_m_float(double alpha_hi, double alpha_lo, const PParam& p, std::int64_t M) {
    if (M < 1) throw std::domain_error("log_jp_m_float: M must be >= 1");
    if (!p.is_finite()) {
        BirkhoffScan scan = prefix_scan_float(alpha_hi, alpha_lo, M);
        return p.positive() ? scan.max_value : scan.min_value;
    }
    BirkhoffScan scan = prefix_scan_float(alpha_hi, alpha_lo, M, {p.value()});
    return scan.lse_at(p.value()) / p.value();
}

// Exact h_{+-inf}(r) = extremum(r) - extremum(T^2 r).
inline Rational hp_exact(const Rational& r, bool maximum) {
    if (r.is_zero()) return Rational(0);
    return log_jp_exact(r, maximum) - log_jp_exact(gauss_map2(r), maximum);
}

inline double hp(const Rational& r, const PParam& p) {
    if (r.is_zero()) return 0.0;
    if (!p.is_finite()) return hp_exact(r, p.positive()).to_double();
    return log_jp(r, p) - log_jp(gauss_map2(r), p);
}

// h_p minus its continued-fraction main term; almost everywhere continuous.
inline double gp(const Rational& r, const PParam& p) {
    if (r.is_zero()) throw std::domain_error("gp: r must be nonzero");
    double h = hp(r, p);
    if (p.positive()) {
        Rational tr = gauss_map(r);
        if (tr.is_zero()) return h;
        double a2floor = (Rational(1) / tr).floor().convert_to<double>();
        return h - a2floor / 8.0;
    }
    double a1floor = (Rational(1) / r).floor().convert_to<double>();
    return h + a1floor / 8.0;
}

// Main term of the h_p asymptotics in terms of the partial quotients:
// sgn(p) a_{eps_p}/8 + log(a_{eps_p})/(2p), with a_2 = 1 when L = 1.
inline double main_term(const Rational& r, const PParam& p) {
    if (r.is_zero()) throw std::domain_error("main_term: r must be nonzero");
    CFExpansion cf = cf_expand(r);
    double a;
    if (p.positive()) {
        a = cf.length() >= 2 ? cf.quotients[1].convert_to<double>() : 1.0;
        return a / 8.0 + p.half_reciprocal() * std::log(a);
    }
    a = cf.quotients[0].convert_to<double>();
    return -a / 8.0 + p.half_reciprocal() * std::log(a);
}

// The same asymptotics written through Tr and r (the form the figure
// residuals subtract): 1/(8Tr) + log(1/Tr)/(2p) for p > 0, vanishing when
// Tr = 0, and -1/(8r) + log(1/r)/(2p) for p < 0.
inline double asymptotic_term(const Rational& r, const PParam& p) {
    if (r.is_zero()) throw std::domain_error("asymptotic_term: r must be nonzero");
    if (p.positive()) {
        Rational tr = gauss_map(r);
        if (tr.is_zero()) return 0.0;
        double x = tr.to_double();
        return 1.0 / (8.0 * x) + p.half_reciprocal() * std::log(1.0 / x);
    }
    double x = r.to_double();
    return -1.0 / (8.0 * x) + p.half_reciprocal() * std::log(1.0 / x);
}

namespace detail {

// Boundary correction of the one-sided limit values:
// a_1 (sgn(p) 2a - 1) / (8 q q'), where a_1 is the first partial quotient of
// the expansion of a/q whose length parity matches the approach side (odd for
// p > 0, even for p < 0). For a >= 2 this equals floor(q/a) under either
// expansion; at a = 1 with p < 0 the even-length form [0; q-1, 1] applies, so
// the factor is q - 1 rather than floor(q/a) = q. The one-sided limits
// themselves settle this: h_{-inf} at (1/2)+ tends to -3/16 = the a_1 = 1
// value, and at (1/3)+ to -1/4 = the a_1 = 2 value.
inline Rational wp_correction(const Rational& r, const Rational& r2, int sgn) {
    CFExpansion cf = cf_expand(r);
    bool want_odd = sgn > 0;
    if ((cf.length() % 2 == 1) != want_odd) cf = cf_alternate(cf);
    BigInt lead = cf.quotients[0];
    BigInt coeff = lead * (BigInt(sgn) * 2 * r.num() - 1);
    return Rational(coeff, 8 * r.den() * r2.den());
}

}  // namespace detail

// Exact W_{+-inf}(a/q): drifted extrema of S_N -+ N/(2q) at a/q and at
// T^2(a/q), plus the boundary correction.
inline Rational wp_exact(const Rational& r, bool maximum) {
    if (r.sign() <= 0 || r >= Rational(1)) throw std::domain_error("wp_exact: r must be in (0,1)");
    if (maximum && r.num() == 1) throw std::domain_error("wp_exact: left limit is +inf at 1/q for p > 0");
    Rational r2 = gauss_map2(r);
    int drift = maximum ? -1 : +1;
    BirkhoffScan sa = prefix_scan(r, detail::full_horizon(r), {}, drift);
    BirkhoffScan sb = prefix_scan(r2, detail::full_horizon(r2), {}, drift);
    Rational main = maximum ? sa.max_exact - sb.max_exact : sa.min_exact - sb.min_exact;
    return main + detail::wp_correction(r, r2, maximum ? 1 : -1);
}

inline double wp(const Rational& r, const PParam& p) {
    if (!p.is_finite()) return wp_exact(r, p.positive()).to_double();
    if (r.sign() <= 0 || r >= Rational(1)) throw std::domain_error("wp: r must be in (0,1)");
    if (p.positive() && r.num() == 1) throw std::domain_error("wp: left limit is +inf at 1/q for p > 0");
    Rational r2 = gauss_map2(r);
    int drift = -p.sgn();
    BirkhoffScan sa = prefix_scan(r, detail::full_horizon(r), {p.value()}, drift);
    BirkhoffScan sb = prefix_scan(r2, detail::full_horizon(r2), {p.value()}, drift);
    double main = (sa.lse_at(p.value()) - sb.lse_at(p.value())) / p.value();
    return main + detail::wp_correction(r, r2, p.sgn()).to_double();
}

}  // namespace rotsum
