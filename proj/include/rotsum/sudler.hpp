#pragma once

// Sudler-product analogues: the log-product Birkhoff sum
// S~_N(r) = sum_{n<=N} log|2 sin(pi n r)|, the moment functionals J~_p, the
// first-iterate ratio h~_p, and the figure-eight-knot volume constant with
// its growth-law residual at 1/q.
//
// Angles are always reduced through the exact residue n*a mod q before the
// sine call; accumulated floating angles would corrupt the log terms near the
// singularities once q is large.
//
// Index ranges: the moment sum for finite p runs over N = 0..q-1, matching
// the extrema range. This is the range under which J~_{-p}(r) J~_p(r) = q
// holds exactly and under which J~_2(1/q)^2 is the Kashaev invariant.

#include "rotsum/cf.hpp"
#include "rotsum/pparam.hpp"
#include "rotsum/quadrature.hpp"
#include "rotsum/scan.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace rotsum {

struct SudlerScan {
    std::int64_t horizon = 0;
    double max_value = 0.0, min_value = 0.0;
    std::int64_t argmax = 0, argmin = 0;
    std::vector<std::pair<double, double>> lse;

    double lse_at(double p) const {
        for (const auto& [pp, v] : lse)
            if (pp == p) return v;
        throw std::logic_error("SudlerScan: p was not part of the scan");
    }
};

// Streaming prefix statistics of S~_N over 0 <= N < M for a rational source;
// requires M <= q so no term is singular.
inline SudlerScan sudler_scan(const Rational& r, std::int64_t M, const std::vector<double>& ps = {}) {
    if (M < 1) throw std::domain_error("sudler_scan: M must be >= 1");
    if (r.sign() <= 0 || r >= Rational(1)) throw std::domain_error("sudler_scan: source must be in (0,1)");
    if (BigInt(M) > r.den()) throw std::domain_error("sudler_scan: M exceeds the denominator (singular term)");
    if (r.den() > BigInt(4000000000000000000LL)) throw std::domain_error("sudler_scan: denominator too large");

    const std::int64_t a = r.num().convert_to<std::int64_t>();
    const std::int64_t q = r.den().convert_to<std::int64_t>();
    const double invq = 1.0 / static_cast<double>(q);

    SudlerScan out;
    out.horizon = M;
    std::vector<LogSumExp> acc(ps.size());
    for (std::size_t i = 0; i < ps.size(); ++i) acc[i].add(0.0);

    std::int64_t res = 0;
    double s = 0.0, comp = 0.0;  // Neumaier-compensated running sum
    double best_hi = 0.0, best_lo = 0.0;
    std::int64_t arg_hi = 0, arg_lo = 0;
    for (std::int64_t n = 1; n < M; ++n) {
        res += a;
        if (res >= q) res -= q;
        double term = std::log(2.0 * std::sin(std::numbers::pi * static_cast<double>(res) * invq));
        double t, e;
        detail::two_sum(s, term, t, e);
        comp += e;
        s = t;
        double sn = s + comp;
        if (sn > best_hi) {
            best_hi = sn;
            arg_hi = n;
        } else if (sn < best_lo) {
            best_lo = sn;
            arg_lo = n;
        }
        for (std::size_t i = 0; i < ps.size(); ++i) acc[i].add(ps[i] * sn);
    }
    out.max_value = best_hi;
    out.min_value = best_lo;
    out.argmax = arg_hi;
    out.argmin = arg_lo;
    out.lse.reserve(ps.size());
    for (std::size_t i = 0; i < ps.size(); ++i) out.lse.emplace_back(ps[i], acc[i].value());
    return out;
}

// S~_N(r) for a rational source; N < q.
inline double sudler_log(const Rational& r, std::int64_t N) {
    if (N < 0) throw std::domain_error("sudler_log: N must be >= 0");
    if (N == 0) return 0.0;
    if (r.sign() <= 0 || r >= Rational(1)) throw std::domain_error("sudler_log: source must be in (0,1)");
    if (BigInt(N) >= r.den()) throw std::domain_error("sudler_log: N >= q hits a singular term");
    const std::int64_t a = r.num().convert_to<std::int64_t>();
    const std::int64_t q = r.den().convert_to<std::int64_t>();
    std::int64_t res = 0;
    double s = 0.0, comp = 0.0;
    for (std::int64_t n = 1; n <= N; ++n) {
        res += a;
        if (res >= q) res -= q;
        double term = std::log(2.0 * std::sin(std::numbers::pi * static_cast<double>(res) / static_cast<double>(q)));
        double t, e;
        detail::two_sum(s, term, t, e);
        comp += e;
        s = t;
    }
    return s + comp;
}

// S~_N of a real source alpha = hi + lo, with the angle carried as an exact
// double-double residue.
inline double sudler_log_float(double alpha_hi, double alpha_lo, std::int64_t N) {
    if (N < 0) throw std::domain_error("sudler_log_float: N must be >= 0");
    double xhi = 0.0, xlo = 0.0;
    double s = 0.0, comp = 0.0;
    for (std::int64_t n = 1; n <= N; ++n) {
        double sum, err;
        detail::two_sum(xhi, alpha_hi, sum, err);
        err += xlo + alpha_lo;
        if (sum >= 1.0) sum -= 1.0;
        detail::two_sum(sum, err, xhi, xlo);
        detail::dd_mod1(xhi, xlo);
        double term = std::log(std::abs(2.0 * std::sin(std::numbers::pi * xhi)));
        double t, e;
        detail::two_sum(s, term, t, e);
        comp += e;
        s = t;
    }
    return s + comp;
}

inline double log_jtilde_p_m(const Rational& r, const PParam& p, std::int64_t M) {
    if (M < 1) throw std::domain_error("log_jtilde_p_m: M must be >= 1");
    if (r.sign() < 0 || r >= Rational(1)) throw std::domain_error("log_jtilde_p_m: source must be in [0,1)");
    if (r.is_zero()) {
        if (M > 1) throw std::domain_error("log_jtilde_p_m: M exceeds the denominator (singular term)");
        return 0.0;
    }
    if (!p.is_finite()) {
        SudlerScan scan = sudler_scan(r, M);
        return p.positive() ? scan.max_value : scan.min_value;
    }
    SudlerScan scan = sudler_scan(r, M, {p.value()});
    return scan.lse_at(p.value()) / p.value();
}

// log J~_p(r) over the full range N = 0..q-1. log J~_p(0) = 0.
inline double log_jtilde_p(const Rational& r, const PParam& p) {
    if (r.sign() < 0 || r >= Rational(1)) throw std::domain_error("log_jtilde_p: r must be in [0,1)");
    if (r.is_zero()) return 0.0;
    if (r.den() > BigInt(4000000000000000000LL))
        throw std::domain_error("log_jtilde_p: denominator exceeds the scannable horizon");
    return log_jtilde_p_m(r, p, r.den().convert_to<std::int64_t>());
}

inline double log_jtilde_p_m_float(double alpha_hi, double alpha_lo, const PParam& p, std::int64_t M) {
    if (M < 1) throw std::domain_error("log_jtilde_p_m_float: M must be >= 1");
    double xhi = 0.0, xlo = 0.0;
    double s = 0.0, comp = 0.0;
    LogSumExp acc;
    double best_hi = 0.0, best_lo = 0.0;
    const bool finite = p.is_finite();
    const double pv = finite ? p.value() : 0.0;
    if (finite) acc.add(0.0);
    for (std::int64_t n = 1; n < M; ++n) {
        double sum, err;
        detail::two_sum(xhi, alpha_hi, sum, err);
        err += xlo + alpha_lo;
        if (sum >= 1.0) sum -= 1.0;
        detail::two_sum(sum, err, xhi, xlo);
        detail::dd_mod1(xhi, xlo);
        double term = std::log(std::abs(2.0 * std::sin(std::numbers::pi * xhi)));
        double t, e;
        detail::two_sum(s, term, t, e);
        comp += e;
        s = t;
        double sn = s + comp;
        if (finite) {
            acc.add(pv * sn);
        } else {
            if (sn > best_hi) best_hi = sn;
            if (sn < best_lo) best_lo = sn;
        }
    }
    if (finite) return acc.value() / pv;
    return p.positive() ? best_hi : best_lo;
}

// h~_p(r) = log J~_p(r) - log J~_p(T r); first iterate of the Gauss map,
// in contrast with the second iterate in h_p.
inline double htilde_p(const Rational& r, const PParam& p) {
    if (r.is_zero()) return 0.0;
    return log_jtilde_p(r, p) - log_jtilde_p(gauss_map(r), p);
}

// Hyperbolic volume of the figure-eight knot complement,
// 4 pi int_0^{5/6} log|2 sin(pi x)| dx = 2.02988...
// The integrand has a log singularity at 0; the head [0, delta] is integrated
// from the series of log(sin(pi x)/(pi x)), the rest by adaptive quadrature.
inline double vol41() {
    static const double value = [] {
        const double pi = std::numbers::pi;
        const double delta = 1e-3;
        double head = delta * (std::log(2.0 * pi * delta) - 1.0) - pi * pi * delta * delta * delta / 18.0 -
                      std::pow(pi, 4) * std::pow(delta, 5) / 900.0;
        double tail = integrate([&](double x) { return std::log(2.0 * std::sin(pi * x)); }, delta, 5.0 / 6.0, 1e-13);
        return 4.0 * pi * (head + tail);
    }();
    return value;
}

// log J~_2(1/q) - Vol(4_1)/(4 pi) q - (3/4) log q; approaches -(1/8) log 3.
inline double volume_residual(std::int64_t q) {
    if (q < 2) throw std::domain_error("volume_residual: q must be >= 2");
    double lj = log_jtilde_p(Rational(1, q), PParam::finite(2.0));
    return lj - vol41() / (4.0 * std::numbers::pi) * static_cast<double>(q) - 0.75 * std::log(static_cast<double>(q));
}

}  // namespace rotsum
