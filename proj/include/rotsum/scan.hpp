#pragma once

// Streaming prefix statistics of the Birkhoff sum S_N over 0 <= N < M:
// running extrema with first attaining indices, and shift-stabilized
// log-sum-exp accumulators of e^{p S_N} for a list of finite p.
//
// Rational sources scan exactly: the residue n*a mod q is carried as an
// integer, so S_N = (2 sum res - n q)/(2q) has no rounding anywhere. The
// int64 kernel is used whenever the scaled sums provably fit; otherwise the
// same recurrence runs on arbitrary-precision integers. Non-rational sources
// use a compensated floating pass.

#include "rotsum/ostrowski.hpp"
#include "rotsum/pparam.hpp"
#include "rotsum/rational.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace rotsum {

// Online log(sum exp(x_i)) with a running shift, overflow-safe for |x| up to
// ~1e8 per term.
class LogSumExp {
public:
    void add(double x) {
        if (x <= shift_) {
            sum_ += std::exp(x - shift_);
        } else {
            sum_ = sum_ * std::exp(shift_ - x) + 1.0;
            shift_ = x;
        }
    }
    double value() const {
        if (sum_ == 0.0) return -std::numeric_limits<double>::infinity();
        return shift_ + std::log(sum_);
    }

private:
    double shift_ = -std::numeric_limits<double>::infinity();
    double sum_ = 0.0;
};

struct BirkhoffScan {
    std::int64_t horizon = 0;
    bool exact = false;            // extrema below are exact rationals
    Rational max_exact, min_exact; // valid when exact
    double max_value = 0.0, min_value = 0.0;
    std::int64_t argmax = 0, argmin = 0;  // first attaining N
    std::vector<std::pair<double, double>> lse;  // (p, log sum_{N<M} e^{p S_N})

    double lse_at(double p) const {
        for (const auto& [pp, v] : lse)
            if (pp == p) return v;
        throw std::logic_error("BirkhoffScan: p was not part of the scan");
    }
};

namespace detail {

inline double to_dbl(std::int64_t v) { return static_cast<double>(v); }
inline double to_dbl(const BigInt& v) { return v.convert_to<double>(); }

template <typename Int>
BirkhoffScan scan_rational_impl(const Rational& r, std::int64_t M, const std::vector<double>& ps, int drift) {
    const Int a = static_cast<Int>(r.num().template convert_to<Int>());
    const Int q = static_cast<Int>(r.den().template convert_to<Int>());
    const double inv2q = 1.0 / (2.0 * r.den().convert_to<double>());

    BirkhoffScan out;
    out.horizon = M;
    out.exact = true;
    std::vector<LogSumExp> acc(ps.size());

    Int res = 0;       // (n a) mod q
    Int num = 0;       // 2 q S_n + drift * n
    Int best_hi = 0, best_lo = 0;
    std::int64_t arg_hi = 0, arg_lo = 0;
    for (std::size_t i = 0; i < ps.size(); ++i) acc[i].add(0.0);
    for (std::int64_t n = 1; n < M; ++n) {
        res += a;
        if (res >= q) res -= q;
        num += 2 * res - q + drift;
        if (num > best_hi) {
            best_hi = num;
            arg_hi = n;
        } else if (num < best_lo) {
            best_lo = num;
            arg_lo = n;
        }
        if (!ps.empty()) {
            double s = to_dbl(num) * inv2q;
            for (std::size_t i = 0; i < ps.size(); ++i) acc[i].add(ps[i] * s);
        }
    }
    BigInt q2 = 2 * r.den();
    out.max_exact = Rational(BigInt(best_hi), q2);
    out.min_exact = Rational(BigInt(best_lo), q2);
    out.max_value = out.max_exact.to_double();
    out.min_value = out.min_exact.to_double();
    out.argmax = arg_hi;
    out.argmin = arg_lo;
    out.lse.reserve(ps.size());
    for (std::size_t i = 0; i < ps.size(); ++i) out.lse.emplace_back(ps[i], acc[i].value());
    return out;
}

inline void two_sum(double x, double y, double& s, double& e) {
    s = x + y;
    double z = s - x;
    e = (x - (s - z)) + (y - z);
}

// Reduce a canonical double-double in (-1, 2) into [0, 1). The pair
// (1.0, -tiny) represents a value just below 1 and must not wrap; adding 1
// to a tiny negative head would round the correction away, so that branch
// renormalizes through two_sum.
inline void dd_mod1(double& hi, double& lo) {
    if (hi > 1.0 || (hi == 1.0 && lo >= 0.0)) {
        hi -= 1.0;  // exact for hi in [1, 2)
    } else if (hi < 0.0 || (hi == 0.0 && lo < 0.0)) {
        double s, e;
        two_sum(hi, 1.0, s, e);
        hi = s;
        lo += e;
    }
}

}  // namespace detail

// Exact scan of a rational source. drift in {-1,0,+1} scans S_N + drift*N/(2q)
// instead of S_N (used by the one-sided limit values, where the drifted
// extrema stay rational).
inline BirkhoffScan prefix_scan(const Rational& r, std::int64_t M, const std::vector<double>& ps = {},
                                int drift = 0) {
    if (M < 1) throw std::domain_error("prefix_scan: M must be >= 1");
    if (r.sign() < 0 || r >= Rational(1)) throw std::domain_error("prefix_scan: source must be in [0,1)");
    const double qd = r.den().convert_to<double>();
    // int64 bounds: residue steps stay below 2q and the scaled sum below
    // M (q + 1), so both must clear 2^63 with margin.
    if (qd <= 2.0e18 && static_cast<double>(M) * (qd + 1.0) < 8.0e18) {
        return detail::scan_rational_impl<std::int64_t>(r, M, ps, drift);
    }
    return detail::scan_rational_impl<BigInt>(r, M, ps, drift);
}

// Compensated floating scan of an arbitrary real source alpha = hi + lo,
// 0 < alpha < 1. Used for irrational sources given only as doubles and as an
// independent oracle against the exact path.
inline BirkhoffScan prefix_scan_float(double alpha_hi, double alpha_lo, std::int64_t M,
                                      const std::vector<double>& ps = {}) {
    if (M < 1) throw std::domain_error("prefix_scan_float: M must be >= 1");
    if (!(alpha_hi > 0.0 && alpha_hi < 1.0)) throw std::domain_error("prefix_scan_float: alpha must be in (0,1)");
    BirkhoffScan out;
    out.horizon = M;
    out.exact = false;
    std::vector<LogSumExp> acc(ps.size());

    double xhi = 0.0, xlo = 0.0;  // {n alpha} as a double-double
    double s = 0.0, comp = 0.0;   // Neumaier-compensated S_n
    double best_hi = 0.0, best_lo = 0.0;
    std::int64_t arg_hi = 0, arg_lo = 0;
    for (std::size_t i = 0; i < ps.size(); ++i) acc[i].add(0.0);
    for (std::int64_t n = 1; n < M; ++n) {
        double sum, err;
        detail::two_sum(xhi, alpha_hi, sum, err);
        err += xlo + alpha_lo;
        if (sum >= 1.0) sum -= 1.0;  // exact: sum in [1,2)
        detail::two_sum(sum, err, xhi, xlo);
        detail::dd_mod1(xhi, xlo);
        double term = xhi - 0.5;
        double t, e;
        detail::two_sum(s, term, t, e);
        comp += e + xlo;
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

}  // namespace rotsum
