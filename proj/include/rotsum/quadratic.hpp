#pragma once

// Periodic continued fractions of quadratic irrationals, unbounded convergent
// streams feeding the scanners, and slope estimation of the logarithmic
// growth constants C_p(alpha) with their closed forms for sqrt(2), sqrt(3).

#include "rotsum/cf.hpp"
#include "rotsum/moments.hpp"
#include "rotsum/pparam.hpp"
#include "rotsum/rational.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rotsum {

namespace detail {
inline BigInt floor_div(const BigInt& n, const BigInt& d) {
    BigInt q = n / d;
    if ((n % d != 0) && ((n < 0) != (d < 0))) --q;
    return q;
}
}  // namespace detail

// Exact element of Q(sqrt(D)): (u + v sqrt(D)) / w.
struct QuadExt {
    BigInt u, v, w, D;

    QuadExt(BigInt u_, BigInt v_, BigInt w_, BigInt D_)
        : u(std::move(u_)), v(std::move(v_)), w(std::move(w_)), D(std::move(D_)) {
        if (w == 0) throw std::domain_error("QuadExt: zero denominator");
        if (w < 0) {
            u = -u;
            v = -v;
            w = -w;
        }
    }

    bool is_zero() const { return u == 0 && v == 0; }

    QuadExt operator+(const QuadExt& o) const {
        check_field(o);
        return {u * o.w + o.u * w, v * o.w + o.v * w, w * o.w, D};
    }
    QuadExt operator-(const QuadExt& o) const {
        check_field(o);
        return {u * o.w - o.u * w, v * o.w - o.v * w, w * o.w, D};
    }
    QuadExt operator*(const QuadExt& o) const {
        check_field(o);
        return {u * o.u + v * o.v * D, u * o.v + v * o.u, w * o.w, D};
    }
    QuadExt operator/(const QuadExt& o) const {
        check_field(o);
        BigInt norm = o.u * o.u - o.v * o.v * D;  // rationalize by the conjugate
        if (norm == 0) throw std::domain_error("QuadExt: division by zero");
        QuadExt num{u * o.u - v * o.v * D, v * o.u - u * o.v, w, D};
        return {num.u * o.w, num.v * o.w, num.w * norm, D};
    }

    void check_field(const QuadExt& o) const {
        if (D != o.D) throw std::logic_error("QuadExt: mixed discriminants");
    }

    // |value| as a double, via the conjugate to avoid cancellation when the
    // value is tiny compared to its parts.
    double abs_double() const {
        double ud = u.convert_to<double>();
        double vd = v.convert_to<double>();
        double wd = w.convert_to<double>();
        double sd = std::sqrt(D.convert_to<double>());
        double direct = std::abs(ud + vd * sd);
        double conj = std::abs(ud - vd * sd);
        if (conj > 2.0 * direct) {  // cancellation in the direct form
            BigInt norm = u * u - v * v * D;
            return std::abs(norm.convert_to<double>()) / (conj * wd);
        }
        return direct / wd;
    }
};

// A quadratic surd (P + sqrt(D))/Q in normalized form: Q | D - P^2.
struct QuadraticSurd {
    BigInt P, Q, D;

    QuadraticSurd(BigInt P_, BigInt Q_, BigInt D_) : P(std::move(P_)), Q(std::move(Q_)), D(std::move(D_)) {
        if (Q == 0) throw std::domain_error("QuadraticSurd: zero denominator");
        if (D <= 0) throw std::domain_error("QuadraticSurd: D must be positive");
        BigInt s = boost::multiprecision::sqrt(D);
        if (s * s == D) throw std::domain_error("QuadraticSurd: D must not be a perfect square");
        if ((D - P * P) % Q != 0) {  // scale so the iteration stays integral
            BigInt aq = Q < 0 ? BigInt(-Q) : Q;
            P *= aq;
            D *= aq * aq;
            Q *= aq;
        }
    }

    double to_double() const {
        return (P.convert_to<double>() + std::sqrt(D.convert_to<double>())) / Q.convert_to<double>();
    }

    QuadExt as_quadext() const { return QuadExt(P, 1, Q, D); }
};

inline QuadraticSurd surd_sqrt2_minus_1() { return QuadraticSurd(-1, 1, 2); }
inline QuadraticSurd surd_sqrt3_minus_1() { return QuadraticSurd(-1, 1, 3); }
inline QuadraticSurd surd_golden() { return QuadraticSurd(1, 2, 5); }

struct PeriodicCF {
    std::vector<BigInt> preperiod;  // a_0 .. a_s
    std::vector<BigInt> period;     // a_{s+1} .. a_{s+m}, m even
    BigInt D;                       // discriminant of the source surd
};

// Standard P-Q iteration with cycle detection by state repetition; the period
// is doubled when its minimal length is odd.
inline PeriodicCF surd_cf(const QuadraticSurd& s) {
    BigInt sq = boost::multiprecision::sqrt(s.D);
    BigInt P = s.P, Q = s.Q;
    std::map<std::pair<std::string, std::string>, std::size_t> seen;
    std::vector<BigInt> quotients;
    std::size_t cycle_start = 0;
    for (;;) {
        auto key = std::make_pair(P.str(), Q.str());
        auto it = seen.find(key);
        if (it != seen.end()) {
            cycle_start = it->second;
            break;
        }
        seen.emplace(key, quotients.size());
        BigInt a = Q > 0 ? detail::floor_div(P + sq, Q) : detail::floor_div(P + sq + 1, Q);
        quotients.push_back(a);
        BigInt Pn = a * Q - P;
        BigInt Qn = (s.D - Pn * Pn) / Q;
        P = Pn;
        Q = Qn;
        if (quotients.size() > 100000) throw std::runtime_error("surd_cf: period not found");
    }
    PeriodicCF out;
    out.D = s.D;
    out.preperiod.assign(quotients.begin(), quotients.begin() + static_cast<std::ptrdiff_t>(cycle_start));
    out.period.assign(quotients.begin() + static_cast<std::ptrdiff_t>(cycle_start), quotients.end());
    if (out.preperiod.empty()) {  // purely periodic: keep a_0 explicit
        out.preperiod.push_back(out.period.front());
        std::rotate(out.period.begin(), out.period.begin() + 1, out.period.end());
    }
    if (out.period.size() % 2 != 0) {
        std::vector<BigInt> doubled = out.period;
        doubled.insert(doubled.end(), out.period.begin(), out.period.end());
        out.period = std::move(doubled);
    }
    return out;
}

// Unbounded stream of the partial quotients a_1, a_2, ... and convergents of
// the fractional part [0; a_1, a_2, ...] of a periodic continued fraction.
class ConvergentStream {
public:
    explicit ConvergentStream(const PeriodicCF& pcf) : pcf_(pcf) {
        if (pcf.preperiod.empty()) throw std::domain_error("ConvergentStream: missing integer part");
        p_.push_back(0);  // p_0
        q_.push_back(1);  // q_0
        pm1_ = 1;
        qm1_ = 0;
    }

    // Quotient a_k, 1-based.
    const BigInt& quotient(std::size_t k) {
        extend(k);
        return at(k);
    }

    // Convergent p_k/q_k of the fractional part, k >= 0.
    const BigInt& p(std::size_t k) {
        extend(k);
        return p_[k];
    }
    const BigInt& q(std::size_t k) {
        extend(k);
        return q_[k];
    }

    Rational convergent(std::size_t k) {
        extend(k);
        return Rational(p_[k], q_[k]);
    }

    // |q_k alpha - p_k| for the fractional part alpha, as a double.
    double delta(std::size_t k) {
        extend(k);
        const QuadExt& alpha = frac_value();
        QuadExt v = alpha * QuadExt(q_[k], 0, 1, alpha.D) - QuadExt(p_[k], 0, 1, alpha.D);
        return v.abs_double();
    }

    // Exact fractional part [0; a_1, a_2, ...] as an element of a real
    // quadratic field. The purely periodic tail y = [overline(period)] is the
    // larger root of C y^2 + (D0 - A) y - B = 0 read off the period's
    // convergent matrix; the preperiod quotients are folded back on top.
    const QuadExt& frac_value() {
        if (!frac_) {
            BigInt A = 1, B = 0, C = 0, D0 = 1;
            for (const BigInt& a : pcf_.period) {  // right-multiply [[a,1],[1,0]]
                BigInt A2 = A * a + B, C2 = C * a + D0;
                B = A;
                D0 = C;
                A = A2;
                C = C2;
            }
            BigInt cb = D0 - A;
            BigInt disc = cb * cb + 4 * C * B;
            QuadExt y(-cb, 1, 2 * C, disc);
            for (std::size_t i = pcf_.preperiod.size(); i-- > 1;) {
                y = QuadExt(pcf_.preperiod[i], 0, 1, disc) + QuadExt(1, 0, 1, disc) / y;
            }
            frac_.emplace(QuadExt(1, 0, 1, disc) / y);
        }
        return *frac_;
    }

private:
    const BigInt& at(std::size_t k) {
        // quotient a_k (k >= 1) of [a_0; a_1, a_2, ...]
        std::size_t pre = pcf_.preperiod.size();
        if (k < pre) return pcf_.preperiod[k];
        return pcf_.period[(k - pre) % pcf_.period.size()];
    }

    void extend(std::size_t k) {
        while (q_.size() <= k) {
            std::size_t i = q_.size();
            const BigInt& a = at(i);
            BigInt pi = a * p_.back() + pm1_;
            BigInt qi = a * q_.back() + qm1_;
            pm1_ = p_.back();
            qm1_ = q_.back();
            p_.push_back(std::move(pi));
            q_.push_back(std::move(qi));
        }
    }

    PeriodicCF pcf_;
    std::vector<BigInt> p_, q_;
    BigInt pm1_, qm1_;
    std::optional<QuadExt> frac_;
};

struct CpEstimate {
    double slope = 0.0;
    double ci_halfwidth = 0.0;
    std::vector<std::pair<double, double>> points;  // (log M, log J_{p,M})
    std::int64_t base_q = 0;                        // denominator of the scanned convergent
};

// Least-squares slope of log J_{p,M}(alpha) against log M, scanned in one
// pass against the first convergent with q_k > 2 M_max. Checkpoints sit at
// the convergent denominators q_k spaced by one full (even) period: the
// extremal functionals are staircases in log M that only step near the q_k,
// so sampling at any other rhythm (dyadic M included) leaves a phase bias in
// the slope of several percent, while in-phase sampling makes the O(1)
// defect an additive constant the intercept absorbs. The two smallest
// checkpoints are dropped (transient O(1) dominates there).
inline CpEstimate estimate_cp(const PeriodicCF& pcf, const PParam& p, std::int64_t M_max) {
    if (M_max < 1000) throw std::domain_error("estimate_cp: M_max must be >= 1000");
    ConvergentStream stream(pcf);
    std::size_t k = 1;
    while (stream.q(k) <= BigInt(2) * M_max) ++k;
    Rational base = stream.convergent(k);
    if (base.den() > BigInt(4000000000000000000LL) ||
        static_cast<double>(M_max) * (base.den().convert_to<double>() + 1.0) >= 8.0e18)
        throw std::domain_error("estimate_cp: convergent denominator exceeds the int64 scan range");
    const std::int64_t q = base.den().convert_to<std::int64_t>();
    const std::int64_t a = base.num().convert_to<std::int64_t>();

    const std::size_t m = pcf.period.size();
    std::size_t k0 = pcf.preperiod.size() - 1 + m;  // first full-period convergent
    if (k0 < 2) k0 += m;
    std::vector<std::int64_t> checkpoints;
    for (std::size_t kk = k0; stream.q(kk) <= BigInt(M_max); kk += m)
        checkpoints.push_back(stream.q(kk).convert_to<std::int64_t>());
    if (checkpoints.size() < 4) throw std::domain_error("estimate_cp: horizon too small for a slope fit");

    const bool finite = p.is_finite();
    const double pv = finite ? p.value() : 0.0;
    LogSumExp acc;
    if (finite) acc.add(0.0);
    std::int64_t res = 0;
    std::int64_t num = 0;  // 2 q S_n
    std::int64_t best_hi = 0, best_lo = 0;
    const double inv2q = 0.5 / static_cast<double>(q);
    CpEstimate out;
    out.base_q = q;
    std::size_t next = 0;
    for (std::int64_t n = 1; next < checkpoints.size(); ++n) {
        while (next < checkpoints.size() && n == checkpoints[next]) {
            double y;
            if (finite) {
                y = acc.value() / pv;
            } else {
                y = static_cast<double>(p.positive() ? best_hi : best_lo) * inv2q;
            }
            out.points.emplace_back(std::log(static_cast<double>(checkpoints[next])), y);
            ++next;
        }
        if (next >= checkpoints.size()) break;
        res += a;
        if (res >= q) res -= q;
        num += 2 * res - q;
        if (num > best_hi) best_hi = num;
        if (num < best_lo) best_lo = num;
        if (finite) acc.add(pv * static_cast<double>(num) * inv2q);
    }

    // OLS on the points excluding the two smallest M.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t n0 = 2, n = out.points.size() - n0;
    for (std::size_t i = n0; i < out.points.size(); ++i) {
        sx += out.points[i].first;
        sy += out.points[i].second;
        sxx += out.points[i].first * out.points[i].first;
        sxy += out.points[i].first * out.points[i].second;
    }
    double denom = static_cast<double>(n) * sxx - sx * sx;
    out.slope = (static_cast<double>(n) * sxy - sx * sy) / denom;
    double intercept = (sy - out.slope * sx) / static_cast<double>(n);
    double ss = 0, e_lo = 0, e_hi = 0;
    for (std::size_t i = n0; i < out.points.size(); ++i) {
        double e = out.points[i].second - (intercept + out.slope * out.points[i].first);
        ss += e * e;
        e_lo = std::min(e_lo, e);
        e_hi = std::max(e_hi, e);
    }
    double var_slope = n > 2 ? (ss / static_cast<double>(n - 2)) * (static_cast<double>(n) / denom) : 0.0;
    // The O(1) defect drifts slowly across the window; scatter alone would
    // understate the slope uncertainty, so the residual range over the fitted
    // span is added as a bias term.
    double x_range = out.points.back().first - out.points[n0].first;
    out.ci_halfwidth = 2.0 * std::sqrt(var_slope) + (e_hi - e_lo) / std::max(x_range, 1.0);
    return out;
}

// Closed forms of C_{+-inf} for sqrt(2) and sqrt(3).
inline double known_cp(const std::string& name, const PParam& p) {
    if (p.is_finite()) throw std::domain_error("known_cp: closed forms exist only for p = +-inf");
    if (name == "sqrt2") {
        double c = 1.0 / (8.0 * std::log(1.0 + std::sqrt(2.0)));
        return p.positive() ? c : -c;
    }
    if (name == "sqrt3") {
        double l = std::log(2.0 + std::sqrt(3.0));
        return p.positive() ? 1.0 / (4.0 * l) : -1.0 / (12.0 * l);
    }
    throw std::domain_error("known_cp: unsupported name '" + name + "'");
}

// h_p along the convergents p_k/q_k of the fractional part, k = 2..k_max.
inline std::vector<std::pair<int, double>> hp_at_convergents(const PeriodicCF& pcf, const PParam& p, int k_max) {
    if (k_max < 2) throw std::domain_error("hp_at_convergents: k_max must be >= 2");
    ConvergentStream stream(pcf);
    std::vector<std::pair<int, double>> out;
    out.reserve(static_cast<std::size_t>(k_max - 1));
    for (int k = 2; k <= k_max; ++k) {
        out.emplace_back(k, hp(stream.convergent(static_cast<std::size_t>(k)), p));
    }
    return out;
}

}  // namespace rotsum
