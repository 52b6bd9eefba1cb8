#pragma once

// Ostrowski numeration with respect to a continued fraction base, and two
// independent evaluators for the Birkhoff sum S_N(r) = sum_{n<=N} ({nr}-1/2):
// the direct exact sum, and the closed-form evaluation through the Ostrowski
// digits of N. Both are exact on rationals; hot paths run in int64 whenever
// a proven bound keeps every intermediate in range, and fall back to
// arbitrary precision otherwise.

#include "rotsum/cf.hpp"
#include "rotsum/rational.hpp"

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace rotsum {

struct OstrowskiDigits {
    std::vector<BigInt> digits;  // b_0 .. b_{L-1}, N = sum b_l q_l
};

namespace detail {

inline void check_digit_rules(const OstrowskiDigits& d, const Convergents& base) {
    const std::size_t L = base.depth();
    if (d.digits.size() != L) throw std::domain_error("OstrowskiDigits: digit count does not match base depth");
    for (std::size_t l = 0; l < L; ++l) {
        const BigInt& b = d.digits[l];
        if (b < 0) throw std::domain_error("OstrowskiDigits: negative digit");
        if (l == 0) {
            if (L >= 1 && b >= base.a[0]) throw std::domain_error("OstrowskiDigits: b_0 must be < a_1");
        } else {
            if (b > base.a[l]) throw std::domain_error("OstrowskiDigits: digit exceeds partial quotient");
            if (b == base.a[l] && d.digits[l - 1] != 0)
                throw std::domain_error("OstrowskiDigits: b_l = a_{l+1} forces b_{l-1} = 0");
        }
    }
}

}  // namespace detail

// Greedy top-down digit extraction; requires 0 <= N < q_L.
inline OstrowskiDigits digits_of(const BigInt& N, const Convergents& base) {
    if (N < 0 || N >= base.q.back()) throw std::domain_error("digits_of: N outside [0, q_L)");
    const std::size_t L = base.depth();
    OstrowskiDigits d;
    d.digits.assign(L, BigInt(0));
    BigInt rem = N;
    for (std::size_t l = L; l-- > 0;) {
        d.digits[l] = rem / base.q[l];
        rem -= d.digits[l] * base.q[l];
    }
    detail::check_digit_rules(d, base);
    return d;
}

inline BigInt int_of_digits(const OstrowskiDigits& d, const Convergents& base) {
    detail::check_digit_rules(d, base);
    BigInt n = 0;
    for (std::size_t l = 0; l < d.digits.size(); ++l) n += d.digits[l] * base.q[l];
    return n;
}

// S_N(r) by the direct exact sum, for any rational r in [0,1) and N >= 0.
inline Rational birkhoff_direct_exact(const Rational& r, std::int64_t N) {
    if (r.sign() < 0 || r >= Rational(1)) throw std::domain_error("birkhoff_direct_exact: r must be in [0,1)");
    if (N < 0) throw std::domain_error("birkhoff_direct_exact: N must be >= 0");
    const BigInt& a = r.num();
    const BigInt& q = r.den();
    BigInt res = 0;        // (n a) mod q
    BigInt num2q = 0;      // 2 q S_n
    for (std::int64_t n = 1; n <= N; ++n) {
        res += a;
        if (res >= q) res -= q;
        num2q += 2 * res - q;
    }
    return Rational(num2q, 2 * q);
}

// All prefix values S_0 .. S_{M-1} of a rational source, exactly, in one pass.
inline std::vector<Rational> birkhoff_prefix_exact(const Rational& r, std::int64_t M) {
    if (M < 1) throw std::domain_error("birkhoff_prefix_exact: M must be >= 1");
    std::vector<Rational> out;
    out.reserve(static_cast<std::size_t>(M));
    const BigInt& a = r.num();
    const BigInt q = r.den();
    const BigInt q2 = 2 * q;
    BigInt res = 0, num2q = 0;
    out.emplace_back(0);
    for (std::int64_t n = 1; n < M; ++n) {
        res += a;
        if (res >= q) res -= q;
        num2q += 2 * res - q;
        out.emplace_back(num2q, q2);
    }
    return out;
}

// Exact evaluator of Ostrowski's closed form at a fixed rational base. The
// base may be given in either continued fraction form of r; the value is the
// same. All terms live over the common denominator 2q, with
//   2q * term_l = (-1)^{l+1} b_l (q - b_l q_l e_l - 2 e_l P_l - e_l),
// where e_l = |q_l a - p_l q| = q ||q_l r|| and P_l = sum_{j<l} b_j q_j.
class OstrowskiEvaluator {
public:
    explicit OstrowskiEvaluator(const Rational& r) : OstrowskiEvaluator(cf_expand(r), r) {}

    OstrowskiEvaluator(const CFExpansion& cf, const Rational& r) : base_(convergents(cf)), q_(r.den()) {
        if (cf_value(cf) != r) throw std::domain_error("OstrowskiEvaluator: expansion does not match value");
        const std::size_t L = base_.depth();
        e_.reserve(L);
        for (std::size_t l = 0; l < L; ++l) {
            BigInt e = base_.q[l] * r.num() - base_.p[l] * r.den();
            if (e < 0) e = -e;
            e_.push_back(std::move(e));
        }
        // int64 is safe when every intermediate is bounded by ~5 q^2 and the
        // digit products stay under q^2 (see bounds above); q <= 1e9 suffices.
        // L <= 64 always holds for such q (Fibonacci growth), checked anyway.
        fast_ = q_ <= BigInt(1000000000) && L <= 64;
        if (fast_) {
            q64_ = q_.convert_to<std::int64_t>();
            q64s_.reserve(L);
            e64_.reserve(L);
            for (std::size_t l = 0; l < L; ++l) {
                q64s_.push_back(base_.q[l].convert_to<std::int64_t>());
                e64_.push_back(e_[l].convert_to<std::int64_t>());
            }
        }
    }

    const Convergents& base() const { return base_; }
    const BigInt& q() const { return q_; }

    // 2 q S_N as an integer. Exact for all 0 <= N < q.
    std::int64_t value_times_2q_i64(std::int64_t N) const {
        if (!fast_) throw std::logic_error("OstrowskiEvaluator: int64 path unavailable for this base");
        if (N < 0 || N >= q64_) throw std::domain_error("birkhoff_ostrowski: N outside [0, q)");
        std::int64_t total = 0;
        std::int64_t rem = N;
        std::int64_t prefix[64];
        const std::size_t L = q64s_.size();
        std::int64_t digit[64];
        for (std::size_t l = L; l-- > 0;) {
            digit[l] = rem / q64s_[l];
            rem -= digit[l] * q64s_[l];
        }
        std::int64_t run = 0;
        for (std::size_t l = 0; l < L; ++l) {
            prefix[l] = run;
            run += digit[l] * q64s_[l];
        }
        for (std::size_t l = 0; l < L; ++l) {
            if (digit[l] == 0) continue;
            std::int64_t inner = q64_ - digit[l] * q64s_[l] * e64_[l] - 2 * e64_[l] * prefix[l] - e64_[l];
            std::int64_t term = digit[l] * inner;
            total += (l % 2 == 0) ? -term : term;
        }
        return total;
    }

    Rational value(const BigInt& N) const {
        if (fast_ && N.convert_to<double>() < 9.0e18) {
            return Rational(BigInt(value_times_2q_i64(N.convert_to<std::int64_t>())), 2 * q_);
        }
        if (N < 0 || N >= q_) throw std::domain_error("birkhoff_ostrowski: N outside [0, q)");
        OstrowskiDigits d = digits_of(N, base_);
        BigInt total = 0, prefix = 0;
        for (std::size_t l = 0; l < d.digits.size(); ++l) {
            const BigInt& b = d.digits[l];
            if (b != 0) {
                BigInt inner = q_ - b * base_.q[l] * e_[l] - 2 * e_[l] * prefix - e_[l];
                BigInt term = b * inner;
                total += (l % 2 == 0) ? -term : term;
            }
            prefix += d.digits[l] * base_.q[l];
        }
        return Rational(total, 2 * q_);
    }

private:
    Convergents base_;
    BigInt q_;
    std::vector<BigInt> e_;
    bool fast_ = false;
    std::int64_t q64_ = 0;
    std::vector<std::int64_t> q64s_, e64_;
};

// One-shot convenience form of the Ostrowski evaluation for rational bases.
inline Rational birkhoff_ostrowski(const CFExpansion& cf, const Rational& r, const BigInt& N) {
    return OstrowskiEvaluator(cf, r).value(N);
}

inline Rational birkhoff_ostrowski(const Rational& r, const BigInt& N) {
    return OstrowskiEvaluator(r).value(N);
}

// Floating evaluation against a truncated irrational base: the caller supplies
// the convergents of a CF prefix of alpha together with the (signed-magnitude)
// distances delta_l = |q_l alpha - p_l|.
inline double birkhoff_ostrowski(const Convergents& base, const std::vector<double>& delta, const BigInt& N) {
    if (delta.size() < base.depth()) throw std::domain_error("birkhoff_ostrowski: missing distance table");
    OstrowskiDigits d = digits_of(N, base);
    double total = 0.0, prefix = 0.0;
    for (std::size_t l = 0; l < d.digits.size(); ++l) {
        double b = d.digits[l].convert_to<double>();
        double ql = base.q[l].convert_to<double>();
        if (b != 0.0) {
            double term = b * (0.5 * (1.0 - b * ql * delta[l]) - delta[l] * prefix - 0.5 * delta[l]);
            total += (l % 2 == 0) ? -term : term;
        }
        prefix += b * ql;
    }
    return total;
}

}  // namespace rotsum
