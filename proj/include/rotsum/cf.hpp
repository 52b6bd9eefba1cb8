#pragma once

// Continued fractions of rationals in [0,1), their convergents, and the
// Gauss map. The canonical expansion r = [0; a_1, ..., a_L] has a_L >= 2
// whenever L >= 2 (the Euclidean algorithm produces it directly); the other
// expansion of the same value ends [..., a_L - 1, 1].

#include "rotsum/rational.hpp"

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace rotsum {

struct CFExpansion {
    BigInt a0;                     // integer part (0 for arguments in [0,1))
    std::vector<BigInt> quotients; // a_1, ..., a_L, all >= 1

    std::size_t length() const { return quotients.size(); }
};

struct Convergents {
    std::vector<BigInt> p;  // p_0, ..., p_L
    std::vector<BigInt> q;  // q_0, ..., q_L
    std::vector<BigInt> a;  // the quotients a_1..a_L the table was built from

    std::size_t depth() const { return a.size(); }
    Rational value() const { return Rational(p.back(), q.back()); }
};

// Euclidean expansion of r in [0,1). r = 0 yields the empty expansion.
inline CFExpansion cf_expand(const Rational& r) {
    if (r.sign() < 0 || r >= Rational(1)) throw std::domain_error("cf_expand: argument must be in [0,1)");
    CFExpansion cf;
    cf.a0 = 0;
    BigInt n = r.num(), d = r.den();
    // Invariant: 0 <= n < d, value left to expand is n/d.
    while (n != 0) {
        BigInt a = d / n;
        BigInt rem = d - a * n;
        cf.quotients.push_back(a);
        d = n;
        n = rem;
    }
    return cf;
}

inline Rational cf_value(const CFExpansion& cf) {
    Rational v(0);
    for (auto it = cf.quotients.rbegin(); it != cf.quotients.rend(); ++it) {
        v = Rational(1) / (Rational(*it) + v);
    }
    return Rational(cf.a0) + v;
}

// The other expansion of the same value: [..., a_L] <-> [..., a_L - 1, 1].
inline CFExpansion cf_alternate(const CFExpansion& cf) {
    if (cf.quotients.empty()) throw std::domain_error("cf_alternate: empty expansion");
    CFExpansion out = cf;
    BigInt& last = out.quotients.back();
    if (last == 1) {
        if (out.quotients.size() == 1) throw std::domain_error("cf_alternate: [0;1] is not a value in [0,1)");
        out.quotients.pop_back();
        out.quotients.back() += 1;
    } else {
        last -= 1;
        out.quotients.emplace_back(1);
    }
    return out;
}

inline Convergents convergents(const CFExpansion& cf) {
    Convergents c;
    c.a = cf.quotients;
    const std::size_t L = cf.quotients.size();
    c.p.reserve(L + 1);
    c.q.reserve(L + 1);
    c.p.push_back(cf.a0);  // p_0 = a_0
    c.q.push_back(1);      // q_0 = 1
    BigInt pm1 = 1, qm1 = 0;  // p_{-1}, q_{-1}
    for (std::size_t i = 0; i < L; ++i) {
        BigInt pi = cf.quotients[i] * c.p.back() + pm1;
        BigInt qi = cf.quotients[i] * c.q.back() + qm1;
        pm1 = c.p.back();
        qm1 = c.q.back();
        c.p.push_back(std::move(pi));
        c.q.push_back(std::move(qi));
    }
    return c;
}

inline Convergents convergents(const Rational& r) { return convergents(cf_expand(r)); }

// Gauss map T x = {1/x}, T 0 = 0; drops the leading partial quotient.
inline Rational gauss_map(const Rational& r) {
    if (r.sign() < 0 || r >= Rational(1)) throw std::domain_error("gauss_map: argument must be in [0,1)");
    if (r.is_zero()) return Rational(0);
    BigInt a = r.den() / r.num();
    return Rational(r.den() - a * r.num(), r.num());
}

inline Rational gauss_map2(const Rational& r) { return gauss_map(gauss_map(r)); }

// Distance from q_ell * r to the nearest integer, exactly.
inline Rational dist_to_nearest_int(const BigInt& q_ell, const Rational& r) {
    if (q_ell < 1) throw std::domain_error("dist_to_nearest_int: multiplier must be >= 1");
    BigInt t = (q_ell * r.num()) % r.den();
    if (t < 0) t += r.den();
    BigInt other = r.den() - t;
    return Rational(t < other ? t : other, r.den());
}

}  // namespace rotsum
