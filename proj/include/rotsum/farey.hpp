#pragma once

// Farey fractions F_Q = { a/q in [0,1] : gcd(a,q) = 1, 1 <= q <= Q }:
// ordered enumeration via the Stern-Brocot neighbor recurrence, and uniform
// sampling via a totient-weighted two-stage scheme with O(Q) memory.

#include "rotsum/rational.hpp"
#include "rotsum/rng.hpp"

#include <cstdint>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace rotsum {

// Euler totients phi(1..Q) by a linear sieve.
inline std::vector<std::int64_t> totient_table(std::int64_t Q) {
    if (Q < 1) throw std::domain_error("totient_table: Q must be >= 1");
    std::vector<std::int64_t> phi(static_cast<std::size_t>(Q) + 1, 0);
    std::vector<std::int32_t> primes;
    phi[1] = 1;
    for (std::int64_t i = 2; i <= Q; ++i) {
        if (phi[i] == 0) {
            phi[i] = i - 1;
            primes.push_back(static_cast<std::int32_t>(i));
        }
        for (std::int32_t p : primes) {
            if (i * p > Q) break;
            if (i % p == 0) {
                phi[i * p] = phi[i] * p;
                break;
            }
            phi[i * p] = phi[i] * (p - 1);
        }
    }
    return phi;
}

// Visits every element of F_Q exactly once, in increasing order, as
// (numerator, denominator) pairs. Count is 1 + sum_{q<=Q} phi(q).
inline void farey_enumerate(std::int64_t Q, const std::function<void(std::int64_t, std::int64_t)>& visit) {
    if (Q < 1) throw std::domain_error("farey_enumerate: Q must be >= 1");
    std::int64_t a = 0, b = 1, c = 1, d = Q;
    visit(a, b);
    while (c <= Q) {
        std::int64_t k = (Q + b) / d;
        std::int64_t a2 = k * c - a, b2 = k * d - b;
        a = c;
        b = d;
        c = a2;
        d = b2;
        visit(a, b);
    }
}

inline std::vector<Rational> farey_list(std::int64_t Q) {
    std::vector<Rational> out;
    farey_enumerate(Q, [&](std::int64_t a, std::int64_t q) { out.emplace_back(a, q); });
    return out;
}

// I.i.d. uniform draws from { a/q in F_Q : q >= q_min }. Stage one picks the
// denominator with probability proportional to the number of fractions having
// it (phi(q), and 2 for q = 1 which carries both 0/1 and 1/1); stage two picks
// a residue coprime to q by rejection.
class FareySampler {
public:
    FareySampler(std::int64_t Q, std::int64_t q_min) : q_min_(q_min) {
        if (q_min < 1 || Q < q_min) throw std::domain_error("FareySampler: need Q >= q_min >= 1");
        phi_ = totient_table(Q);
        cumulative_.assign(static_cast<std::size_t>(Q - q_min + 1), 0);
        std::uint64_t acc = 0;
        for (std::int64_t q = q_min; q <= Q; ++q) {
            acc += static_cast<std::uint64_t>(q == 1 ? 2 : phi_[q]);
            cumulative_[static_cast<std::size_t>(q - q_min)] = acc;
        }
        if (acc == 0) throw std::domain_error("FareySampler: empty target set");
    }

    std::pair<std::int64_t, std::int64_t> draw(Rng& rng) const {
        std::uint64_t u = rng.below(cumulative_.back());
        auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
        std::int64_t q = q_min_ + static_cast<std::int64_t>(it - cumulative_.begin());
        if (q == 1) return {static_cast<std::int64_t>(rng.below(2)), 1};
        for (;;) {
            std::int64_t a = rng.between(1, q - 1);
            if (std::gcd(a, q) == 1) return {a, q};
        }
    }


private:
    std::int64_t q_min_;
    std::vector<std::int64_t> phi_;
    std::vector<std::uint64_t> cumulative_;
};

inline std::vector<Rational> farey_sample(std::int64_t Q, std::int64_t count, std::uint64_t seed,
                                          std::int64_t q_min = 1) {
    if (count <= 0) throw std::domain_error("farey_sample: count must be positive");
    FareySampler sampler(Q, q_min);
    std::vector<Rational> out;
    out.reserve(static_cast<std::size_t>(count));
    for (std::int64_t i = 0; i < count; ++i) {
        Rng rng = Rng::for_sample(seed, static_cast<std::uint64_t>(i));
        auto [a, q] = sampler.draw(rng);
        out.emplace_back(a, q);
    }
    return out;
}

}  // namespace rotsum
