#include "rotsum/quadratic.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

#include "manifest.hpp"

using namespace rotsum;

namespace {

std::vector<BigInt> quots(std::initializer_list<long long> xs) {
    std::vector<BigInt> out;
    for (long long x : xs) out.emplace_back(x);
    return out;
}

}  // namespace

TEST_CASE("surd_cf on the classical expansions") {
    PeriodicCF s2 = surd_cf(surd_sqrt2_minus_1());
    CHECK(s2.preperiod == quots({0}));
    CHECK(s2.period == quots({2, 2}));

    PeriodicCF s3 = surd_cf(surd_sqrt3_minus_1());
    CHECK(s3.preperiod == quots({0}));
    CHECK(s3.period == quots({1, 2}));

    PeriodicCF g = surd_cf(surd_golden());
    CHECK(g.preperiod == quots({1}));
    CHECK(g.period == quots({1, 1}));

    CHECK(s2.period.size() % 2 == 0);
    CHECK(s3.period.size() % 2 == 0);
    CHECK(g.period.size() % 2 == 0);

    CHECK_THROWS_AS(QuadraticSurd(0, 1, 9), std::domain_error);   // perfect square
    CHECK_THROWS_AS(QuadraticSurd(1, 0, 2), std::domain_error);   // zero denominator
}

TEST_CASE("periodic expansion reproduces the surd exactly") {
    for (const QuadraticSurd& s : {surd_sqrt2_minus_1(), surd_sqrt3_minus_1(), surd_golden(),
                                    QuadraticSurd(3, 7, 19), QuadraticSurd(-2, 5, 13)}) {
        PeriodicCF pcf = surd_cf(s);
        ConvergentStream stream(pcf);
        // The reconstructed fractional part must satisfy the minimal
        // polynomial of frac(s): with z = (P - a0 Q + sqrt(D))/Q,
        // z^2 - s1 z + s0 = 0 where s1 = z + conj(z), s0 = z conj(z).
        const BigInt& a0 = pcf.preperiod[0];
        BigInt pn = s.P - a0 * s.Q;
        QuadExt frac = stream.frac_value();
        QuadExt s1(2 * pn * s.Q, 0, s.Q * s.Q, frac.D);
        QuadExt s0(pn * pn - s.D, 0, s.Q * s.Q, frac.D);
        QuadExt residual = frac * frac - s1 * frac + s0;
        CHECK(residual.is_zero());
        // disambiguate from the conjugate root numerically
        double expect = s.to_double() - std::floor(s.to_double());
        CHECK(std::abs(frac.abs_double() - expect) < 1e-9);
        // and the convergents must approach it with the CF quality bound
        for (std::size_t k = 3; k <= 12; ++k) {
            double approx = stream.convergent(k).to_double();
            double qk = stream.q(k).convert_to<double>();
            double qk1 = stream.q(k + 1).convert_to<double>();
            CHECK(std::abs(expect - approx) < 1.0 / (qk * qk1) + 1e-15);
        }
    }
}

TEST_CASE("convergent streams match the classical denominators") {
    ConvergentStream s2(surd_cf(surd_sqrt2_minus_1()));
    std::vector<long long> pell = {1, 2, 5, 12, 29, 70};
    for (std::size_t k = 0; k < pell.size(); ++k) CHECK(s2.q(k) == pell[k]);

    ConvergentStream s3(surd_cf(surd_sqrt3_minus_1()));
    std::vector<long long> q3 = {1, 1, 3, 4, 11, 15, 41};
    for (std::size_t k = 0; k < q3.size(); ++k) CHECK(s3.q(k) == q3[k]);

    ConvergentStream g(surd_cf(surd_golden()));
    std::vector<long long> fib = {1, 1, 2, 3, 5, 8, 13, 21};
    for (std::size_t k = 0; k < fib.size(); ++k) CHECK(g.q(k) == fib[k]);
}

TEST_CASE("delta values decay like the convergent quality") {
    ConvergentStream s2(surd_cf(surd_sqrt2_minus_1()));
    // long double oracle: the double form q_k alpha - p_k loses ~7 digits to
    // cancellation by k = 20, the exact conjugate path does not
    long double alpha = sqrtl(2.0L) - 1.0L;
    for (std::size_t k = 1; k <= 14; ++k) {
        double d = s2.delta(k);
        long double qk = s2.q(k).convert_to<long double>();
        long double direct = fabsl(qk * alpha - s2.p(k).convert_to<long double>());
        // the oracle carries q_k * eps(long double) absolute error, so the
        // comparison stops where that stays far below delta
        CHECK(d == Catch::Approx(static_cast<double>(direct)).epsilon(1e-6));
    }
    // exact band 1/(a+2) <= q_k ||q_k alpha|| <= 1/a with a = 2, all depths
    for (std::size_t k = 1; k <= 40; ++k) {
        double band = s2.q(k).convert_to<double>() * s2.delta(k);
        CHECK(band >= 0.25 - 1e-12);
        CHECK(band <= 0.5 + 1e-12);
    }
}

TEST_CASE("log q_k grows affinely in the period index") {
    for (const QuadraticSurd& s : {surd_sqrt2_minus_1(), surd_sqrt3_minus_1()}) {
        PeriodicCF pcf = surd_cf(s);
        ConvergentStream stream(pcf);
        std::size_t m = pcf.period.size();
        std::vector<double> logs;
        for (std::size_t k = 1; k <= 30; ++k) logs.push_back(std::log(stream.q(k * m).convert_to<double>()));
        // affine fit on k >= 5, relative residual < 1e-6
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int n = 0;
        for (std::size_t k = 5; k < logs.size(); ++k) {
            double x = static_cast<double>(k);
            sx += x;
            sy += logs[k];
            sxx += x * x;
            sxy += x * logs[k];
            ++n;
        }
        double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        double inter = (sy - slope * sx) / n;
        for (std::size_t k = 5; k < logs.size(); ++k) {
            double fit = inter + slope * static_cast<double>(k);
            CHECK(std::abs(fit - logs[k]) < 1e-6 * std::abs(logs[k]));
        }
    }
}

TEST_CASE("known_cp closed forms") {
    CHECK(known_cp("sqrt2", PParam::plus_inf()) == Catch::Approx(0.1418245).margin(1e-6));
    CHECK(known_cp("sqrt2", PParam::minus_inf()) == Catch::Approx(-0.1418245).margin(1e-6));
    CHECK(known_cp("sqrt3", PParam::plus_inf()) == Catch::Approx(0.1898313).margin(1e-6));
    CHECK(known_cp("sqrt3", PParam::minus_inf()) == Catch::Approx(-0.0632771).margin(1e-6));
    CHECK_THROWS_AS(known_cp("sqrt5", PParam::plus_inf()), std::domain_error);
    CHECK_THROWS_AS(known_cp("sqrt2", PParam::finite(2.0)), std::domain_error);
}

TEST_CASE("estimate_cp recovers the closed forms at reduced horizon") {
    PeriodicCF s2 = surd_cf(surd_sqrt2_minus_1());
    CpEstimate plus = estimate_cp(s2, PParam::plus_inf(), 1000000);
    CHECK(std::abs(plus.slope - known_cp("sqrt2", PParam::plus_inf())) <
          manifest::kCpRelativeErrUnit * known_cp("sqrt2", PParam::plus_inf()));
    CpEstimate minus = estimate_cp(s2, PParam::minus_inf(), 1000000);
    CHECK(std::abs(plus.slope + minus.slope) < plus.ci_halfwidth + minus.ci_halfwidth);
    CHECK(plus.ci_halfwidth > 0.0);
    CHECK(plus.base_q > 2000000);
    CHECK_THROWS_AS(estimate_cp(s2, PParam::plus_inf(), 999), std::domain_error);
}

TEST_CASE("h_p along convergents settles near the quadratic limits") {
    PeriodicCF s3 = surd_cf(surd_sqrt3_minus_1());
    auto plus = hp_at_convergents(s3, PParam::plus_inf(), 20);
    REQUIRE(plus.size() == 19);
    CHECK(plus.front().first == 2);
    CHECK(std::abs(plus.back().second - 0.25) < 0.05);
    auto minus = hp_at_convergents(s3, PParam::minus_inf(), 20);
    CHECK(std::abs(minus.back().second + 1.0 / 12.0) < 0.05);

    // Cesaro consistency: the running mean over k <= 20 stays near 1/4
    double mean = 0.0;
    for (const auto& [k, h] : plus) mean += h;
    mean /= static_cast<double>(plus.size());
    CHECK(std::abs(mean - 0.25) < 0.05);

    // definition unfold at k = 2: T^2(p_2/q_2) = 0
    ConvergentStream stream(s3);
    double h2 = plus.front().second;
    CHECK(h2 == Catch::Approx(log_jp(stream.convergent(2), PParam::plus_inf())));
    CHECK_THROWS_AS(hp_at_convergents(s3, PParam::plus_inf(), 1), std::domain_error);
}
