#include "rotsum/experiments.hpp"
#include "rotsum/figures.hpp"
#include "rotsum/normalization.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "manifest.hpp"

using namespace rotsum;

TEST_CASE("quotient sums by parity") {
    CHECK(quotient_sum_stat(Rational(3, 8), Parity::Even) == Catch::Approx(1.0 / 8));
    CHECK(quotient_sum_stat(Rational(3, 8), Parity::Odd) == Catch::Approx(4.0 / 8));
    CHECK(quotient_sum_stat(Rational(1, 2), Parity::Even) == 0.0);
    CHECK(quotient_sum_stat(Rational(1, 2), Parity::Odd) == Catch::Approx(2.0 / 8));
    // canonical expansions only: [0;1,1,1,1] is the value 3/5 = [0;1,1,2]
    CHECK(quotient_sum_stat(Rational(3, 5), Parity::Even) == Catch::Approx(1.0 / 8));
    CHECK(quotient_sum_stat(Rational(3, 5), Parity::Odd) == Catch::Approx(3.0 / 8));
    CHECK(quotient_sum_stat(Rational(11, 15), Parity::Even) == Catch::Approx(5.0 / 8));  // [0;1,2,1,3]
    CHECK_THROWS_AS(quotient_sum_stat(Rational(0), Parity::Even), std::domain_error);
}

TEST_CASE("normalization guards and formulas") {
    CHECK(sigma_scale(std::exp(1.0)) == Catch::Approx(3.0 / (8.0 * std::numbers::pi)));
    CHECK_THROWS_AS(sigma_scale(1.0), std::domain_error);
    CHECK_THROWS_AS(e_p_scale(15.0, PParam::plus_inf(), 0.0), std::domain_error);
    CHECK_THROWS_AS(b_q(15.0), std::domain_error);
    double Q = 1e4, l = std::log(Q), c = 3.0 / (4.0 * std::numbers::pi * std::numbers::pi);
    CHECK(b_q(Q) == Catch::Approx(c * l * std::log(l) - c * (kEulerGamma + std::log(std::numbers::pi / 3.0)) * l));
    CHECK(b_m(1e4, 0.25) ==
          Catch::Approx(2.0 * e_p_scale(1e4, PParam::plus_inf(), 0.25) +
                        4.0 / std::numbers::pi * std::log(2.0) * sigma_scale(1e4)));
    CHECK(sigma_tilde_scale(std::exp(1.0)) ==
          Catch::Approx(3.0 * vol41() / (2.0 * std::numbers::pi * std::numbers::pi)));
}

TEST_CASE("D_p estimator: constant term, antisymmetry, self-consistency") {
    double c = 3.0 / (4.0 * std::numbers::pi * std::numbers::pi);
    CHECK(dp_constant_term(PParam::plus_inf()) ==
          Catch::Approx(-c * (kEulerGamma + std::log(std::numbers::pi / 3.0))));
    CHECK(dp_constant_term(PParam::minus_inf()) == Catch::Approx(-dp_constant_term(PParam::plus_inf())));

    double dp = estimate_dp(PParam::plus_inf(), 1000, 400, 2);
    double dm = estimate_dp(PParam::minus_inf(), 1000, 400, 2);
    CHECK(std::abs(dp + dm) < manifest::kDpAntisymmetry);
    double dp_finer = estimate_dp(PParam::plus_inf(), 2000, 1000, 2);
    CHECK(std::abs(dp - dp_finer) < manifest::kDpSelfConsistency);

    CHECK_THROWS_AS(estimate_dp(PParam::plus_inf(), 50, 400), std::domain_error);
    CHECK_THROWS_AS(estimate_dp(PParam::plus_inf(), 400, 50), std::domain_error);
}

TEST_CASE("D~_p estimator") {
    CHECK(dtilde_constant_term() ==
          Catch::Approx(3.0 * vol41() / std::pow(std::numbers::pi, 3) *
                        (std::log(6.0 / std::numbers::pi) - kEulerGamma)));
    double d1 = estimate_dtilde_p(PParam::finite(2.0), 400, 400, 2);
    CHECK(std::isfinite(d1));
    double d2 = estimate_dtilde_p(PParam::finite(2.0), 800, 800, 2);
    CHECK(std::abs(d1 - d2) < manifest::kDpSelfConsistency);
    CHECK_THROWS_AS(estimate_dtilde_p(PParam::finite(-2.0), 400, 400), std::domain_error);
}

TEST_CASE("truncation to a denominator floor") {
    Rational x(355, 113000);
    Rational t = truncate_to_denominator(x, 100);
    CHECK(t.den() >= 100);
    CHECK(std::abs(t.to_double() - x.to_double()) < 1.0 / (100.0 * 100.0));
    CHECK(truncate_to_denominator(Rational(1, 7), 100) == Rational(1, 7));

    Rational y = cf_truncate_double(std::sqrt(2.0) - 1.0, 1000);
    CHECK(y.den() > 1000);
    CHECK(std::abs(y.to_double() - (std::sqrt(2.0) - 1.0)) < 1e-6);
    // doubles that are exactly dyadic rationals terminate early
    CHECK(cf_truncate_double(0.25, 1000000000000LL) == Rational(1, 4));
}

TEST_CASE("farey main-term experiment: determinism and smoke gate") {
    ExperimentReport a = run_farey_main_term(1000, 500, 2718, 1);
    ExperimentReport b = run_farey_main_term(1000, 500, 2718, 2);
    auto ja = a.to_json(), jb = b.to_json();
    ja.erase("wall_seconds");
    jb.erase("wall_seconds");
    CHECK(ja == jb);  // worker-count independence, bit for bit
    CHECK(a.ks["even_vs_stab_plus"].get<double>() < manifest::kFareyMainTermSmokeKs);
    CHECK(a.ks["odd_vs_stab_minus"].get<double>() < manifest::kFareyMainTermSmokeKs);
    CHECK_THROWS_AS(run_farey_main_term(50, 500, 1), std::domain_error);
}

TEST_CASE("farey limit-law experiment: determinism, symmetry, modes") {
    ExperimentReport a = run_farey_limit_law(2000, 300, PParam::plus_inf(), PParam::minus_inf(), 5,
                                             DpMode::FittedMedian, 2);
    ExperimentReport b = run_farey_limit_law(2000, 300, PParam::plus_inf(), PParam::minus_inf(), 5,
                                             DpMode::FittedMedian, 1);
    auto ja = a.to_json(), jb = b.to_json();
    ja.erase("wall_seconds");
    jb.erase("wall_seconds");
    CHECK(ja == jb);
    CHECK(a.config["d_p_mode"] == "fitted-median");
    CHECK(std::isfinite(a.spearman));

    // exact distributional symmetry: log J_{-inf}(a/q) = -log J_inf(1 - a/q)
    FareySampler sampler(2000, 16);
    for (std::uint64_t i = 0; i < 200; ++i) {
        Rng rng = Rng::for_sample(5, i);
        auto [aa, qq] = sampler.draw(rng);
        Rational r(aa, qq);
        CHECK(log_jp_exact(r, false) == -log_jp_exact(Rational(1) - r, true));
    }
    CHECK_THROWS_AS(run_farey_limit_law(2000, 300, PParam::minus_inf(), PParam::plus_inf(), 5), std::domain_error);

    ExperimentReport big = run_farey_limit_law(10000, 2000, PParam::plus_inf(), PParam::minus_inf(), 31337,
                                               DpMode::Estimated, 2);
    CHECK(big.ks["p_vs_stab_plus"].get<double>() < manifest::kFareyLimitLawKs);
    CHECK(big.ks["pprime_vs_stab_minus"].get<double>() < manifest::kFareyLimitLawKs);
}

TEST_CASE("real limit-law experiment: sampler law, determinism, center statistic") {
    // gauss measure sampling: alpha_i = 2^{u_i} - 1 reproduces the Gauss CDF
    const std::int64_t n = 4000;
    std::vector<double> alphas;
    for (std::int64_t i = 0; i < n; ++i) {
        Rng rng = Rng::for_sample(123, static_cast<std::uint64_t>(i));
        alphas.push_back(std::exp2(rng.uniform01()) - 1.0);
    }
    double d = ks_distance(ECDF(alphas), [](double x) {
        if (x <= 0.0) return 0.0;
        if (x >= 1.0) return 1.0;
        return std::log2(1.0 + x);
    });
    CHECK(d < manifest::kKsSelfDrawn / std::sqrt(static_cast<double>(n)));

    ExperimentReport a =
        run_real_limit_law(100000, 400, PParam::plus_inf(), PParam::minus_inf(), 99, RealMeasure::Gauss, false, 2);
    ExperimentReport b =
        run_real_limit_law(100000, 400, PParam::plus_inf(), PParam::minus_inf(), 99, RealMeasure::Gauss, false, 1);
    auto ja = a.to_json(), jb = b.to_json();
    ja.erase("wall_seconds");
    jb.erase("wall_seconds");
    CHECK(ja == jb);
    CHECK(a.ks["center_vs_cauchy"].get<double>() < manifest::kRealCenterKs);
    CHECK(a.ks.contains("diameter_vs_stab_plus"));

    ExperimentReport t =
        run_real_limit_law(50000, 200, PParam::plus_inf(), PParam::minus_inf(), 7, RealMeasure::Uniform, true, 2);
    CHECK(t.ks.contains("tilde_p_vs_stab_plus"));
    CHECK(std::isfinite(t.d_hat["d_tilde_p"].get<double>()));

    CHECK_THROWS_AS(run_real_limit_law(100, 400, PParam::plus_inf(), PParam::minus_inf(), 1, RealMeasure::Uniform),
                    std::domain_error);
}

TEST_CASE("farey pipeline telescoping stays exact through sampling") {
    FareySampler sampler(1000, 16);
    for (std::uint64_t i = 0; i < 100; ++i) {
        Rng rng = Rng::for_sample(77, i);
        auto [a, q] = sampler.draw(rng);
        Rational r(a, q), x = r;
        Rational total(0);
        while (!x.is_zero()) {
            total += hp_exact(x, true);
            x = gauss_map2(x);
        }
        CHECK(total == log_jp_exact(r, true));
    }
}

TEST_CASE("figure CSVs: counts, format, pinned rows") {
    std::string path = "/tmp/rotsum_test_fig.csv";

    // f1 row count = 1 + sum phi(q), cross-checked by brute force
    std::int64_t rows = emit_figure("f1", 30, path);
    std::int64_t brute = 1;
    for (std::int64_t q = 1; q <= 30; ++q)
        for (std::int64_t a = 1; a <= q; ++a)
            if (std::gcd(a, q) == 1) ++brute;
    CHECK(rows == brute);

    // header and 12-significant-digit floats
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "num,den,value,statistic");
    std::string line, line38;
    while (std::getline(in, line))
        if (line.rfind("3,8,", 0) == 0) line38 = line;
    REQUIRE(!line38.empty());
    CHECK(line38 == "3,8,0.375,0.125");

    // f2b at 1/q carries the closed form -q/8 + 1/4 - [q odd]/(8q)
    emit_figure("f2b", 40, path);
    std::ifstream in2(path);
    std::getline(in2, header);
    int checked = 0;
    while (std::getline(in2, line)) {
        std::istringstream ss(line);
        std::string num, den, val, stat;
        std::getline(ss, num, ',');
        std::getline(ss, den, ',');
        std::getline(ss, val, ',');
        std::getline(ss, stat, ',');
        if (num != "1") continue;
        std::int64_t q = std::stoll(den);
        double expect = -q / 8.0 + 0.25 - (q % 2 ? 1.0 / (8.0 * q) : 0.0);
        CHECK(std::stod(stat) == Catch::Approx(expect).margin(1e-12));
        ++checked;
    }
    CHECK(checked == 39);

    // f3a contains the pinned row at 3/8
    emit_figure("f3a", 600, path);
    std::ifstream in3(path);
    std::getline(in3, header);
    bool found = false;
    while (std::getline(in3, line))
        if (line == "3,8,0.375,0.125") found = true;
    CHECK(found);

    // f4 residuals stay bounded where the raw h_p blows up
    std::int64_t n4 = emit_figure("f4c", 40, path);
    CHECK(n4 > 0);
    CHECK_THROWS_AS(emit_figure("f9", 30, path), std::domain_error);
    CHECK_THROWS_AS(emit_figure("f1", 30, "/nonexistent_dir/x.csv"), std::runtime_error);
    std::remove(path.c_str());
}
