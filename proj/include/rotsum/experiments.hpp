#pragma once

// Monte Carlo drivers for the limit laws: Farey-fraction and random-real
// sampling pipelines, the D_p / D~_p integral estimators, and deterministic
// experiment reports.
//
// Determinism contract: every sample i draws from the substream
// Rng::for_sample(seed, i), and aggregation is a fold in sample-index order,
// so reports are identical across repeated runs and across worker counts.

#include "rotsum/farey.hpp"
#include "rotsum/moments.hpp"
#include "rotsum/normalization.hpp"
#include "rotsum/pparam.hpp"
#include "rotsum/rng.hpp"
#include "rotsum/stable.hpp"
#include "rotsum/sudler.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace rotsum {

namespace detail {

// Evaluate f(i) for i in [0, n) on `workers` threads into a dense result
// vector; slot-per-index writes keep the outcome independent of scheduling.
template <typename T, typename F>
std::vector<T> parallel_map(std::int64_t n, int workers, const F& f) {
    std::vector<T> out(static_cast<std::size_t>(n));
    if (workers <= 1 || n < 2) {
        for (std::int64_t i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = f(i);
        return out;
    }
    std::vector<std::thread> pool;
    std::int64_t chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        std::int64_t lo = w * chunk, hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&, lo, hi] {
            for (std::int64_t i = lo; i < hi; ++i) out[static_cast<std::size_t>(i)] = f(i);
        });
    }
    for (auto& t : pool) t.join();
    return out;
}

// Per-sample CSV with the fixed schema: header line, comma separated,
// 12-significant-digit floats.
class SampleCsv {
public:
    SampleCsv(const std::string& path, const std::string& header) : path_(path) {
        if (path_.empty()) return;
        f_ = std::fopen(path_.c_str(), "w");
        if (!f_) throw std::runtime_error("cannot open '" + path_ + "' for writing");
        std::fputs(header.c_str(), f_);
        std::fputs("\n", f_);
    }
    ~SampleCsv() {
        if (f_) std::fclose(f_);
    }
    SampleCsv(const SampleCsv&) = delete;
    SampleCsv& operator=(const SampleCsv&) = delete;

    void row(std::int64_t index, std::initializer_list<double> values) {
        if (!f_) return;
        std::fprintf(f_, "%lld", static_cast<long long>(index));
        for (double v : values) std::fprintf(f_, ",%.12g", v);
        std::fputs("\n", f_);
    }

private:
    std::string path_;
    std::FILE* f_ = nullptr;
};

inline double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace detail

struct ExperimentReport {
    nlohmann::ordered_json config;
    nlohmann::ordered_json ks;        // per-statistic KS distances
    double spearman = 0.0;
    nlohmann::ordered_json d_hat;     // D estimates used
    nlohmann::ordered_json extra;     // further scalar outputs
    std::string csv_path;
    double wall_seconds = 0.0;        // excluded from the determinism contract

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["config"] = config;
        j["ks"] = ks;
        j["spearman"] = spearman;
        j["d_hat"] = d_hat;
        if (!extra.is_null()) j["extra"] = extra;
        if (!csv_path.empty()) j["csv_path"] = csv_path;
        j["wall_seconds"] = wall_seconds;
        return j;
    }
};

enum class Parity { Even, Odd };

// (1/8) sum of the even- resp. odd-indexed partial quotients of the canonical
// expansion: the constant-free main terms of log J_{+-p}.
inline double quotient_sum_stat(const Rational& r, Parity parity) {
    if (r.is_zero()) throw std::domain_error("quotient_sum_stat: r must be nonzero");
    CFExpansion cf = cf_expand(r);
    double s = 0.0;
    for (std::size_t i = parity == Parity::Even ? 1 : 0; i < cf.length(); i += 2)
        s += cf.quotients[i].convert_to<double>();
    return s / 8.0;
}

// Convergent truncation of a grid point: the first convergent of x with
// denominator >= den_min (x itself when its denominator is smaller).
inline Rational truncate_to_denominator(const Rational& x, std::int64_t den_min) {
    if (x.den() < den_min) return x;
    Convergents c = convergents(x);
    for (std::size_t k = 0; k < c.q.size(); ++k) {
        if (c.q[k] >= den_min) return Rational(c.p[k], c.q[k]);
    }
    return x;
}

// Constant term of D_p: -sgn(p) (3/(4 pi^2)) (gamma + log(pi/3)).
inline double dp_constant_term(const PParam& p) {
    return -p.sgn() * 3.0 / (4.0 * std::numbers::pi * std::numbers::pi) *
           (kEulerGamma + std::log(std::numbers::pi / 3.0));
}

// Midpoint-rule estimate of D_p. The integrand g_p is a.e. continuous only,
// and each grid point is evaluated at its convergent truncation with smallest
// denominator >= den_min, so the result is an estimate without a published
// ground truth; self-consistency across grids is the only available check.
inline double estimate_dp(const PParam& p, std::int64_t grid_n, std::int64_t den_min, int workers = 1) {
    if (grid_n < 100) throw std::domain_error("estimate_dp: grid_n must be >= 100");
    if (den_min < 100) throw std::domain_error("estimate_dp: den_min must be >= 100");
    auto vals = detail::parallel_map<double>(grid_n, workers, [&](std::int64_t i) {
        Rational x(2 * i + 1, 2 * grid_n);
        Rational r = truncate_to_denominator(x, den_min);
        if (r.is_zero()) throw std::domain_error("estimate_dp: grid point truncates to 0");
        return gp(r, p) / (1.0 + x.to_double());
    });
    double acc = 0.0;
    for (double v : vals) acc += v;
    double integral = acc / static_cast<double>(grid_n);
    return dp_constant_term(p) + 6.0 / (std::numbers::pi * std::numbers::pi) * integral;
}

// Constant term of D~_p: (3 Vol(4_1)/pi^3)(log(6/pi) - gamma).
inline double dtilde_constant_term() {
    return 3.0 * vol41() / std::pow(std::numbers::pi, 3) * (std::log(6.0 / std::numbers::pi) - kEulerGamma);
}

inline double estimate_dtilde_p(const PParam& p, std::int64_t grid_n, std::int64_t den_min, int workers = 1) {
    if (!p.positive()) throw std::domain_error("estimate_dtilde_p: p must be positive");
    if (grid_n < 100) throw std::domain_error("estimate_dtilde_p: grid_n must be >= 100");
    if (den_min < 100) throw std::domain_error("estimate_dtilde_p: den_min must be >= 100");
    const double volq = vol41() / (4.0 * std::numbers::pi);
    auto vals = detail::parallel_map<double>(grid_n, workers, [&](std::int64_t i) {
        Rational x(2 * i + 1, 2 * grid_n);
        Rational r = truncate_to_denominator(x, den_min);
        if (r.is_zero()) throw std::domain_error("estimate_dtilde_p: grid point truncates to 0");
        double a1 = (Rational(1) / r).floor().convert_to<double>();
        return (htilde_p(r, p) - volq * a1) / (1.0 + x.to_double());
    });
    double acc = 0.0;
    for (double v : vals) acc += v;
    double integral = acc / static_cast<double>(grid_n);
    return dtilde_constant_term() + 12.0 / (std::numbers::pi * std::numbers::pi) * integral;
}

// Expand a double in (0,1) by the Gauss map with exact int64 convergents,
// stopping at the first denominator above q_limit (or when the remainder is
// exhausted, in which case the double is exactly the returned rational).
inline Rational cf_truncate_double(double alpha, std::int64_t q_limit) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("cf_truncate_double: alpha must be in (0,1)");
    std::int64_t pm1 = 1, qm1 = 0, p0 = 0, q0 = 1;
    double x = alpha;
    for (int iter = 0; iter < 100; ++iter) {
        if (x <= 0.0) break;
        double inv = 1.0 / x;
        if (inv > 4.0e18) break;
        std::int64_t a = static_cast<std::int64_t>(inv);
        if (a < 1) a = 1;
        if (static_cast<double>(a) * q0 + qm1 > 4.0e18) break;
        std::int64_t p1 = a * p0 + pm1, q1 = a * q0 + qm1;
        pm1 = p0;
        qm1 = q0;
        p0 = p1;
        q0 = q1;
        x = inv - static_cast<double>(a);
        if (q0 > q_limit) break;
    }
    return Rational(p0, q0);
}

// ---------------------------------------------------------------------------
// Farey pipelines

// The constant-free main-term statistic of the Farey limit law: the pair
// ((sum a_{2j+2}/8 - B_Q)/sigma_Q, (-sum a_{2j+1}/8 + B_Q)/sigma_Q) against
// Stab(1,1) x Stab(1,-1).
inline ExperimentReport run_farey_main_term(std::int64_t Q, std::int64_t n, std::uint64_t seed, int workers = 1,
                                            const std::string& csv_path = "") {
    if (Q < 100 || n < 100) throw std::domain_error("run_farey_main_term: need Q >= 100 and n >= 100");
    auto t0 = std::chrono::steady_clock::now();
    FareySampler sampler(Q, 16);
    const double B = b_q(static_cast<double>(Q));
    const double sigma = sigma_scale(static_cast<double>(Q));

    struct Row {
        double u1, u2;
    };
    auto rows = detail::parallel_map<Row>(n, workers, [&](std::int64_t i) {
        Rng rng = Rng::for_sample(seed, static_cast<std::uint64_t>(i));
        auto [a, q] = sampler.draw(rng);
        Rational r(a, q);
        double even = quotient_sum_stat(r, Parity::Even);
        double odd = quotient_sum_stat(r, Parity::Odd);
        return Row{(even - B) / sigma, (-odd + B) / sigma};
    });

    std::vector<double> u1, u2;
    u1.reserve(rows.size());
    u2.reserve(rows.size());
    for (const Row& r : rows) {
        u1.push_back(r.u1);
        u2.push_back(r.u2);
    }
    StableParams plus(1.0), minus(-1.0);
    ExperimentReport rep;
    rep.config = {{"op", "farey-main-term"}, {"Q", Q}, {"n", n}, {"seed", seed}, {"q_min", 16}};
    detail::SampleCsv csv(csv_path, "index,u_even,u_odd");
    for (std::size_t i = 0; i < rows.size(); ++i) csv.row(static_cast<std::int64_t>(i), {rows[i].u1, rows[i].u2});
    rep.csv_path = csv_path;
    rep.ks["even_vs_stab_plus"] = ks_distance(ECDF(u1), [&](double x) { return stable_cdf(x, plus); });
    rep.ks["odd_vs_stab_minus"] = ks_distance(ECDF(u2), [&](double x) { return stable_cdf(x, minus); });
    rep.spearman = rank_corr(u1, u2);
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

enum class DpMode { Estimated, FittedMedian };

inline const char* dp_mode_name(DpMode m) { return m == DpMode::Estimated ? "estimated" : "fitted-median"; }

// The Farey limit-law statistic with log J_p itself: per-sample normalization
// (log J_p(a/q) - E_{p,q})/sigma_q, jointly for one positive and one negative
// parameter. D_p is either the integral estimate or aligned so the sample
// median matches the stable law's median (both recorded).
inline ExperimentReport run_farey_limit_law(std::int64_t Q, std::int64_t n, const PParam& p, const PParam& pprime,
                                            std::uint64_t seed, DpMode mode = DpMode::Estimated, int workers = 1,
                                            const std::string& csv_path = "") {
    if (Q < 100 || n < 100) throw std::domain_error("run_farey_limit_law: need Q >= 100 and n >= 100");
    if (!p.positive() || pprime.positive())
        throw std::domain_error("run_farey_limit_law: need p > 0 and pprime < 0");
    auto t0 = std::chrono::steady_clock::now();
    FareySampler sampler(Q, 16);

    struct Row {
        double v1, v2, logq;
    };
    auto rows = detail::parallel_map<Row>(n, workers, [&](std::int64_t i) {
        Rng rng = Rng::for_sample(seed, static_cast<std::uint64_t>(i));
        auto [a, q] = sampler.draw(rng);
        Rational r(a, q);
        std::vector<double> ps;
        if (p.is_finite()) ps.push_back(p.value());
        if (pprime.is_finite()) ps.push_back(pprime.value());
        BirkhoffScan scan = prefix_scan(r, q, ps);
        double v1 = p.is_finite() ? scan.lse_at(p.value()) / p.value() : scan.max_value;
        double v2 = pprime.is_finite() ? scan.lse_at(pprime.value()) / pprime.value() : scan.min_value;
        return Row{v1, v2, std::log(static_cast<double>(q))};
    });

    const double c_loglog = 3.0 / (4.0 * std::numbers::pi * std::numbers::pi);
    auto centered = [&](double v, double logq, int sgn) {
        double e0 = sgn * c_loglog * logq * std::log(logq);
        return (v - e0) / (3.0 / (8.0 * std::numbers::pi) * logq);
    };
    std::vector<double> u1, u2;
    u1.reserve(rows.size());
    u2.reserve(rows.size());
    for (const Row& r : rows) {
        u1.push_back(centered(r.v1, r.logq, +1));
        u2.push_back(centered(r.v2, r.logq, -1));
    }

    // The D_p log q term enters the normalized statistic as the constant
    // shift (8 pi / 3) D_p, independent of q.
    StableParams plus(1.0), minus(-1.0);
    double d1, d2;
    if (mode == DpMode::Estimated) {
        d1 = estimate_dp(p, 1000, 400, workers);
        d2 = estimate_dp(pprime, 1000, 400, workers);
    } else {
        double m_plus = stable_quantile(0.5, plus);
        double m_minus = stable_quantile(0.5, minus);
        const double k = 3.0 / (8.0 * std::numbers::pi);
        d1 = k * (detail::median_of(u1) - m_plus);
        d2 = k * (detail::median_of(u2) - m_minus);
    }
    const double shift1 = 8.0 * std::numbers::pi / 3.0 * d1;
    const double shift2 = 8.0 * std::numbers::pi / 3.0 * d2;
    for (double& u : u1) u -= shift1;
    for (double& u : u2) u -= shift2;

    ExperimentReport rep;
    rep.config = {{"op", "farey-law"},         {"Q", Q},       {"n", n},    {"p", p.str()}, {"pprime", pprime.str()},
                  {"seed", seed},              {"q_min", 16},  {"rejected", 0},
                  {"d_p_mode", dp_mode_name(mode)}};
    rep.d_hat = {{"d_p", d1}, {"d_pprime", d2}};
    detail::SampleCsv csv(csv_path, "index,u_p,u_pprime");
    for (std::size_t i = 0; i < u1.size(); ++i) csv.row(static_cast<std::int64_t>(i), {u1[i], u2[i]});
    rep.csv_path = csv_path;
    rep.ks["p_vs_stab_plus"] = ks_distance(ECDF(u1), [&](double x) { return stable_cdf(x, plus); });
    rep.ks["pprime_vs_stab_minus"] = ks_distance(ECDF(u2), [&](double x) { return stable_cdf(x, minus); });
    rep.spearman = rank_corr(u1, u2);
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

// ---------------------------------------------------------------------------
// Random-real pipeline

enum class RealMeasure { Uniform, Gauss };

// Random-real limit-law statistics for alpha ~ mu: per-sample streaming of log J_{p,M}
// over the convergent truncation with q_k > 2M, plus the range statistics
// (max - min - B_M)/(2 sigma_M) and (max + min)/(2 sigma_M). With the tilde
// flag, the Sudler family log J~_{p,M} normalized by E~, sigma~ instead.
inline ExperimentReport run_real_limit_law(std::int64_t M, std::int64_t n, const PParam& p, const PParam& pprime,
                                           std::uint64_t seed, RealMeasure measure, bool tilde = false,
                                           int workers = 1, const std::string& csv_path = "") {
    if (M < 1000 || n < 10) throw std::domain_error("run_real_limit_law: need M >= 1000 and n >= 10");
    if (!p.positive() || pprime.positive())
        throw std::domain_error("run_real_limit_law: need p > 0 and pprime < 0");
    auto t0 = std::chrono::steady_clock::now();

    struct Row {
        double v1, v2, mx, mn;
    };
    auto rows = detail::parallel_map<Row>(n, workers, [&](std::int64_t i) {
        Rng rng = Rng::for_sample(seed, static_cast<std::uint64_t>(i));
        double u = rng.uniform01();
        double alpha = measure == RealMeasure::Uniform ? u : std::exp2(u) - 1.0;
        Rational r = cf_truncate_double(alpha, 2 * M);
        std::int64_t horizon = std::min<std::int64_t>(M, r.den().convert_to<std::int64_t>());
        if (tilde) {
            std::vector<double> ps;
            if (p.is_finite()) ps.push_back(p.value());
            if (pprime.is_finite()) ps.push_back(pprime.value());
            SudlerScan scan = sudler_scan(r, horizon, ps);
            double v1 = p.is_finite() ? scan.lse_at(p.value()) / p.value() : scan.max_value;
            double v2 = pprime.is_finite() ? scan.lse_at(pprime.value()) / pprime.value() : scan.min_value;
            return Row{v1, v2, scan.max_value, scan.min_value};
        }
        std::vector<double> ps;
        if (p.is_finite()) ps.push_back(p.value());
        if (pprime.is_finite()) ps.push_back(pprime.value());
        BirkhoffScan scan = prefix_scan(r, M, ps);
        double v1 = p.is_finite() ? scan.lse_at(p.value()) / p.value() : scan.max_value;
        double v2 = pprime.is_finite() ? scan.lse_at(pprime.value()) / pprime.value() : scan.min_value;
        return Row{v1, v2, scan.max_value, scan.min_value};
    });

    ExperimentReport rep;
    rep.config = {{"op", "real-law"},
                  {"M", M},
                  {"n", n},
                  {"p", p.str()},
                  {"pprime", pprime.str()},
                  {"seed", seed},
                  {"measure", measure == RealMeasure::Uniform ? "uniform" : "gauss"},
                  {"tilde", tilde}};
    const double Md = static_cast<double>(M);

    if (tilde) {
        double dt = estimate_dtilde_p(p, 400, 400, workers);
        double e1 = e_tilde_p_scale(Md, dt);
        double st = sigma_tilde_scale(Md);
        std::vector<double> u1;
        u1.reserve(rows.size());
        for (const Row& r : rows) u1.push_back((r.v1 - e1) / st);
        StableParams plus(1.0);
        rep.d_hat = {{"d_tilde_p", dt}};
        NormalizationParams norm{e1, st, 0.0, "real(" + std::to_string(M) + ")", p.str()};
        rep.extra = {{"e_tilde_p_m", norm.E}, {"sigma_tilde_m", norm.sigma}, {"context", norm.context}};
        detail::SampleCsv csv(csv_path, "index,u_tilde_p");
        for (std::size_t i = 0; i < u1.size(); ++i) csv.row(static_cast<std::int64_t>(i), {u1[i]});
        rep.csv_path = csv_path;
        rep.ks["tilde_p_vs_stab_plus"] = ks_distance(ECDF(u1), [&](double x) { return stable_cdf(x, plus); });
        std::vector<double> u2;
        u2.reserve(rows.size());
        for (const Row& r : rows) u2.push_back((r.v2 + e1) / st);
        rep.spearman = rank_corr(u1, u2);
        rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return rep;
    }

    double d1 = estimate_dp(p, 1000, 400, workers);
    double d2 = estimate_dp(pprime, 1000, 400, workers);
    double d_inf = p.is_finite() ? estimate_dp(PParam::plus_inf(), 1000, 400, workers) : d1;
    double e1 = e_p_scale(Md, p, d1);
    double e2 = e_p_scale(Md, pprime, d2);
    double sg = sigma_scale(Md);
    double e_inf = e_p_scale(Md, PParam::plus_inf(), d_inf);
    double bm = b_m(Md, d_inf);

    std::vector<double> u1, u2, diam, center;
    u1.reserve(rows.size());
    u2.reserve(rows.size());
    diam.reserve(rows.size());
    center.reserve(rows.size());
    for (const Row& r : rows) {
        u1.push_back((r.v1 - e1) / sg);
        u2.push_back((r.v2 - e2) / sg);
        diam.push_back((r.mx - r.mn - bm) / (2.0 * sg));
        center.push_back((r.mx + r.mn) / (2.0 * sg));
    }
    StableParams plus(1.0), minus(-1.0), cauchy(0.0);
    rep.d_hat = {{"d_p", d1}, {"d_pprime", d2}, {"d_inf", d_inf}};
    NormalizationParams norm{e1, sg, bm, "real(" + std::to_string(M) + ")", p.str()};
    rep.extra = {{"e_p_m", norm.E},   {"e_inf_m", e_inf},        {"sigma_m", norm.sigma},
                 {"b_m", norm.B},     {"context", norm.context}, {"p", norm.p}};
    detail::SampleCsv csv(csv_path, "index,u_p,u_pprime,diameter,center");
    for (std::size_t i = 0; i < u1.size(); ++i)
        csv.row(static_cast<std::int64_t>(i), {u1[i], u2[i], diam[i], center[i]});
    rep.csv_path = csv_path;
    rep.ks["p_vs_stab_plus"] = ks_distance(ECDF(u1), [&](double x) { return stable_cdf(x, plus); });
    rep.ks["pprime_vs_stab_minus"] = ks_distance(ECDF(u2), [&](double x) { return stable_cdf(x, minus); });
    rep.ks["diameter_vs_stab_plus"] = ks_distance(ECDF(diam), [&](double x) { return stable_cdf(x, plus); });
    rep.ks["center_vs_cauchy"] = ks_distance(ECDF(center), [&](double x) { return stable_cdf(x, cauchy); });
    rep.spearman = rank_corr(u1, u2);
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

}  // namespace rotsum
