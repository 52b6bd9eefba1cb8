// Command-line front end: continued-fraction inspection, the h_p / W_p
// functionals, figure CSV emission, the volume-growth residual table,
// quadratic-irrational constants, the Monte Carlo limit-law experiments, the
// D_p estimators, and stable-law CDF evaluation.

#include "rotsum/rotsum.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

rotsum::Rational parse_rational(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return rotsum::Rational(rotsum::BigInt(s));
    return rotsum::Rational(rotsum::BigInt(s.substr(0, slash)), rotsum::BigInt(s.substr(slash + 1)));
}

std::int64_t parse_count(const std::string& s) {
    double v = std::stod(s);
    if (!(v >= 0 && v < 9.0e18)) throw CLI::ValidationError("count out of range: " + s);
    return static_cast<std::int64_t>(v);
}

void write_json(const std::string& path, const nlohmann::ordered_json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "'");
    out << j.dump(2) << "\n";
    std::printf("report written to %s\n", path.c_str());
}

void print_report(const rotsum::ExperimentReport& rep, const std::string& json_path) {
    std::printf("%-28s %s\n", "config", rep.config.dump().c_str());
    for (auto& [k, v] : rep.ks.items()) std::printf("%-28s %.6f\n", ("ks." + k).c_str(), v.get<double>());
    std::printf("%-28s %+.6f\n", "spearman", rep.spearman);
    for (auto& [k, v] : rep.d_hat.items()) std::printf("%-28s %+.6f\n", ("d_hat." + k).c_str(), v.get<double>());
    std::printf("%-28s %.3f\n", "wall_seconds", rep.wall_seconds);
    if (!json_path.empty()) write_json(json_path, rep.to_json());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Birkhoff-sum functionals of circle rotations: exact kernels and limit-law experiments"};
    app.require_subcommand(1);
    int workers = 2;
    app.add_option("--workers", workers, "worker threads for sample loops");

    std::string r_str, p_str = "inf", json_path;

    auto* cf_cmd = app.add_subcommand("cf", "continued fraction expansion and convergents of a rational");
    cf_cmd->add_option("rational", r_str, "argument as num/den in [0,1)")->required();

    auto* hp_cmd = app.add_subcommand("hp", "h_p, g_p and the asymptotic main term at a rational");
    hp_cmd->add_option("--p", p_str, "p: finite nonzero, inf, or -inf")->required();
    hp_cmd->add_option("--r", r_str, "argument as num/den")->required();

    auto* wp_cmd = app.add_subcommand("wp", "one-sided limit value W_p at a rational");
    wp_cmd->add_option("--p", p_str, "p: finite nonzero, inf, or -inf")->required();
    wp_cmd->add_option("--r", r_str, "argument as num/den")->required();

    std::string fig_name = "f1", out_path = "figure.csv";
    std::int64_t den_max = 150;
    auto* fig_cmd = app.add_subcommand("figures", "emit a figure CSV");
    fig_cmd->add_option("--fig", fig_name, "f1, f2a, f2b, f3a, f3b, f4a..f4d")->required();
    fig_cmd->add_option("--den-max", den_max, "largest denominator");
    fig_cmd->add_option("--out", out_path, "output CSV path")->required();

    std::string q_list = "250,500,1000,2000";
    auto* vol_cmd = app.add_subcommand("volume", "growth residual of log J~_2(1/q) against the volume law");
    vol_cmd->add_option("--q-list", q_list, "comma-separated q values");

    std::string surd_name = "sqrt2", mmax_str = "1e7";
    auto* quad_cmd = app.add_subcommand("quadratic", "C_p slope estimate at a quadratic irrational");
    quad_cmd->add_option("--surd", surd_name, "sqrt2, sqrt3, or golden");
    quad_cmd->add_option("--p", p_str, "inf or -inf (finite p: estimate only)");
    quad_cmd->add_option("--m-max", mmax_str, "scan horizon, e.g. 1e7");

    std::int64_t Q = 10000, n = 1000;
    std::uint64_t seed = 1;
    std::string pprime_str = "-inf", mode_str = "estimated";
    bool main_term_only = false;
    auto* farey_cmd = app.add_subcommand("farey-law", "limit-law experiment over random Farey fractions");
    farey_cmd->add_option("--Q", Q, "Farey order");
    farey_cmd->add_option("--n", n, "sample count");
    farey_cmd->add_option("--p", p_str, "positive parameter");
    farey_cmd->add_option("--pprime", pprime_str, "negative parameter");
    farey_cmd->add_option("--seed", seed, "RNG seed");
    farey_cmd->add_option("--d-p-mode", mode_str, "estimated or fitted-median");
    farey_cmd->add_flag("--main-term-only", main_term_only, "constant-free partial-quotient statistic only");
    farey_cmd->add_option("--json", json_path, "write the report as JSON");
    std::string csv_path;
    farey_cmd->add_option("--csv", csv_path, "write per-sample statistics as CSV");

    std::string m_str = "1e6", measure_str = "uniform";
    bool tilde = false;
    auto* real_cmd = app.add_subcommand("real-law", "limit-law experiment over random reals");
    real_cmd->add_option("--M", m_str, "scan horizon");
    real_cmd->add_option("--n", n, "sample count");
    real_cmd->add_option("--p", p_str, "positive parameter");
    real_cmd->add_option("--pprime", pprime_str, "negative parameter");
    real_cmd->add_option("--measure", measure_str, "uniform or gauss");
    real_cmd->add_option("--seed", seed, "RNG seed");
    real_cmd->add_flag("--tilde", tilde, "Sudler family instead of S_N");
    real_cmd->add_option("--json", json_path, "write the report as JSON");
    real_cmd->add_option("--csv", csv_path, "write per-sample statistics as CSV");

    std::int64_t grid_n = 2000, den_min = 1000;
    auto* dp_cmd = app.add_subcommand("estimate-dp", "integral estimate of the centering constant D_p");
    dp_cmd->add_option("--p", p_str, "parameter");
    dp_cmd->add_option("--grid-n", grid_n, "midpoint grid size");
    dp_cmd->add_option("--den-min", den_min, "denominator floor for the truncation");
    dp_cmd->add_flag("--tilde", tilde, "estimate D~_p instead");

    double beta = 0.0, x = 0.0;
    auto* st_cmd = app.add_subcommand("stable-cdf", "CDF of Stab(1, beta)");
    st_cmd->add_option("--beta", beta, "skewness in [-1,1]")->required();
    st_cmd->add_option("--x", x, "evaluation point")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        using namespace rotsum;
        if (cf_cmd->parsed()) {
            Rational r = parse_rational(r_str);
            CFExpansion cf = cf_expand(r);
            std::printf("r = %s = [0;", r.str().c_str());
            for (std::size_t i = 0; i < cf.length(); ++i)
                std::printf("%s%s", i ? "," : " ", cf.quotients[i].str().c_str());
            std::printf("]\n");
            Convergents c = convergents(cf);
            for (std::size_t k = 0; k < c.q.size(); ++k)
                std::printf("  p_%zu/q_%zu = %s/%s\n", k, k, c.p[k].str().c_str(), c.q[k].str().c_str());
            if (cf.length() >= 1) {
                CFExpansion alt = cf_alternate(cf);
                std::printf("alternate = [0;");
                for (std::size_t i = 0; i < alt.length(); ++i)
                    std::printf("%s%s", i ? "," : " ", alt.quotients[i].str().c_str());
                std::printf("]\n");
            }
        } else if (hp_cmd->parsed()) {
            Rational r = parse_rational(r_str);
            PParam p = PParam::parse(p_str);
            std::printf("h_%s(%s)        = %.12g\n", p.str().c_str(), r.str().c_str(), hp(r, p));
            if (!p.is_finite())
                std::printf("  exact          = %s\n", hp_exact(r, p.positive()).str().c_str());
            std::printf("g_%s(%s)        = %.12g\n", p.str().c_str(), r.str().c_str(), gp(r, p));
            std::printf("main_term       = %.12g\n", main_term(r, p));
            std::printf("asymptotic_term = %.12g\n", asymptotic_term(r, p));
        } else if (wp_cmd->parsed()) {
            Rational r = parse_rational(r_str);
            PParam p = PParam::parse(p_str);
            std::printf("W_%s(%s) = %.12g\n", p.str().c_str(), r.str().c_str(), wp(r, p));
            if (!p.is_finite()) std::printf("  exact  = %s\n", wp_exact(r, p.positive()).str().c_str());
        } else if (fig_cmd->parsed()) {
            std::int64_t rows = emit_figure(fig_name, den_max, out_path);
            std::printf("%s: %lld rows -> %s\n", fig_name.c_str(), static_cast<long long>(rows), out_path.c_str());
        } else if (vol_cmd->parsed()) {
            std::printf("Vol(4_1) = %.9f\n", vol41());
            std::printf("%8s %16s %18s\n", "q", "residual", "residual+log(3)/8");
            std::string item;
            std::stringstream ss(q_list);
            while (std::getline(ss, item, ',')) {
                std::int64_t q = parse_count(item);
                double res = volume_residual(q);
                std::printf("%8lld %16.8f %18.8f\n", static_cast<long long>(q), res, res + std::log(3.0) / 8.0);
            }
        } else if (quad_cmd->parsed()) {
            PParam p = PParam::parse(p_str);
            QuadraticSurd surd = surd_name == "sqrt2"    ? surd_sqrt2_minus_1()
                                 : surd_name == "sqrt3"  ? surd_sqrt3_minus_1()
                                 : surd_name == "golden" ? surd_golden()
                                                         : throw CLI::ValidationError("unknown surd: " + surd_name);
            PeriodicCF pcf = surd_cf(surd);
            std::printf("%s: preperiod [", surd_name.c_str());
            for (auto& a : pcf.preperiod) std::printf(" %s", a.str().c_str());
            std::printf(" ], period [");
            for (auto& a : pcf.period) std::printf(" %s", a.str().c_str());
            std::printf(" ]\n");
            CpEstimate est = estimate_cp(pcf, p, parse_count(mmax_str));
            std::printf("C_%s estimate = %.6f +- %.6f (base q = %lld)\n", p.str().c_str(), est.slope,
                        est.ci_halfwidth, static_cast<long long>(est.base_q));
            if (!p.is_finite() && (surd_name == "sqrt2" || surd_name == "sqrt3")) {
                double known = known_cp(surd_name, p);
                std::printf("closed form    = %.6f  (relative error %.2f%%)\n", known,
                            100.0 * std::abs(est.slope - known) / std::abs(known));
            }
        } else if (farey_cmd->parsed()) {
            ExperimentReport rep =
                main_term_only
                    ? run_farey_main_term(Q, n, seed, workers, csv_path)
                    : run_farey_limit_law(Q, n, PParam::parse(p_str), PParam::parse(pprime_str), seed,
                                          mode_str == "fitted-median" ? DpMode::FittedMedian : DpMode::Estimated,
                                          workers, csv_path);
            print_report(rep, json_path);
        } else if (real_cmd->parsed()) {
            ExperimentReport rep = run_real_limit_law(
                parse_count(m_str), n, PParam::parse(p_str), PParam::parse(pprime_str), seed,
                measure_str == "gauss" ? RealMeasure::Gauss : RealMeasure::Uniform, tilde, workers, csv_path);
            print_report(rep, json_path);
        } else if (dp_cmd->parsed()) {
            PParam p = PParam::parse(p_str);
            double d = tilde ? estimate_dtilde_p(p, grid_n, den_min, workers)
                             : estimate_dp(p, grid_n, den_min, workers);
            std::printf("%s(%s) = %+.6f   (grid_n=%lld, den_min=%lld; estimate)\n", tilde ? "D~" : "D",
                        p.str().c_str(), d, static_cast<long long>(grid_n), static_cast<long long>(den_min));
            std::printf("constant term = %+.6f\n", tilde ? dtilde_constant_term() : dp_constant_term(p));
        } else if (st_cmd->parsed()) {
            StableParams params(beta);
            std::printf("F(%g; beta=%g) = %.9f\n", x, beta, stable_cdf(x, params));
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
