#pragma once

// The stable laws Stab(1, beta) with characteristic function
//   phi(t) = exp(-|t| (1 + i beta (2/pi) sgn(t) log|t|)),   |beta| <= 1,
// their CDF by Gil-Pelaez inversion, the squared-CDF law of max{X,Y}, a
// cached monotone-interpolated CDF for inverse sampling, Kolmogorov-Smirnov
// distances, and Spearman rank correlation.
//
// beta = 0 is the standard Cauchy law; that case is still computed through
// the inversion integral so the analytic CDF stays an independent oracle.

#include "rotsum/quadrature.hpp"
#include "rotsum/rng.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace rotsum {

struct StableParams {
    double beta = 0.0;

    explicit StableParams(double b) : beta(b) {
        if (!(b >= -1.0 && b <= 1.0)) throw std::domain_error("StableParams: |beta| <= 1 required");
    }
};

inline std::complex<double> stable_cf(double t, const StableParams& params) {
    if (t == 0.0) return {1.0, 0.0};
    double mag = std::exp(-std::abs(t));
    double phase = -params.beta * (2.0 / std::numbers::pi) * t * std::log(std::abs(t));
    return {mag * std::cos(phase), mag * std::sin(phase)};
}

namespace detail {

// One Gauss-Kronrod pass of the inversion integrand e^{-t} sin(t x + c t log t)/t
// over [a, b], plus an error estimate.
inline GKResult stable_panel(double x, double c, double a, double b) {
    return gk15(
        [x, c](double t) {
            double theta = t * x + c * t * std::log(t);
            return std::exp(-t) * std::sin(theta) / t;
        },
        a, b);
}

}  // namespace detail

// CDF of Stab(1, beta). Gil-Pelaez: F(x) = 1/2 + (1/pi) I(x) with
// I(x) = int_0^inf e^{-t} sin(t x + beta (2/pi) t log t)/t dt. The integrand
// oscillates with phase derivative x + beta(2/pi)(1 + log t); panels are
// geometric below pi/(|x|+15) (where 1/t dominates) and phase-sized above,
// truncated at t = 45 where e^{-t} is below 3e-20. Direct integration covers
// |x| <= 5000; beyond that the first-order tail (1+beta)/(pi x) is used.
inline double stable_cdf(double x, const StableParams& params) {
    if (std::isnan(x)) throw std::domain_error("stable_cdf: x is NaN");
    const double pi = std::numbers::pi;
    const double c = params.beta * 2.0 / pi;
    const double direct_limit = 5000.0;

    if (x > direct_limit) return std::min(1.0, 1.0 - (1.0 + params.beta) / (pi * x));
    if (x < -direct_limit) return std::max(0.0, (1.0 - params.beta) / (pi * -x));

    const double delta = 1e-8;
    const double t_end = 45.0;
    double integral = x * delta + c * delta * (std::log(delta) - 1.0);  // analytic head on [0, delta]
    double err_total = 0.0;

    const double width = pi / (std::abs(x) + 15.0);
    double t = delta;
    while (t < t_end) {
        double next = t < width ? std::min(2.0 * t, t_end) : std::min(t + width, t_end);
        detail::GKResult r = detail::stable_panel(x, c, t, next);
        integral += r.value;
        err_total += r.error;
        t = next;
    }
    if (err_total > 1e-6) throw std::runtime_error("stable_cdf: inversion quadrature did not converge");
    double f = 0.5 + integral / pi;
    return std::clamp(f, 0.0, 1.0);
}

// CDF of max{X, Y} for independent X, Y ~ Stab(1,1): the square of the CDF.
inline double max2_cdf(double x) { return std::pow(stable_cdf(x, StableParams(1.0)), 2); }

// Quantile by bisection on stable_cdf.
inline double stable_quantile(double u, const StableParams& params) {
    if (!(u > 0.0 && u < 1.0)) throw std::domain_error("stable_quantile: u must be in (0,1)");
    double lo = -1e5, hi = 1e5;
    for (int i = 0; i < 200 && hi - lo > 1e-10 * (1.0 + std::abs(lo)); ++i) {
        double mid = 0.5 * (lo + hi);
        if (stable_cdf(mid, params) < u)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

// CDF cached on a bulk-uniform plus tail-geometric grid with monotone linear
// interpolation; shared read-only by samplers and the KS inner loop.
class StableCdfCache {
public:
    explicit StableCdfCache(const StableParams& params) : params_(params) {
        const double bulk = 24.0, step = 1.0 / 64.0;
        std::vector<double> xs;
        for (double x = -bulk; x <= bulk + 1e-12; x += step) xs.push_back(x);
        for (double x = bulk * 1.03; x < 1e5; x *= 1.03) {
            xs.push_back(x);
            xs.push_back(-x);
        }
        std::sort(xs.begin(), xs.end());
        x_ = std::move(xs);
        f_.resize(x_.size());
        for (std::size_t i = 0; i < x_.size(); ++i) f_[i] = stable_cdf(x_[i], params_);
        for (std::size_t i = 1; i < f_.size(); ++i) f_[i] = std::max(f_[i], f_[i - 1]);  // monotone correction
    }

    double cdf(double x) const {
        if (x <= x_.front()) return f_.front();
        if (x >= x_.back()) return std::min(1.0, 1.0 - (1.0 + params_.beta) / (std::numbers::pi * x));
        auto it = std::upper_bound(x_.begin(), x_.end(), x);
        std::size_t i = static_cast<std::size_t>(it - x_.begin());
        double w = (x - x_[i - 1]) / (x_[i] - x_[i - 1]);
        return f_[i - 1] + w * (f_[i] - f_[i - 1]);
    }

    double quantile(double u) const {
        if (!(u > 0.0 && u < 1.0)) throw std::domain_error("StableCdfCache: u must be in (0,1)");
        if (u >= f_.back()) {  // invert the right-tail asymptotic
            double tail = 1.0 - u;
            return std::min(1e9, (1.0 + params_.beta) / (std::numbers::pi * tail));
        }
        if (u <= f_.front()) {
            double lo = (1.0 - params_.beta) / std::numbers::pi;
            return lo > 0.0 ? std::max(-1e9, -lo / u) : x_.front();
        }
        auto it = std::lower_bound(f_.begin(), f_.end(), u);
        std::size_t i = static_cast<std::size_t>(it - f_.begin());
        if (i == 0) return x_.front();
        double span = f_[i] - f_[i - 1];
        double w = span > 0.0 ? (u - f_[i - 1]) / span : 0.5;
        return x_[i - 1] + w * (x_[i] - x_[i - 1]);
    }

    double sample(Rng& rng) const { return quantile(rng.uniform01()); }

    const StableParams& params() const { return params_; }

private:
    StableParams params_;
    std::vector<double> x_;
    std::vector<double> f_;
};

// Empirical distribution of a sample; evaluation is the right-continuous step
// function.
class ECDF {
public:
    explicit ECDF(std::vector<double> samples) : sorted_(std::move(samples)) {
        if (sorted_.empty()) throw std::domain_error("ECDF: empty sample");
        std::sort(sorted_.begin(), sorted_.end());
    }

    double operator()(double x) const {
        auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
        return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
    }

    const std::vector<double>& sorted() const { return sorted_; }

private:
    std::vector<double> sorted_;
};

// sup_x |ECDF(x) - F(x)|, evaluated through both one-sided gaps at the sample
// points.
template <typename Cdf>
double ks_distance(const ECDF& ecdf, const Cdf& cdf) {
    const auto& xs = ecdf.sorted();
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double f = cdf(xs[i]);
        d = std::max(d, f - static_cast<double>(i) / n);
        d = std::max(d, static_cast<double>(i + 1) / n - f);
    }
    return d;
}

namespace detail {

inline std::vector<double> average_ranks(const std::vector<double>& v) {
    const std::size_t n = v.size();
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
        double r = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = r;
        i = j + 1;
    }
    return ranks;
}

}  // namespace detail

// Spearman rank correlation. Moment correlations are useless here: stable
// laws with stability index 1 have no mean.
inline double rank_corr(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) throw std::domain_error("rank_corr: length mismatch");
    if (xs.size() < 2) throw std::domain_error("rank_corr: need at least two pairs");
    std::vector<double> rx = detail::average_ranks(xs), ry = detail::average_ranks(ys);
    const double n = static_cast<double>(xs.size());
    double mean = 0.5 * (n + 1.0);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double ax = rx[i] - mean, ay = ry[i] - mean;
        sxy += ax * ay;
        sxx += ax * ax;
        syy += ay * ay;
    }
    if (sxx == 0.0 || syy == 0.0) throw std::domain_error("rank_corr: degenerate ranking");
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace rotsum
