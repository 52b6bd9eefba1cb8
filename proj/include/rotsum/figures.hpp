#pragma once

// CSV emitters for the standard plots of these functionals: the maximum over
// the Farey fractions (f1), h_{+-inf} over [0,1) (f2a, f2b), the window
// [0.37, 0.38] at denominators up to 600 (f3a: h_inf, f3b: h_2), and the
// self-similar residuals h_p minus the asymptotic main term for
// p = inf, -inf, 2, -2 (f4a..f4d).
//
// Schema is fixed: one header line, comma-separated, decimal-dot floats with
// 12 significant digits, rows ordered by the rational argument.

#include "rotsum/farey.hpp"
#include "rotsum/moments.hpp"

#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace rotsum {

enum class FigureId { F1, F2a, F2b, F3a, F3b, F4a, F4b, F4c, F4d };

inline FigureId figure_from_name(const std::string& name) {
    if (name == "f1") return FigureId::F1;
    if (name == "f2a") return FigureId::F2a;
    if (name == "f2b") return FigureId::F2b;
    if (name == "f3a") return FigureId::F3a;
    if (name == "f3b") return FigureId::F3b;
    if (name == "f4a") return FigureId::F4a;
    if (name == "f4b") return FigureId::F4b;
    if (name == "f4c") return FigureId::F4c;
    if (name == "f4d") return FigureId::F4d;
    throw std::domain_error("unknown figure '" + name + "'");
}

namespace detail {

class CsvWriter {
public:
    explicit CsvWriter(const std::string& path) : path_(path), f_(std::fopen(path.c_str(), "w")) {
        if (!f_) throw std::runtime_error("cannot open '" + path + "' for writing");
        std::fputs("num,den,value,statistic\n", f_);
    }
    ~CsvWriter() {
        if (f_) std::fclose(f_);
    }
    CsvWriter(const CsvWriter&) = delete;
    CsvWriter& operator=(const CsvWriter&) = delete;

    void row(std::int64_t num, std::int64_t den, double value, double stat) {
        if (std::fprintf(f_, "%lld,%lld,%.12g,%.12g\n", static_cast<long long>(num), static_cast<long long>(den),
                         value, stat) < 0)
            throw std::runtime_error("write failure on '" + path_ + "'");
        ++count_;
    }

    std::int64_t count() const { return count_; }

private:
    std::string path_;
    std::FILE* f_;
    std::int64_t count_ = 0;
};

}  // namespace detail

// Writes the figure CSV and returns the row count.
inline std::int64_t emit_figure(FigureId fig, std::int64_t den_max, const std::string& out_path) {
    if (den_max < 2) throw std::domain_error("emit_figure: den_max must be >= 2");
    detail::CsvWriter csv(out_path);

    auto hp_minus_asym = [&](const Rational& r, const PParam& p) { return hp(r, p) - asymptotic_term(r, p); };

    switch (fig) {
        case FigureId::F1:
            farey_enumerate(den_max, [&](std::int64_t a, std::int64_t q) {
                Rational r(a, q);
                double stat = r >= Rational(1) ? 0.0 : log_jp_exact(r, true).to_double();
                csv.row(a, q, r.to_double(), stat);
            });
            break;
        case FigureId::F2a:
        case FigureId::F2b: {
            bool maximum = fig == FigureId::F2a;
            farey_enumerate(den_max, [&](std::int64_t a, std::int64_t q) {
                if (a == q) return;  // domain is [0,1)
                Rational r(a, q);
                csv.row(a, q, r.to_double(), hp_exact(r, maximum).to_double());
            });
            break;
        }
        case FigureId::F3a:
        case FigureId::F3b: {
            std::vector<std::pair<std::int64_t, std::int64_t>> window;
            for (std::int64_t q = 1; q <= den_max; ++q) {
                std::int64_t lo = (37 * q + 99) / 100, hi = 38 * q / 100;
                for (std::int64_t a = lo; a <= hi; ++a)
                    if (std::gcd(a, q) == 1) window.emplace_back(a, q);
            }
            std::sort(window.begin(), window.end(),
                      [](const auto& x, const auto& y) { return x.first * y.second < y.first * x.second; });
            for (auto [a, q] : window) {
                Rational r(a, q);
                double stat = fig == FigureId::F3a ? hp_exact(r, true).to_double() : hp(r, PParam::finite(2.0));
                csv.row(a, q, r.to_double(), stat);
            }
            break;
        }
        case FigureId::F4a:
        case FigureId::F4b:
        case FigureId::F4c:
        case FigureId::F4d: {
            PParam p = fig == FigureId::F4a   ? PParam::plus_inf()
                       : fig == FigureId::F4b ? PParam::minus_inf()
                       : fig == FigureId::F4c ? PParam::finite(2.0)
                                              : PParam::finite(-2.0);
            farey_enumerate(den_max, [&](std::int64_t a, std::int64_t q) {
                if (a == 0 || a == q) return;  // the residual needs 0 < r < 1
                Rational r(a, q);
                csv.row(a, q, r.to_double(), hp_minus_asym(r, p));
            });
            break;
        }
    }
    return csv.count();
}

inline std::int64_t emit_figure(const std::string& name, std::int64_t den_max, const std::string& out_path) {
    return emit_figure(figure_from_name(name), den_max, out_path);
}

}  // namespace rotsum
