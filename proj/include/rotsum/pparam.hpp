#pragma once

// The moment parameter p in (-inf,0) u (0,inf) u {+inf, -inf}, selecting
// between exponential-moment sums (finite p) and extrema (p = +-inf).

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace rotsum {

class PParam {
public:
    static PParam finite(double v) {
        if (v == 0.0 || !std::isfinite(v)) throw std::domain_error("PParam: finite p must be nonzero and finite");
        return PParam(Kind::Finite, v);
    }
    static PParam plus_inf() { return PParam(Kind::PlusInf, 0.0); }
    static PParam minus_inf() { return PParam(Kind::MinusInf, 0.0); }

    static PParam parse(const std::string& s) {
        if (s == "inf" || s == "+inf") return plus_inf();
        if (s == "-inf") return minus_inf();
        return finite(std::stod(s));
    }

    bool is_finite() const { return kind_ == Kind::Finite; }
    bool positive() const { return kind_ == Kind::PlusInf || (kind_ == Kind::Finite && value_ > 0.0); }
    int sgn() const { return positive() ? 1 : -1; }

    // Finite value; only meaningful when is_finite().
    double value() const {
        if (!is_finite()) throw std::logic_error("PParam: no finite value for p = +-inf");
        return value_;
    }

    // 1/(2p), with the convention that it vanishes at p = +-inf.
    double half_reciprocal() const { return is_finite() ? 0.5 / value_ : 0.0; }

    std::string str() const {
        if (kind_ == Kind::PlusInf) return "inf";
        if (kind_ == Kind::MinusInf) return "-inf";
        char buf[32];
        std::snprintf(buf, sizeof buf, "%g", value_);
        return buf;
    }

    bool operator==(const PParam& o) const { return kind_ == o.kind_ && value_ == o.value_; }

private:
    enum class Kind { Finite, PlusInf, MinusInf };
    PParam(Kind k, double v) : kind_(k), value_(v) {}
    Kind kind_;
    double value_;
};

// The index-parity selector: 2 for p > 0 (including +inf), 1 for p < 0.
inline int epsilon_p(const PParam& p) { return p.positive() ? 2 : 1; }

}  // namespace rotsum
