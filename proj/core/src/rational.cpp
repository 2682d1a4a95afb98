#include "sinv/rational.hpp"

#include <cmath>

namespace sinv {

RationalFunction::RationalFunction(Polynomial num, Polynomial den)
    : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw DivisionByZeroRational();
    if (num_.is_zero()) {
        den_ = Polynomial::constant(1.0);
        return;
    }
    Polynomial g = poly_gcd(num_, den_);
    if (g.degree() >= 1) {
        // Floating-point Euclid can return a spurious factor on ill-conditioned
        // operands; cancel only if it genuinely divides both.
        auto [qn, rn] = poly_divmod(num_, g);
        auto [qd, rd] = poly_divmod(den_, g);
        if (rn.max_coeff() <= kCoeffTol * num_.max_coeff() &&
            rd.max_coeff() <= kCoeffTol * den_.max_coeff()) {
            num_ = std::move(qn);
            den_ = std::move(qd);
            cancelled_ = true;
        }
    }
    double lead = den_.leading();
    num_ = num_ * (1.0 / lead);
    den_ = den_ * (1.0 / lead);
}

std::complex<double> RationalFunction::eval(std::complex<double> s0) const {
    std::complex<double> d = den_.eval(s0);
    // Pole threshold relative to the term-magnitude bound sum |c_k||s0|^k;
    // a power-of-degree bound misfires badly once degrees grow.
    double scale = 0.0, pw = 1.0, as = std::abs(s0);
    for (double c : den_.coeffs()) {
        scale += std::abs(c) * pw;
        pw *= as;
    }
    if (std::abs(d) <= kEvalTol * scale)
        throw PoleAtEvaluationPoint("evaluation at a pole: s0 = " + std::to_string(s0.real()) +
                                    (s0.imag() >= 0 ? "+" : "") + std::to_string(s0.imag()) + "j");
    return num_.eval(s0) / d;
}

RationalFunction RationalFunction::operator+(const RationalFunction& o) const {
    // Both denominators are canonical (monic), so equal denominators compare
    // directly; skipping the cross product keeps degrees from snowballing in
    // accumulation loops.
    if (den_.same_as(o.den_, 1e-12)) return {num_ + o.num_, den_};
    return {num_ * o.den_ + o.num_ * den_, den_ * o.den_};
}

RationalFunction RationalFunction::operator-(const RationalFunction& o) const {
    if (den_.same_as(o.den_, 1e-12)) return {num_ - o.num_, den_};
    return {num_ * o.den_ - o.num_ * den_, den_ * o.den_};
}

RationalFunction RationalFunction::operator*(const RationalFunction& o) const {
    // Cross-cancel before multiplying; keeps degrees (and conditioning) down.
    RationalFunction a(num_, o.den_), b(o.num_, den_);
    RationalFunction out(a.num_ * b.num_, a.den_ * b.den_);
    out.cancelled_ = out.cancelled_ || a.cancelled_ || b.cancelled_;
    return out;
}

RationalFunction RationalFunction::operator/(const RationalFunction& o) const {
    if (o.is_zero()) throw DivisionByZeroRational();
    return *this * o.reciprocal();
}

RationalFunction RationalFunction::operator-() const { return {-num_, den_}; }

RationalFunction RationalFunction::operator*(double k) const { return {num_ * k, den_}; }

RationalFunction RationalFunction::pow(int e) const {
    RationalFunction acc = constant(1.0);
    for (int i = 0; i < e; ++i) acc = acc * *this;
    return acc;
}

RationalFunction RationalFunction::reciprocal() const {
    if (is_zero()) throw DivisionByZeroRational();
    return {den_, num_};
}

bool RationalFunction::same_as(const RationalFunction& o, double tol) const {
    return (num_ * o.den_).same_as(o.num_ * den_, tol);
}

std::string RationalFunction::str() const {
    return "(" + num_.str() + ") / (" + den_.str() + ")";
}

RationalFunction RationalFunction::parse(const std::string& text) {
    auto slash = text.find(") / (");
    if (slash == std::string::npos || text.empty() || text.front() != '(' ||
        text.back() != ')')
        throw Error("bad rational function text: '" + text + "'");
    std::string num = text.substr(1, slash - 1);
    std::string den = text.substr(slash + 5, text.size() - slash - 6);
    return {Polynomial::parse(num), Polynomial::parse(den)};
}

}  // namespace sinv
