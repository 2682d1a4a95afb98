#pragma once

#include <complex>
#include <string>

#include "sinv/polynomial.hpp"

namespace sinv {

/// Element of the field R(s). Canonical form: gcd(num, den) constant and den
/// monic. `cancelled()` reports whether canonicalization removed a common
/// factor of degree >= 1 (floating GCD is ill-conditioned, so cancellation is
/// kept observable).
class RationalFunction {
public:
    RationalFunction() : num_(), den_({1.0}) {}
    RationalFunction(Polynomial num, Polynomial den);
    static RationalFunction constant(double v) {
        return RationalFunction(Polynomial::constant(v), Polynomial::constant(1.0));
    }

    const Polynomial& num() const { return num_; }
    const Polynomial& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool cancelled() const { return cancelled_; }

    /// deg(den) - deg(num); >= 0 iff proper.
    int relative_degree() const { return den_.degree() - num_.degree(); }
    bool proper() const { return relative_degree() >= 0; }
    bool strictly_proper() const { return relative_degree() >= 1; }
    bool biproper() const { return relative_degree() == 0; }

    std::complex<double> eval(std::complex<double> s0) const;

    RationalFunction operator+(const RationalFunction& o) const;
    RationalFunction operator-(const RationalFunction& o) const;
    RationalFunction operator*(const RationalFunction& o) const;
    RationalFunction operator/(const RationalFunction& o) const;
    RationalFunction operator-() const;
    RationalFunction operator*(double k) const;
    friend RationalFunction operator*(double k, const RationalFunction& f) { return f * k; }
    RationalFunction pow(int e) const;
    RationalFunction reciprocal() const;

    bool same_as(const RationalFunction& o, double tol = 1e-8) const;

    /// "(<num>) / (<den>)" using the polynomial text format.
    std::string str() const;
    static RationalFunction parse(const std::string& text);

private:
    Polynomial num_, den_;
    bool cancelled_ = false;
};

}  // namespace sinv
