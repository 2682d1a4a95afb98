#pragma once

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "sinv/errors.hpp"

namespace sinv {

// Tolerances shared across the algebra layer.
inline constexpr double kCoeffTol = 1e-9;   // relative coefficient zero test
inline constexpr double kStabTol = 1e-7;    // stability classification band
inline constexpr double kEvalTol = 1e-9;    // pole detection at evaluation points

/// Real polynomial in s, coefficients stored lowest degree first.
/// Canonical form: trailing (highest-degree) near-zero coefficients are
/// trimmed relative to the largest magnitude; the zero polynomial is {}.
class Polynomial {
public:
    Polynomial() = default;
    Polynomial(std::initializer_list<double> coeffs) : c_(coeffs) { trim(); }
    explicit Polynomial(std::vector<double> coeffs) : c_(std::move(coeffs)) { trim(); }
    static Polynomial constant(double v) { return Polynomial({v}); }
    /// Monomial s^k.
    static Polynomial monomial(int k, double coeff = 1.0);
    /// Monic polynomial with the given roots (complex roots must come in
    /// conjugate pairs; imaginary residue is dropped).
    static Polynomial from_roots(const std::vector<std::complex<double>>& roots);

    const std::vector<double>& coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    /// Degree; -1 for the zero polynomial.
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    double leading() const { return c_.empty() ? 0.0 : c_.back(); }
    double operator[](std::size_t i) const { return i < c_.size() ? c_[i] : 0.0; }

    std::complex<double> eval(std::complex<double> s) const;
    double eval(double s) const;

    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator*(const Polynomial& o) const;
    Polynomial operator-() const;
    Polynomial operator*(double k) const;
    friend Polynomial operator*(double k, const Polynomial& p) { return p * k; }
    Polynomial pow(int e) const;

    bool same_as(const Polynomial& o, double tol = kCoeffTol) const;

    /// Largest coefficient magnitude (0 for the zero polynomial).
    double max_coeff() const;
    Polynomial monic() const;

    /// Render as "a_k*s^k + ... + a_0" with 17 significant digits.
    std::string str() const;
    /// Parse the str() format; also accepts bare "s", "s^k", "-s^k" terms.
    static Polynomial parse(const std::string& text);

private:
    void trim();
    std::vector<double> c_;
};

/// Euclidean division: a = b*q + r with deg(r) < deg(b).
std::pair<Polynomial, Polynomial> poly_divmod(const Polynomial& a, const Polynomial& b);

/// Monic GCD via the Euclidean algorithm with relative zero tests.
Polynomial poly_gcd(const Polynomial& a, const Polynomial& b);

/// Roots via companion-matrix eigenvalues.
std::vector<std::complex<double>> poly_roots(const Polynomial& p);

enum class StabilityTag { Hurwitz, MarginallyStable, Unstable };

struct StabilityClass {
    StabilityTag tag;
    double witness;  // worst (largest) root real part; -inf for constants
};

StabilityClass classify_stability(const Polynomial& p, double eps_stab = kStabTol);

const char* to_string(StabilityTag tag);

}  // namespace sinv
