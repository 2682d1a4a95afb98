#include "sinv/polynomial.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>

namespace sinv {

void Polynomial::trim() {
    double scale = max_coeff();
    if (scale == 0.0) {
        c_.clear();
        return;
    }
    // Kill relatively-tiny coefficients everywhere, then drop trailing zeros.
    for (double& x : c_) {
        if (std::abs(x) <= kCoeffTol * scale) x = 0.0;
    }
    while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
}

Polynomial Polynomial::monomial(int k, double coeff) {
    std::vector<double> c(static_cast<std::size_t>(k) + 1, 0.0);
    c.back() = coeff;
    return Polynomial(std::move(c));
}

Polynomial Polynomial::from_roots(const std::vector<std::complex<double>>& roots) {
    // Build the product of (s - r) with coefficients highest degree first.
    std::vector<std::complex<double>> c{1.0};
    for (const auto& r : roots) {
        c.push_back(0.0);
        for (std::size_t i = c.size() - 1; i > 0; --i) c[i] -= r * c[i - 1];
    }
    std::vector<double> out(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) out[i] = c[c.size() - 1 - i].real();
    return Polynomial(std::move(out));
}

std::complex<double> Polynomial::eval(std::complex<double> s) const {
    std::complex<double> acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * s + *it;
    return acc;
}

double Polynomial::eval(double s) const {
    double acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * s + *it;
    return acc;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
    std::vector<double> out(std::max(c_.size(), o.c_.size()), 0.0);
    for (std::size_t i = 0; i < c_.size(); ++i) out[i] += c_[i];
    for (std::size_t i = 0; i < o.c_.size(); ++i) out[i] += o.c_[i];
    return Polynomial(std::move(out));
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + (-o); }

Polynomial Polynomial::operator-() const {
    std::vector<double> out(c_);
    for (double& x : out) x = -x;
    return Polynomial(std::move(out));
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
    if (is_zero() || o.is_zero()) return {};
    std::vector<double> out(c_.size() + o.c_.size() - 1, 0.0);
    for (std::size_t i = 0; i < c_.size(); ++i)
        for (std::size_t j = 0; j < o.c_.size(); ++j) out[i + j] += c_[i] * o.c_[j];
    return Polynomial(std::move(out));
}

Polynomial Polynomial::operator*(double k) const {
    std::vector<double> out(c_);
    for (double& x : out) x *= k;
    return Polynomial(std::move(out));
}

Polynomial Polynomial::pow(int e) const {
    Polynomial acc = constant(1.0);
    for (int i = 0; i < e; ++i) acc = acc * *this;
    return acc;
}

bool Polynomial::same_as(const Polynomial& o, double tol) const {
    double scale = std::max(max_coeff(), o.max_coeff());
    if (scale == 0.0) return true;
    std::size_t n = std::max(c_.size(), o.c_.size());
    for (std::size_t i = 0; i < n; ++i)
        if (std::abs((*this)[i] - o[i]) > tol * scale) return false;
    return true;
}

double Polynomial::max_coeff() const {
    double m = 0.0;
    for (double x : c_) m = std::max(m, std::abs(x));
    return m;
}

Polynomial Polynomial::monic() const {
    if (is_zero()) return {};
    return *this * (1.0 / c_.back());
}

std::pair<Polynomial, Polynomial> poly_divmod(const Polynomial& a, const Polynomial& b) {
    if (b.is_zero()) throw DivisionByZeroPolynomial();
    if (a.degree() < b.degree()) return {{}, a};
    std::vector<double> rem(a.coeffs());
    std::vector<double> quot(static_cast<std::size_t>(a.degree() - b.degree()) + 1, 0.0);
    const auto& bc = b.coeffs();
    for (int k = a.degree() - b.degree(); k >= 0; --k) {
        double q = rem[k + b.degree()] / bc.back();
        quot[static_cast<std::size_t>(k)] = q;
        for (int j = 0; j <= b.degree(); ++j)
            rem[static_cast<std::size_t>(k + j)] -= q * bc[static_cast<std::size_t>(j)];
    }
    rem.resize(static_cast<std::size_t>(std::max(b.degree(), 0)));
    return {Polynomial(std::move(quot)), Polynomial(std::move(rem))};
}

Polynomial poly_gcd(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() && b.is_zero()) throw BothZero();
    if (a.is_zero()) return b.monic();
    if (b.is_zero()) return a.monic();
    if (a.degree() == 0 || b.degree() == 0) return Polynomial::constant(1.0);

    // Floating-point Euclid degrades fast with degree (decaying remainders
    // masquerade as zero, yielding factors that divide neither operand).
    // Pairing the two root sets is much more robust; the candidate built from
    // the paired roots is accepted only if it genuinely divides both sides.
    const Polynomial& lo = a.degree() <= b.degree() ? a : b;
    const Polynomial& hi = a.degree() <= b.degree() ? b : a;
    std::vector<std::complex<double>> lo_roots = poly_roots(lo);
    std::vector<std::complex<double>> hi_roots = poly_roots(hi);
    std::vector<bool> used(hi_roots.size(), false);
    std::vector<std::complex<double>> common;
    for (const auto& r : lo_roots) {
        int best = -1;
        double best_d = 1e-6 * (1.0 + std::abs(r));
        for (std::size_t j = 0; j < hi_roots.size(); ++j) {
            if (used[j]) continue;
            double d = std::abs(hi_roots[j] - r);
            if (d < best_d) {
                best_d = d;
                best = static_cast<int>(j);
            }
        }
        if (best >= 0) {
            used[static_cast<std::size_t>(best)] = true;
            common.push_back(0.5 * (r + hi_roots[static_cast<std::size_t>(best)]));
        }
    }
    if (common.empty()) return Polynomial::constant(1.0);
    Polynomial g = Polynomial::from_roots(common);
    if (poly_divmod(a, g).second.max_coeff() > kCoeffTol * a.max_coeff() ||
        poly_divmod(b, g).second.max_coeff() > kCoeffTol * b.max_coeff())
        return Polynomial::constant(1.0);
    return g.monic();
}

std::vector<std::complex<double>> poly_roots(const Polynomial& p) {
    int n = p.degree();
    if (n <= 0) return {};
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
    double lead = p.leading();
    for (int i = 0; i < n; ++i) companion(i, n - 1) = -p[static_cast<std::size_t>(i)] / lead;
    for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
    std::vector<std::complex<double>> roots(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) roots[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
    return roots;
}

StabilityClass classify_stability(const Polynomial& p, double eps_stab) {
    if (p.is_zero()) throw ZeroPolynomial();
    if (p.degree() == 0)
        return {StabilityTag::Hurwitz, -std::numeric_limits<double>::infinity()};
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& r : poly_roots(p)) worst = std::max(worst, r.real());
    StabilityTag tag = worst < -eps_stab    ? StabilityTag::Hurwitz
                       : worst <= eps_stab  ? StabilityTag::MarginallyStable
                                            : StabilityTag::Unstable;
    return {tag, worst};
}

const char* to_string(StabilityTag tag) {
    switch (tag) {
        case StabilityTag::Hurwitz: return "Hurwitz";
        case StabilityTag::MarginallyStable: return "MarginallyStable";
        case StabilityTag::Unstable: return "Unstable";
    }
    return "?";
}

// ---- text format ----

namespace {

std::string fmt_coeff(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// One term of the text format: [coeff][*s[^k]] or bare s[^k].
void parse_term(std::string term, std::vector<std::pair<int, double>>& out) {
    // strip spaces
    std::erase_if(term, [](unsigned char ch) { return std::isspace(ch); });
    if (term.empty()) throw Error("empty polynomial term");
    double sign = 1.0;
    std::size_t pos = 0;
    while (pos < term.size() && (term[pos] == '+' || term[pos] == '-')) {
        if (term[pos] == '-') sign = -sign;
        ++pos;
    }
    term = term.substr(pos);
    double coeff = 1.0;
    int power = 0;
    auto star = term.find("*s");
    if (star != std::string::npos) {
        auto [p, ec] = std::from_chars(term.data(), term.data() + star, coeff);
        if (ec != std::errc() || p != term.data() + star)
            throw Error("bad coefficient in term '" + term + "'");
        std::string tail = term.substr(star + 2);
        if (tail.empty()) {
            power = 1;
        } else if (tail[0] == '^') {
            power = std::stoi(tail.substr(1));
        } else {
            throw Error("bad exponent in term '" + term + "'");
        }
    } else if (!term.empty() && term[0] == 's') {
        power = term.size() == 1 ? 1 : (term[1] == '^' ? std::stoi(term.substr(2)) : -1);
        if (power < 0) throw Error("bad term '" + term + "'");
    } else {
        auto [p, ec] = std::from_chars(term.data(), term.data() + term.size(), coeff);
        if (ec != std::errc() || p != term.data() + term.size())
            throw Error("bad constant term '" + term + "'");
    }
    if (power < 0) throw Error("negative power in term '" + term + "'");
    out.emplace_back(power, sign * coeff);
}

}  // namespace

std::string Polynomial::str() const {
    if (is_zero()) return "0";
    std::string out;
    for (int k = degree(); k >= 0; --k) {
        double v = (*this)[static_cast<std::size_t>(k)];
        if (v == 0.0) continue;
        if (!out.empty()) out += " + ";
        out += fmt_coeff(v);
        if (k >= 1) out += "*s";
        if (k >= 2) out += "^" + std::to_string(k);
    }
    return out;
}

Polynomial Polynomial::parse(const std::string& text) {
    std::vector<std::pair<int, double>> terms;
    // Terms are separated by " + "; the separator is spaced so it cannot be
    // confused with the '+' inside an exponent like 1e+30.
    std::size_t start = 0;
    while (start <= text.size()) {
        auto sep = text.find(" + ", start);
        std::string piece =
            sep == std::string::npos ? text.substr(start) : text.substr(start, sep - start);
        if (piece.find_first_not_of(" \t") != std::string::npos) parse_term(piece, terms);
        if (sep == std::string::npos) break;
        start = sep + 3;
    }
    if (terms.empty()) throw Error("empty polynomial text");
    int deg = 0;
    for (auto& [k, v] : terms) deg = std::max(deg, k);
    std::vector<double> c(static_cast<std::size_t>(deg) + 1, 0.0);
    for (auto& [k, v] : terms) c[static_cast<std::size_t>(k)] += v;
    return Polynomial(std::move(c));
}

}  // namespace sinv
