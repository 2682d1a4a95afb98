#pragma once

#include <cmath>
#include <vector>

#include "sinv/polynomial.hpp"

namespace sinv::testing {

/// Root-free Hurwitz test via the Routh array. Returns false on a zero (or
/// sign-flipped) first-column element, so marginal cases count as not
/// Hurwitz; callers exclude near-ties when comparing against the classifier.
inline bool routh_hurwitz(const Polynomial& p) {
    int n = p.degree();
    if (n <= 0) return true;
    // Rows hold every other coefficient, highest degree first.
    std::vector<double> r0, r1;
    for (int k = n; k >= 0; k -= 2) r0.push_back(p[static_cast<std::size_t>(k)]);
    for (int k = n - 1; k >= 0; k -= 2) r1.push_back(p[static_cast<std::size_t>(k)]);
    double lead_sign = p.leading() > 0 ? 1.0 : -1.0;
    double tiny = 1e-12 * p.max_coeff();
    for (int row = 0; row < n; ++row) {
        if (r1.empty()) break;
        double pivot = r1[0];
        if (pivot * lead_sign <= tiny) return false;
        std::vector<double> next;
        for (std::size_t j = 0; j + 1 < r0.size() || j + 1 < r1.size(); ++j) {
            double a = j + 1 < r0.size() ? r0[j + 1] : 0.0;
            double b = j + 1 < r1.size() ? r1[j + 1] : 0.0;
            next.push_back((pivot * a - r0[0] * b) / pivot);
        }
        r0 = r1;
        r1 = next;
    }
    return true;
}

}  // namespace sinv::testing
