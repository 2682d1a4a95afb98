#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sinv/rational_matrix.hpp"

namespace sinv {

/// Low-pass filter H(s) = (cutoff/(s+cutoff))^order: unit DC gain, magnitude
/// monotone nonincreasing.
struct FilterSpec {
    double cutoff = 0.0;  // rad/s
    int order = 0;

    RationalFunction tf() const;
};

FilterSpec design_filter(double cutoff, int min_order = 1);

/// Synthesized controller: stable-inversion feedforward plus (optionally) the
/// filtered-inverse feedback gain acting on the measured-minus-nominal output
/// difference.
struct Controller {
    RationalMatrix p_dagger;    // 1 x n left inverse
    LeftInverseKind kind = LeftInverseKind::Averaged;
    FilterSpec filter;          // feedforward filter, order chosen at synthesis
    RationalFunction reference; // Y_d used at synthesis
    RationalFunction u_ff;      // U^a = H^m * (P+ . Y_d), proper and stable

    bool feedback_enabled = false;
    FilterSpec fb_filter;       // order auto-escalated for properness
    RationalMatrix fb_gain;     // 1 x n, maps y_delta to U_fb; U_c = U_ff - U_fb

    int n_fingers() const { return p_dagger.cols(); }
};

/// Stable-inversion feedforward: P+ from the chosen kind, R = P+ . Y_d
/// (contraction of the equal-reference vector), filter order
/// m = max(min_order, properness deficit of R), U^a = H^m * R. The reference
/// pole must cancel so that U^a ends up with a Hurwitz denominator — verified,
/// not assumed.
Controller synthesize_feedforward(const RationalMatrix& P, const RationalFunction& Yd,
                                  double cutoff, LeftInverseKind kind, int min_order = 2);

/// Per-channel nominal closed forms Y_i = P_i * U^a.
RationalMatrix nominal_tracking_tf(const RationalMatrix& P, const Controller& ctrl);

/// Adds the feedback path: fb_gain_i = H_fb * P+_i with H_fb order escalated
/// until every gain is proper.
Controller wire_feedback(const Controller& ctrl, double fb_cutoff);

struct WeightFit {
    std::vector<std::pair<double, double>> samples;  // (omega, worst |Pt/P - 1|)
    RationalFunction w_t;                            // k(s+z)/(s+p)
    double k = 0.0, z = 0.0, p = 0.0;
};

/// Fits the first-order multiplicative-uncertainty weight W_T(s) = k(s+z)/(s+p)
/// over the sampled worst relative error, minimizing log-magnitude area above
/// the envelope subject to |W_T(jw_i)| >= sample_i at every grid point.
WeightFit fit_robustness_weight(const RationalFunction& nominal,
                                const std::vector<RationalFunction>& perturbed_set,
                                const std::vector<double>& omega_grid);

/// Text manifest, bit-exact round-trip (all reals at 17 significant digits).
std::string controller_to_manifest(const Controller& ctrl);
Controller controller_from_manifest(const std::string& text);

}  // namespace sinv
