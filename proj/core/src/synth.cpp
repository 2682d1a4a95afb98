#include "sinv/synth.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>

#include "detail/nelder_mead.hpp"

namespace sinv {

RationalFunction FilterSpec::tf() const {
    if (!(cutoff > 0.0) || order < 1) throw Error("filter requires cutoff > 0 and order >= 1");
    RationalFunction first(Polynomial{cutoff}, Polynomial{cutoff, 1.0});
    return first.pow(order);
}

FilterSpec design_filter(double cutoff, int min_order) {
    if (!(cutoff > 0.0)) throw Error("filter cutoff must be positive");
    if (min_order < 1) throw Error("filter order must be at least 1");
    return {cutoff, min_order};
}

Controller synthesize_feedforward(const RationalMatrix& P, const RationalFunction& Yd,
                                  double cutoff, LeftInverseKind kind, int min_order) {
    if (P.cols() != 1) throw Error("feedforward synthesis expects an n x 1 SIMO plant");
    for (int i = 0; i < P.rows(); ++i)
        if (P.at(i, 0).is_zero()) throw ZeroEntry();

    Controller ctrl;
    ctrl.kind = kind;
    ctrl.p_dagger = left_inverse(P, kind);
    ctrl.reference = Yd;

    // Contract the equal-reference vector: R = sum_i P+_i * Y_d.
    RationalFunction R;
    for (int i = 0; i < ctrl.p_dagger.cols(); ++i) R = R + ctrl.p_dagger.at(0, i) * Yd;

    int deficit = std::max(0, -R.relative_degree());
    if (deficit > 12)
        throw ImproperUnfixable("properness deficit " + std::to_string(deficit) +
                                " exceeds the maximum filter order 12");
    ctrl.filter = design_filter(cutoff, std::max(min_order, deficit));
    ctrl.u_ff = ctrl.filter.tf() * R;

    if (!ctrl.u_ff.is_zero()) {
        StabilityClass verdict = classify_stability(ctrl.u_ff.den());
        if (verdict.tag == StabilityTag::Unstable)
            throw UnstableInverse("feedforward denominator is Unstable (worst pole real part " +
                                  std::to_string(verdict.witness) +
                                  "): inverse poles failed to cancel into the left half-plane");
        if (verdict.tag == StabilityTag::MarginallyStable) {
            // Marginal poles are admissible only when inherited from the
            // reference itself (e.g. an uncancelled step pole).
            double scale = std::max(1.0, Yd.den().max_coeff());
            for (const auto& pole : poly_roots(ctrl.u_ff.den())) {
                if (pole.real() < -kStabTol) continue;
                if (std::abs(Yd.den().eval(pole)) > 1e-6 * scale)
                    throw UnstableInverse(
                        "feedforward has a marginal pole not inherited from the reference");
            }
        }
    }
    return ctrl;
}

RationalMatrix nominal_tracking_tf(const RationalMatrix& P, const Controller& ctrl) {
    if (P.cols() != 1 || P.rows() != ctrl.n_fingers())
        throw Error("plant shape does not match the synthesized controller");
    RationalMatrix out(P.rows(), 1);
    for (int i = 0; i < P.rows(); ++i) out.at(i, 0) = P.at(i, 0) * ctrl.u_ff;
    return out;
}

Controller wire_feedback(const Controller& ctrl, double fb_cutoff) {
    Controller out = ctrl;
    int deficit = 1;
    for (int i = 0; i < ctrl.p_dagger.cols(); ++i)
        deficit = std::max(deficit, -ctrl.p_dagger.at(0, i).relative_degree());
    out.fb_filter = design_filter(fb_cutoff, deficit);
    out.fb_gain = RationalMatrix(1, ctrl.p_dagger.cols());
    RationalFunction h = out.fb_filter.tf();
    for (int i = 0; i < ctrl.p_dagger.cols(); ++i)
        out.fb_gain.at(0, i) = h * ctrl.p_dagger.at(0, i);
    out.feedback_enabled = true;
    return out;
}

WeightFit fit_robustness_weight(const RationalFunction& nominal,
                                const std::vector<RationalFunction>& perturbed_set,
                                const std::vector<double>& omega_grid) {
    if (perturbed_set.empty()) throw EmptySet();
    if (omega_grid.size() < 10) throw Error("weight fit needs at least 10 grid frequencies");
    for (std::size_t i = 0; i < omega_grid.size(); ++i) {
        if (!(omega_grid[i] > 0.0)) throw Error("grid frequencies must be positive");
        if (i > 0 && omega_grid[i] <= omega_grid[i - 1])
            throw Error("grid frequencies must be strictly ascending");
    }

    WeightFit fit;
    fit.samples.reserve(omega_grid.size());
    for (double w : omega_grid) {
        std::complex<double> jw(0.0, w);
        double worst = 0.0;
        try {
            std::complex<double> p0 = nominal.eval(jw);
            for (const auto& pt : perturbed_set)
                worst = std::max(worst, std::abs(pt.eval(jw) / p0 - 1.0));
        } catch (const PoleAtEvaluationPoint&) {
            throw PoleOnGrid(w);
        }
        fit.samples.emplace_back(w, worst);
    }

    constexpr double kFloor = 1e-6;
    double peak = 0.0;
    for (auto& [w, s] : fit.samples) peak = std::max(peak, s);
    if (peak < 1e-12) {
        // Nothing to bound: degenerate minimal-gain floor.
        fit.k = kFloor;
        fit.z = fit.p = 1.0;
        fit.w_t = RationalFunction::constant(kFloor);
        return fit;
    }

    // For fixed (z, p) the smallest admissible gain is
    // k = max_i sample_i / |(jw_i+z)/(jw_i+p)|, which makes the envelope
    // constraint tight by construction; only (log z, log p) are searched.
    auto mag1 = [](double w, double z, double p) {
        return std::sqrt((w * w + z * z) / (w * w + p * p));
    };
    std::vector<double> logw(omega_grid.size());
    for (std::size_t i = 0; i < omega_grid.size(); ++i) logw[i] = std::log(omega_grid[i]);
    auto cost = [&](std::array<double, 2> logzp) {
        double z = std::exp(logzp[0]), p = std::exp(logzp[1]);
        double k = 0.0;
        for (auto& [w, s] : fit.samples) k = std::max(k, s / mag1(w, z, p));
        k = std::max(k, kFloor);
        double area = 0.0;
        for (std::size_t i = 0; i < fit.samples.size(); ++i) {
            double width = (i + 1 < logw.size() ? logw[i + 1] : logw[i]) -
                           (i > 0 ? logw[i - 1] : logw[i]);
            double gap = std::log(k * mag1(fit.samples[i].first, z, p)) -
                         std::log(std::max(fit.samples[i].second, 1e-12));
            area += 0.5 * width * gap;
        }
        return area;
    };

    double lo = omega_grid.front(), hi = omega_grid.back();
    double mid = std::sqrt(lo * hi);
    std::array<double, 2> best{};
    double best_cost = std::numeric_limits<double>::infinity();
    for (double z0 : {lo, mid, hi})
        for (double p0 : {lo, mid, hi}) {
            auto x = detail::nelder_mead_2d(cost, {std::log(z0), std::log(p0)}, 0.7, 200);
            double fx = cost(x);
            if (fx < best_cost) {
                best_cost = fx;
                best = x;
            }
        }
    fit.z = std::exp(best[0]);
    fit.p = std::exp(best[1]);
    fit.k = kFloor;
    for (auto& [w, s] : fit.samples) fit.k = std::max(fit.k, s / mag1(w, fit.z, fit.p));
    fit.w_t = RationalFunction(Polynomial{fit.k * fit.z, fit.k}, Polynomial{fit.p, 1.0});

    // The envelope inequality must hold at every grid point by construction.
    for (auto& [w, s] : fit.samples)
        if (std::abs(fit.w_t.eval({0.0, w})) < s * (1.0 - 1e-9))
            throw Error("internal error: fitted weight dips below the sampled envelope");
    return fit;
}

// ---- manifest ----

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::string controller_to_manifest(const Controller& ctrl) {
    std::ostringstream os;
    os << "format=sinv-controller-v1\n";
    os << "fingers=" << ctrl.n_fingers() << "\n";
    os << "inverse_kind=" << to_string(ctrl.kind) << "\n";
    os << "filter_cutoff=" << fmt17(ctrl.filter.cutoff) << "\n";
    os << "filter_order=" << ctrl.filter.order << "\n";
    os << "reference=" << ctrl.reference.str() << "\n";
    os << "u_ff=" << ctrl.u_ff.str() << "\n";
    for (int i = 0; i < ctrl.n_fingers(); ++i)
        os << "p_dagger_" << i << "=" << ctrl.p_dagger.at(0, i).str() << "\n";
    os << "feedback=" << (ctrl.feedback_enabled ? 1 : 0) << "\n";
    if (ctrl.feedback_enabled) {
        os << "fb_cutoff=" << fmt17(ctrl.fb_filter.cutoff) << "\n";
        os << "fb_order=" << ctrl.fb_filter.order << "\n";
        for (int i = 0; i < ctrl.n_fingers(); ++i)
            os << "fb_gain_" << i << "=" << ctrl.fb_gain.at(0, i).str() << "\n";
    }
    return os.str();
}

Controller controller_from_manifest(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw Error("manifest line without '=': '" + line + "'");
        kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    auto need = [&](const std::string& key) -> const std::string& {
        auto it = kv.find(key);
        if (it == kv.end()) throw Error("manifest missing key '" + key + "'");
        return it->second;
    };
    if (need("format") != "sinv-controller-v1")
        throw Error("unsupported manifest format '" + kv["format"] + "'");

    Controller ctrl;
    int n = std::stoi(need("fingers"));
    if (n < 1) throw Error("manifest finger count must be >= 1");
    ctrl.kind = left_inverse_kind_from_string(need("inverse_kind"));
    ctrl.filter.cutoff = std::stod(need("filter_cutoff"));
    ctrl.filter.order = std::stoi(need("filter_order"));
    ctrl.reference = RationalFunction::parse(need("reference"));
    ctrl.u_ff = RationalFunction::parse(need("u_ff"));
    ctrl.p_dagger = RationalMatrix(1, n);
    for (int i = 0; i < n; ++i)
        ctrl.p_dagger.at(0, i) = RationalFunction::parse(need("p_dagger_" + std::to_string(i)));
    ctrl.feedback_enabled = std::stoi(need("feedback")) != 0;
    if (ctrl.feedback_enabled) {
        ctrl.fb_filter.cutoff = std::stod(need("fb_cutoff"));
        ctrl.fb_filter.order = std::stoi(need("fb_order"));
        ctrl.fb_gain = RationalMatrix(1, n);
        for (int i = 0; i < n; ++i)
            ctrl.fb_gain.at(0, i) = RationalFunction::parse(need("fb_gain_" + std::to_string(i)));
    }
    return ctrl;
}

}  // namespace sinv
