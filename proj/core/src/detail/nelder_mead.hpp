#pragma once

#include <array>
#include <functional>
#include <utility>

namespace sinv::detail {

/// Plain Nelder-Mead on R^2 with standard reflection/expansion/contraction
/// coefficients and a fixed iteration budget. Good enough for the 2-parameter
/// fits in this library; callers handle multistart.
inline std::array<double, 2> nelder_mead_2d(
    const std::function<double(std::array<double, 2>)>& f, std::array<double, 2> x0,
    double spread, int iters) {
    std::array<std::array<double, 2>, 3> v{x0,
                                           {x0[0] + spread, x0[1]},
                                           {x0[0], x0[1] + spread}};
    std::array<double, 3> fv{f(v[0]), f(v[1]), f(v[2])};
    auto order = [&] {
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j)
                if (fv[j] < fv[i]) {
                    std::swap(fv[i], fv[j]);
                    std::swap(v[i], v[j]);
                }
    };
    for (int it = 0; it < iters; ++it) {
        order();
        std::array<double, 2> centroid{(v[0][0] + v[1][0]) / 2, (v[0][1] + v[1][1]) / 2};
        auto mix = [&](double coef) {
            return std::array<double, 2>{centroid[0] + coef * (centroid[0] - v[2][0]),
                                         centroid[1] + coef * (centroid[1] - v[2][1])};
        };
        auto xr = mix(1.0);
        double fr = f(xr);
        if (fr < fv[0]) {
            auto xe = mix(2.0);
            double fe = f(xe);
            if (fe < fr) {
                v[2] = xe;
                fv[2] = fe;
            } else {
                v[2] = xr;
                fv[2] = fr;
            }
        } else if (fr < fv[1]) {
            v[2] = xr;
            fv[2] = fr;
        } else {
            auto xc = mix(-0.5);
            double fc = f(xc);
            if (fc < fv[2]) {
                v[2] = xc;
                fv[2] = fc;
            } else {
                for (int i = 1; i < 3; ++i) {
                    v[i] = {(v[i][0] + v[0][0]) / 2, (v[i][1] + v[0][1]) / 2};
                    fv[i] = f(v[i]);
                }
            }
        }
    }
    order();
    return v[0];
}

}  // namespace sinv::detail
