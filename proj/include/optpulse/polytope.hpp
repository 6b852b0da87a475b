#pragma once

// Downhill simplex (Nelder-Mead) with the standard coefficients: reflection
// 1, expansion 2, contraction 1/2, shrink 1/2. Deterministic given the start
// point and options; ties in the simplex ordering break by vertex index.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

namespace optpulse {

struct PolytopeOptions {
    double value_tolerance = 1e-9;  // stop when f_worst - f_best < this
    int max_iterations = 20000;
    double initial_step = 0.5;      // per-coordinate offset of the start simplex
};

struct PolytopeResult {
    std::vector<double> point;
    double value = 0.0;
    int iterations = 0;
    bool aborted = false;           // non-finite objective value encountered
    std::string diagnostic;
};

inline PolytopeResult polytope_minimize(const std::function<double(const std::vector<double>&)>& objective,
                                        const std::vector<double>& start,
                                        const PolytopeOptions& opt = {}) {
    const std::size_t n = start.size();
    std::vector<std::vector<double>> pts(n + 1, start);
    for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += opt.initial_step;

    PolytopeResult res;
    auto eval = [&](const std::vector<double>& x) {
        const double v = objective(x);
        if (!std::isfinite(v)) {
            res.aborted = true;
            res.diagnostic = "non-finite objective value";
        }
        return v;
    };

    std::vector<double> fv(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        fv[i] = eval(pts[i]);
        if (res.aborted) {
            res.point = start;
            res.value = fv[i];
            return res;
        }
    }

    std::vector<std::size_t> order(n + 1);
    auto sort_simplex = [&] {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        std::vector<std::vector<double>> p2(n + 1);
        std::vector<double> f2(n + 1);
        for (std::size_t i = 0; i <= n; ++i) {
            p2[i] = pts[order[i]];
            f2[i] = fv[order[i]];
        }
        pts.swap(p2);
        fv.swap(f2);
    };

    int it = 0;
    while (!res.aborted) {
        sort_simplex();
        if (fv[n] - fv[0] < opt.value_tolerance) break;
        if (it >= opt.max_iterations) break;
        ++it;

        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) centroid[j] += pts[i][j];
        for (double& c : centroid) c /= static_cast<double>(n);

        auto blend = [&](double coef) {
            std::vector<double> x(n);
            for (std::size_t j = 0; j < n; ++j)
                x[j] = centroid[j] + coef * (centroid[j] - pts[n][j]);
            return x;
        };

        const std::vector<double> xr = blend(1.0);
        const double fr = eval(xr);
        if (res.aborted) break;

        if (fr < fv[0]) {
            const std::vector<double> xe = blend(2.0);
            const double fe = eval(xe);
            if (res.aborted) break;
            if (fe < fr) { pts[n] = xe; fv[n] = fe; }
            else         { pts[n] = xr; fv[n] = fr; }
        } else if (fr < fv[n - 1]) {
            pts[n] = xr; fv[n] = fr;
        } else {
            std::vector<double> xc(n);
            if (fr < fv[n]) {
                for (std::size_t j = 0; j < n; ++j) xc[j] = centroid[j] + 0.5 * (xr[j] - centroid[j]);
            } else {
                for (std::size_t j = 0; j < n; ++j) xc[j] = centroid[j] - 0.5 * (centroid[j] - pts[n][j]);
            }
            const double fc = eval(xc);
            if (res.aborted) break;
            if (fc < std::min(fr, fv[n])) {
                pts[n] = xc; fv[n] = fc;
            } else {
                for (std::size_t i = 1; i <= n; ++i) {
                    for (std::size_t j = 0; j < n; ++j)
                        pts[i][j] = pts[0][j] + 0.5 * (pts[i][j] - pts[0][j]);
                    fv[i] = eval(pts[i]);
                    if (res.aborted) break;
                }
            }
        }
    }

    if (res.aborted) {
        // keep the best finite vertex seen
        std::size_t best = 0;
        for (std::size_t i = 1; i <= n; ++i)
            if (std::isfinite(fv[i]) && (!std::isfinite(fv[best]) || fv[i] < fv[best])) best = i;
        res.point = pts[best];
        res.value = fv[best];
        res.iterations = it;
        return res;
    }
    sort_simplex();
    res.point = pts[0];
    res.value = fv[0];
    res.iterations = it;
    return res;
}

}  // namespace optpulse
