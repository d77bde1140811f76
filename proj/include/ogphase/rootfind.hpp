#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "ogphase/errors.hpp"

namespace ogphase {

inline std::vector<double> linspace(double lo, double hi, int count) {
    if (count < 1) throw Error("linspace: need at least one point");
    std::vector<double> out(static_cast<std::size_t>(count));
    if (count == 1) {
        out[0] = lo;
        return out;
    }
    for (int i = 0; i < count; ++i)
        out[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (count - 1);
    return out;
}

// Bisect f to |hi - lo| <= xtol inside a bracket with a sign change.
inline double bisect(const std::function<double(double)>& f, double lo, double hi,
                     double flo, double fhi, double xtol) {
    for (int iter = 0; iter < 200 && (hi - lo) > xtol; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double fmid = f(mid);
        if (fmid == 0.0) return mid;
        if ((flo < 0.0) != (fmid < 0.0)) {
            hi = mid;
            fhi = fmid;
        } else {
            lo = mid;
            flo = fmid;
        }
    }
    (void)fhi;
    return 0.5 * (lo + hi);
}

// Zeros of f located by scanning a grid for sign changes and bisecting each
// bracket. Grid nodes that are exact zeros are reported directly.
inline std::vector<double> sign_change_roots(const std::function<double(double)>& f,
                                             const std::vector<double>& grid,
                                             double xtol = 1e-6) {
    std::vector<double> roots;
    if (grid.size() < 2) return roots;
    double prev = f(grid[0]);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double cur = f(grid[i]);
        if (prev == 0.0) {
            roots.push_back(grid[i - 1]);
        } else if (cur != 0.0 && (prev < 0.0) != (cur < 0.0)) {
            roots.push_back(bisect(f, grid[i - 1], grid[i], prev, cur, xtol));
        }
        prev = cur;
    }
    if (prev == 0.0) roots.push_back(grid.back());
    return roots;
}

}  // namespace ogphase
