#pragma once

#include <algorithm>
#include <vector>

namespace fbs::detail {

// Linear interpolation with clamp-to-edge extension; exact at sample points.
inline double interp_clamped(const std::vector<double>& xs, const std::vector<double>& ys,
                             double x) {
    if (x <= xs.front()) return ys.front();
    if (x >= xs.back()) return ys.back();
    const auto it = std::lower_bound(xs.begin(), xs.end(), x);
    const std::size_t hi = static_cast<std::size_t>(it - xs.begin());
    if (xs[hi] == x) return ys[hi];
    const std::size_t lo = hi - 1;
    const double t = (x - xs[lo]) / (xs[hi] - xs[lo]);
    return ys[lo] + t * (ys[hi] - ys[lo]);
}

} // namespace fbs::detail
