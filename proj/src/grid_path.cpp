#include "cei/grid_path.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cei {

interval make_interval(double lo, double hi, bool lo_open, bool hi_open) {
    if (!std::isfinite(lo) || !std::isfinite(hi)) fail(errc::non_finite, "interval endpoint");
    if (lo > hi) fail(errc::out_of_range, "interval lo > hi");
    if (lo == hi && (lo_open || hi_open)) fail(errc::out_of_range, "empty singleton interval");
    if (hi > 0.0) fail(errc::out_of_range, "conditioning interval must lie in (-inf, 0]");
    return interval{lo, hi, lo_open, hi_open};
}

grid_path make_grid_path(std::vector<double> values) {
    if (values.size() < 3) fail(errc::too_short, "need at least 3 grid values");
    if (values[0] != 0.0) fail(errc::non_zero_start, "values[0] must be 0");
    for (double v : values)
        if (!std::isfinite(v)) fail(errc::non_finite, "grid value");
    return grid_path{std::move(values)};
}

grid_path cyclic_shift(const grid_path& p, int j) {
    const auto& v = p.values;
    const int n = p.n();
    if (j < 0 || j > n) fail(errc::index_out_of_range, "shift index");
    std::vector<double> r(n + 1);
    for (int k = 0; k <= n; ++k)
        r[k] = (j + k <= n) ? v[j + k] - v[j] : (v[j + k - n] + v[n]) - v[j];
    return grid_path{std::move(r)};
}

double minimum(const grid_path& p) {
    return *std::min_element(p.values.begin(), p.values.end());
}

double maximum(const grid_path& p) {
    return *std::max_element(p.values.begin(), p.values.end());
}

int argmin_first(const grid_path& p) {
    return static_cast<int>(std::min_element(p.values.begin(), p.values.end()) -
                            p.values.begin());
}

double amplitude(const grid_path& p) { return maximum(p) - minimum(p); }

grid_path time_reversal(const grid_path& p) {
    const auto& v = p.values;
    const int n = p.n();
    std::vector<double> r(n + 1);
    for (int k = 0; k <= n; ++k) r[k] = v[n] - v[n - k];
    return grid_path{std::move(r)};
}

std::vector<double> shifted_min_profile(const grid_path& p) {
    const auto& v = p.values;
    const int n = p.n();
    // Candidates of min over cyclic_shift(p, j), before the common -v[j]:
    //   suffix side: v[s] for s = j..n; wrap side: v[s] + v[n] for s = 1..j.
    // Subtracting v[j] last preserves the ordering of candidates (IEEE
    // round-to-nearest is weakly monotone), so the result equals the
    // brute-force minimum bit for bit.
    std::vector<double> suff(n + 1);
    suff[n] = v[n];
    for (int s = n - 1; s >= 0; --s) suff[s] = std::min(v[s], suff[s + 1]);
    std::vector<double> m(n);
    double wrap = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
        if (j >= 1) wrap = std::min(wrap, v[j] + v[n]);
        m[j] = std::min(suff[j], wrap) - v[j];
    }
    return m;
}

std::vector<double> reflected_process(const grid_path& p) {
    const int n = p.n();
    if (p.values[n] < 0.0) fail(errc::negative_endpoint, "reflected profile needs endpoint >= 0");
    std::vector<double> m = shifted_min_profile(p);
    std::vector<double> R(n + 1);
    for (int j = 0; j < n; ++j) R[j] = -m[j];
    R[n] = R[0];
    return R;
}

}  // namespace cei
