#include "cei/transforms.hpp"

#include <cmath>
#include <utility>

namespace cei {

namespace {

std::vector<int> occupied_cells(const occupation_profile& profile) {
    std::vector<int> js;
    for (std::size_t j = 0; j < profile.m.size(); ++j)
        if (profile.I.contains(profile.m[j])) js.push_back(static_cast<int>(j));
    return js;
}

int rank_select(const std::vector<int>& cells, double u) {
    // Smallest member whose 1-based rank exceeds u * count; u in [0,1) makes
    // this the cell of rank floor(u*count)+1, i.e. uniform over the cells.
    auto r = static_cast<std::size_t>(u * static_cast<double>(cells.size()));
    if (r >= cells.size()) r = cells.size() - 1;
    return cells[r];
}

}  // namespace

occupation_profile occupation_process(const grid_path& p, const interval& I) {
    const int n = p.n();
    occupation_profile profile;
    profile.m = shifted_min_profile(p);
    profile.I = I;
    profile.A.assign(n + 1, 0.0);
    long count = 0;
    for (int k = 1; k <= n; ++k) {
        if (I.contains(profile.m[k - 1])) ++count;
        profile.A[k] = static_cast<double>(count) / n;
    }
    return profile;
}

int nu_from_occupation(const occupation_profile& profile, double u) {
    if (u < 0.0 || u >= 1.0) fail(errc::out_of_range, "u must lie in [0, 1)");
    std::vector<int> js = occupied_cells(profile);
    if (js.empty()) fail(errc::empty_occupation, "occupation A[n] = 0");
    return rank_select(js, u);
}

shift_result condition_min_transform(const grid_path& p, const interval& I, double u) {
    if (u < 0.0 || u >= 1.0) fail(errc::out_of_range, "u must lie in [0, 1)");
    occupation_profile profile = occupation_process(p, I);
    std::vector<int> js = occupied_cells(profile);
    shift_result res;
    if (js.empty()) return res;
    res.nu_index = rank_select(js, u);
    res.path = cyclic_shift(p, res.nu_index);
    res.conditioning_event = true;
    return res;
}

grid_path vervaat(const grid_path& p) { return cyclic_shift(p, argmin_first(p)); }

local_time_estimate local_time_estimate_of(const std::vector<double>& R, double y,
                                           double epsilon) {
    if (epsilon <= 0.0) fail(errc::out_of_range, "epsilon must be > 0");
    const std::size_t n = R.empty() ? 0 : R.size() - 1;
    local_time_estimate est{y, epsilon, std::vector<double>(n + 1, 0.0)};
    long count = 0;
    const double scale = 1.0 / (epsilon * static_cast<double>(n));
    for (std::size_t k = 1; k <= n; ++k) {
        if (std::abs(R[k - 1] - y) <= epsilon) ++count;
        est.L[k] = static_cast<double>(count) * scale;
    }
    return est;
}

shift_result condition_min_value_transform(const grid_path& p, double y, double epsilon,
                                           double u) {
    if (u < 0.0 || u >= 1.0) fail(errc::out_of_range, "u must lie in [0, 1)");
    if (y > 0.0) fail(errc::out_of_range, "level y must be <= 0");
    if (epsilon <= 0.0) fail(errc::out_of_range, "epsilon must be > 0");
    std::vector<double> R = reflected_process(p);
    const int n = p.n();
    std::vector<int> band;
    for (int j = 0; j < n; ++j)
        if (std::abs(R[j] - (-y)) <= epsilon) band.push_back(j);
    shift_result res;
    if (band.empty()) return res;
    res.nu_index = rank_select(band, u);
    res.path = cyclic_shift(p, res.nu_index);
    res.conditioning_event = true;
    return res;
}

shift_result first_passage_transform(const grid_path& p, double x, double u) {
    if (u < 0.0 || u >= 1.0) fail(errc::out_of_range, "u must lie in [0, 1)");
    if (x < 0.0) fail(errc::negative_endpoint, "first-passage level x must be >= 0");
    const int n = p.n();
    const double threshold = u * (x + minimum(p));
    for (int k = 0; k <= n; ++k) {
        if (p.values[k] > threshold) {
            shift_result res;
            res.nu_index = k;
            res.path = cyclic_shift(p, k);
            res.conditioning_event = true;
            return res;
        }
    }
    fail(errc::no_passage, "path never exceeds the first-passage threshold");
}

grid_path bes3_to_bridge(const grid_path& p, double u) {
    if (u < 0.0 || u >= 1.0) fail(errc::out_of_range, "u must lie in [0, 1)");
    const int n = p.n();
    const double pn = p.values[n];
    grid_path q = cyclic_shift(p, static_cast<int>(std::llround(u * n)));
    for (int k = 0; k <= n; ++k) q.values[k] -= (static_cast<double>(k) / n) * pn;
    q.values[0] = 0.0;
    q.values[n] = 0.0;
    return q;
}

}  // namespace cei
