#pragma once

#include <optional>
#include <vector>

#include "cei/grid_path.hpp"

namespace cei {

// Result of a random-shift conditioning transform. When the conditioning
// event fails (empty occupation / empty local-time band) no shift exists:
// conditioning_event is false and path is absent.
struct shift_result {
    std::optional<grid_path> path;
    int nu_index = -1;
    bool conditioning_event = false;
};

// Cumulative band-occupation estimate of the local time of a profile R at
// level y: L[k] = (1/epsilon) * (1/n) * #{j < k : |R[j] - y| <= epsilon}.
struct local_time_estimate {
    double y = 0.0;
    double epsilon = 0.0;
    std::vector<double> L;
};

// A[k] = (1/n) * #{j < k : m[j] in I} where m is the shifted-minimum profile.
occupation_profile occupation_process(const grid_path& p, const interval& I);

// Uniform selection among the occupied cells: the smallest occupied index
// whose rank strictly exceeds u * (occupied count). Lands on an occupied cell,
// so the shifted path's minimum lies in I exactly.
int nu_from_occupation(const occupation_profile& profile, double u);

// Shift at the occupation-selected cell. On an empty occupation returns
// conditioning_event = false with no path.
shift_result condition_min_transform(const grid_path& p, const interval& I, double u);

// Shift at the first cell attaining the overall minimum. For bridges the
// result is nonnegative and pinned to 0 at both ends.
grid_path vervaat(const grid_path& p);

local_time_estimate local_time_estimate_of(const std::vector<double>& R, double y,
                                           double epsilon);

// Shift at a cell of the epsilon-band of the reflected profile around level
// -y (the level where the shifted minimum equals y), selected uniformly by
// band rank. On an empty band returns conditioning_event = false.
shift_result condition_min_value_transform(const grid_path& p, double y, double epsilon,
                                           double u);

// Shift at the first cell strictly above the threshold u * (x + min):
// nu = inf{k : values[k] > u * (x + min values)}. Throws no_passage when the
// path never exceeds the threshold.
shift_result first_passage_transform(const grid_path& p, double x, double u);

// Uniform cyclic shift minus the endpoint drift line:
// result[k] = cyclic_shift(p, round(u*n))[k] - (k/n) * p[n].
grid_path bes3_to_bridge(const grid_path& p, double u);

}  // namespace cei
