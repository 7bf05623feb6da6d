#pragma once

#include <vector>

#include "cei/errors.hpp"

namespace cei {

// A path X on [0,1] sampled on the uniform grid k/n: values[k] = X_{k/n},
// with n cells and n+1 entries, values[0] = 0 always.
struct grid_path {
    std::vector<double> values;
    int n() const { return static_cast<int>(values.size()) - 1; }
};

// Conditioning interval for the minimum; subsets of (-inf, 0].
// A singleton [y, y] is allowed and must be closed on both ends.
struct interval {
    double lo = 0.0;
    double hi = 0.0;
    bool lo_open = false;
    bool hi_open = false;

    bool contains(double v) const {
        if (lo_open ? !(v > lo) : !(v >= lo)) return false;
        if (hi_open ? !(v < hi) : !(v <= hi)) return false;
        return true;
    }
};

interval make_interval(double lo, double hi, bool lo_open, bool hi_open);

// Occupation of `I` by the minima of the cyclic shifts of one path:
// m[j] = minimum of the path shifted at cell j, and A[k] = (1/n) * #{j < k : m[j] in I}.
struct occupation_profile {
    std::vector<double> m;
    std::vector<double> A;
    interval I;
};

grid_path make_grid_path(std::vector<double> values);

// Cyclic shift at grid cell j: swaps the path pieces before/after j/n and
// glues them so the result starts at 0 and ends at values[n].
// result[k] = values[j+k] - values[j]               if j+k <= n,
//             (values[j+k-n] + values[n]) - values[j] otherwise.
grid_path cyclic_shift(const grid_path& p, int j);

double minimum(const grid_path& p);
double maximum(const grid_path& p);
int argmin_first(const grid_path& p);
double amplitude(const grid_path& p);

// result[k] = values[n] - values[n-k].
grid_path time_reversal(const grid_path& p);

// m[j] = minimum(cyclic_shift(p, j)) for j = 0..n-1, computed in O(n) total
// via suffix minima of values[s] and prefix minima of values[s] + values[n].
// The candidate arithmetic matches cyclic_shift exactly, so equality with the
// brute-force minimum holds to the last bit.
std::vector<double> shifted_min_profile(const grid_path& p);

// Nonnegative reflected profile R[j] = -m[j] for j < n, R[n] = R[0]
// (cyclic convention). Requires values[n] >= 0, which makes every entry >= 0.
// Returned as a raw vector: R[0] = -minimum(p) is nonzero in general, so R is
// not itself a grid_path.
std::vector<double> reflected_process(const grid_path& p);

}  // namespace cei
