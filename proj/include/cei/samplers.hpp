#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "cei/grid_path.hpp"
#include "cei/rng.hpp"

namespace cei {

// Parameters of the canonical exchangeable-increment form
//   X_t = alpha*t + sigma*b_t + sum_i beta_i * (1{U_i <= t} - t)
// with b a bridge to 0 and U_i independent uniform jump times.
struct ei_params {
    double alpha = 0.0;
    double sigma = 1.0;
    std::vector<double> betas;
};

grid_path sample_brownian_motion(int n, rng_stream& rng);

// Bridge pinned to endpoint x: values[k] = W[k] - (k/n)*(W[n] - x), endpoint
// forced to x exactly.
grid_path sample_brownian_bridge(int n, double x, rng_stream& rng);

// Jump times snap to grid index ceil(U*n) (clamped to >= 1 so the path still
// starts at 0). Without x_end the endpoint is alpha; with x_end the path gains
// the linear drift t*(x_end - alpha) and is pinned to x_end exactly.
grid_path sample_ei_process(int n, const ei_params& params, std::optional<double> x_end,
                            rng_stream& rng);

// Euclidean norm of three independent Brownian motions.
grid_path sample_bessel3_process(int n, rng_stream& rng);

// Norm of a 3-d Brownian bridge from the origin to (x, 0, 0); endpoint forced
// to x exactly. Requires x >= 0.
grid_path sample_bessel3_bridge(int n, double x, rng_stream& rng);

// Brownian motion times the sign of its endpoint; values[n] > 0 (exact zeros
// are resampled).
grid_path sample_signed_bm(int n, rng_stream& rng);

// Uniformly random permutation of the increment multiset, cumulatively summed.
grid_path sample_discrete_cei_walk(const std::vector<double>& increments, rng_stream& rng);

struct rejection_result {
    grid_path path;
    long attempts = 0;
};

// Redraws from `base` until minimum(path) >= -epsilon; throws
// max_attempts_exceeded when the budget runs out.
rejection_result rejection_sample_conditioned_min(const std::function<grid_path()>& base,
                                                  double epsilon, long max_attempts);

}  // namespace cei
