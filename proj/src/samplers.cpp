#include "cei/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace cei {

grid_path sample_brownian_motion(int n, rng_stream& rng) {
    if (n < 2) fail(errc::too_short, "resolution must be >= 2");
    std::vector<double> v(n + 1);
    const double step = std::sqrt(1.0 / n);
    v[0] = 0.0;
    for (int k = 1; k <= n; ++k) v[k] = v[k - 1] + step * rng.next_gaussian();
    return grid_path{std::move(v)};
}

grid_path sample_brownian_bridge(int n, double x, rng_stream& rng) {
    grid_path w = sample_brownian_motion(n, rng);
    const double gap = w.values[n] - x;
    for (int k = 1; k <= n; ++k) w.values[k] -= (static_cast<double>(k) / n) * gap;
    w.values[n] = x;
    return w;
}

grid_path sample_ei_process(int n, const ei_params& params, std::optional<double> x_end,
                            rng_stream& rng) {
    if (n < 2) fail(errc::too_short, "resolution must be >= 2");
    for (double b : params.betas)
        if (b == 0.0 || !std::isfinite(b)) fail(errc::out_of_range, "jump sizes must be finite and nonzero");
    if (params.sigma < 0.0) fail(errc::out_of_range, "sigma must be >= 0");
    grid_path b = sample_brownian_bridge(n, 0.0, rng);
    std::vector<double> v(n + 1);
    const double drift = x_end ? *x_end : params.alpha;  // x_end repins via linear drift
    for (int k = 0; k <= n; ++k) {
        const double t = static_cast<double>(k) / n;
        v[k] = drift * t + params.sigma * b.values[k];
    }
    for (double beta : params.betas) {
        int j = static_cast<int>(std::ceil(rng.next_uniform() * n));
        if (j < 1) j = 1;  // keep the start at 0 even if the uniform draw is exactly 0
        for (int k = 0; k <= n; ++k) {
            const double t = static_cast<double>(k) / n;
            v[k] += beta * ((k >= j ? 1.0 : 0.0) - t);
        }
    }
    v[0] = 0.0;
    v[n] = x_end ? *x_end : params.alpha;
    return grid_path{std::move(v)};
}

grid_path sample_bessel3_process(int n, rng_stream& rng) {
    grid_path a = sample_brownian_motion(n, rng);
    grid_path b = sample_brownian_motion(n, rng);
    grid_path c = sample_brownian_motion(n, rng);
    std::vector<double> v(n + 1);
    for (int k = 0; k <= n; ++k)
        v[k] = std::sqrt(a.values[k] * a.values[k] + b.values[k] * b.values[k] +
                         c.values[k] * c.values[k]);
    return grid_path{std::move(v)};
}

grid_path sample_bessel3_bridge(int n, double x, rng_stream& rng) {
    if (x < 0.0) fail(errc::negative_endpoint, "bessel bridge endpoint must be >= 0");
    grid_path a = sample_brownian_bridge(n, x, rng);
    grid_path b = sample_brownian_bridge(n, 0.0, rng);
    grid_path c = sample_brownian_bridge(n, 0.0, rng);
    std::vector<double> v(n + 1);
    for (int k = 0; k <= n; ++k)
        v[k] = std::sqrt(a.values[k] * a.values[k] + b.values[k] * b.values[k] +
                         c.values[k] * c.values[k]);
    v[n] = x;
    return grid_path{std::move(v)};
}

grid_path sample_signed_bm(int n, rng_stream& rng) {
    for (;;) {
        grid_path w = sample_brownian_motion(n, rng);
        if (w.values[n] == 0.0) continue;
        if (w.values[n] < 0.0)
            for (double& v : w.values) v = -v;
        return w;
    }
}

grid_path sample_discrete_cei_walk(const std::vector<double>& increments, rng_stream& rng) {
    if (increments.empty()) fail(errc::too_short, "increment multiset is empty");
    std::vector<double> inc = increments;
    for (int i = static_cast<int>(inc.size()) - 1; i > 0; --i)
        std::swap(inc[i], inc[rng.next_index(i + 1)]);
    std::vector<double> v(inc.size() + 1);
    v[0] = 0.0;
    for (std::size_t k = 0; k < inc.size(); ++k) v[k + 1] = v[k] + inc[k];
    return grid_path{std::move(v)};
}

rejection_result rejection_sample_conditioned_min(const std::function<grid_path()>& base,
                                                  double epsilon, long max_attempts) {
    if (epsilon <= 0.0) fail(errc::out_of_range, "epsilon must be > 0");
    if (max_attempts < 1) fail(errc::out_of_range, "max_attempts must be >= 1");
    for (long attempt = 1; attempt <= max_attempts; ++attempt) {
        grid_path p = base();
        if (minimum(p) >= -epsilon) return rejection_result{std::move(p), attempt};
    }
    fail(errc::max_attempts_exceeded,
         "no accepted path in " + std::to_string(max_attempts) + " attempts");
}

}  // namespace cei
