#include "cei/stats.hpp"

#include <algorithm>
#include <cmath>

namespace cei {

double kolmogorov_q(double lambda) {
    if (lambda <= 0.0) return 1.0;
    if (lambda < 1.18) {
        // Theta-dual branch: Q = 1 - sqrt(2*pi)/lambda * sum exp(-(2j-1)^2 pi^2 / (8 lambda^2)).
        const double t = std::exp(-M_PI * M_PI / (8.0 * lambda * lambda));
        const double sum = t * (1.0 + std::pow(t, 8) * (1.0 + std::pow(t, 16) * (1.0 + std::pow(t, 24))));
        return 1.0 - std::sqrt(2.0 * M_PI) / lambda * sum;
    }
    double sum = 0.0;
    double sign = 1.0;
    for (int j = 1; j <= 100; ++j) {
        const double term = std::exp(-2.0 * j * j * lambda * lambda);
        sum += sign * term;
        if (term < 1e-18) break;
        sign = -sign;
    }
    return std::max(0.0, 2.0 * sum);
}

double regularized_gamma_p(double a, double x) {
    if (a <= 0.0 || x < 0.0) fail(errc::out_of_range, "gamma_p domain");
    if (x == 0.0) return 0.0;
    const double lg = std::lgamma(a);
    if (x < a + 1.0) {
        // Series expansion of the lower incomplete gamma.
        double term = 1.0 / a;
        double sum = term;
        for (int k = 1; k <= 10000; ++k) {
            term *= x / (a + k);
            sum += term;
            if (std::abs(term) < std::abs(sum) * 1e-16) break;
        }
        return sum * std::exp(-x + a * std::log(x) - lg);
    }
    // Modified Lentz continued fraction for the upper incomplete gamma.
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 10000; ++i) {
        const double an = -1.0 * i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    const double q = std::exp(-x + a * std::log(x) - lg) * h;
    return 1.0 - q;
}

namespace {

double ks_statistic_two_sample(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const std::size_t m = a.size(), n = b.size();
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < m && j < n) {
        const double x = std::min(a[i], b[j]);
        while (i < m && a[i] <= x) ++i;
        while (j < n && b[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / m - static_cast<double>(j) / n));
    }
    return d;
}

double ks_p_value(double d, double effective_n) {
    const double en = std::sqrt(effective_n);
    return kolmogorov_q((en + 0.12 + 0.11 / en) * d);
}

}  // namespace

test_report ks_two_sample(const std::vector<double>& a, const std::vector<double>& b,
                          double alpha) {
    if (a.empty() || b.empty()) fail(errc::empty_sample, "ks_two_sample needs nonempty samples");
    test_report r;
    r.statistic = ks_statistic_two_sample(a, b);
    const double m = static_cast<double>(a.size()), n = static_cast<double>(b.size());
    r.p_value = ks_p_value(r.statistic, m * n / (m + n));
    r.n_samples = {static_cast<long>(a.size()), static_cast<long>(b.size())};
    r.passed = *r.p_value > alpha;
    return r;
}

test_report ks_uniform(const std::vector<double>& a, double alpha) {
    if (a.empty()) fail(errc::empty_sample, "ks_uniform needs a nonempty sample");
    std::vector<double> s = a;
    for (double v : s)
        if (v < 0.0 || v > 1.0) fail(errc::out_of_range, "ks_uniform entries must lie in [0,1]");
    std::sort(s.begin(), s.end());
    const std::size_t m = s.size();
    double d = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        const double hi = static_cast<double>(k + 1) / m - s[k];
        const double lo = s[k] - static_cast<double>(k) / m;
        d = std::max({d, hi, lo});
    }
    test_report r;
    r.statistic = d;
    r.p_value = ks_p_value(d, static_cast<double>(m));
    r.n_samples = {static_cast<long>(m), 0};
    r.passed = *r.p_value > alpha;
    return r;
}

test_report chi2_independence(const std::vector<double>& a, const std::vector<double>& b,
                              int bins, double alpha) {
    if (a.size() != b.size()) fail(errc::length_mismatch, "chi2_independence samples");
    const long N = static_cast<long>(a.size());
    if (N < 10L * bins * bins) fail(errc::too_few_samples, "chi2_independence needs >= 10*bins^2");

    auto bin_of = [bins, N](const std::vector<double>& sorted, double v) {
        // Equiprobable bins by empirical quantiles of the sample itself.
        int lo = 0;
        for (int q = 1; q < bins; ++q) {
            const double edge = sorted[static_cast<std::size_t>((static_cast<long long>(N) * q) / bins)];
            if (v >= edge)
                lo = q;
            else
                break;
        }
        return lo;
    };
    std::vector<double> sa = a, sb = b;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    std::vector<long> table(static_cast<std::size_t>(bins) * bins, 0);
    std::vector<long> row(bins, 0), col(bins, 0);
    for (long i = 0; i < N; ++i) {
        const int ra = bin_of(sa, a[static_cast<std::size_t>(i)]);
        const int rb = bin_of(sb, b[static_cast<std::size_t>(i)]);
        ++table[static_cast<std::size_t>(ra) * bins + rb];
        ++row[ra];
        ++col[rb];
    }
    double stat = 0.0;
    for (int i = 0; i < bins; ++i)
        for (int j = 0; j < bins; ++j) {
            const double expect = static_cast<double>(row[i]) * col[j] / N;
            if (expect > 0.0) {
                const double diff = table[static_cast<std::size_t>(i) * bins + j] - expect;
                stat += diff * diff / expect;
            }
        }
    const double df = static_cast<double>(bins - 1) * (bins - 1);
    test_report r;
    r.statistic = stat;
    r.p_value = regularized_gamma_q(df / 2.0, stat / 2.0);
    r.n_samples = {N, N};
    r.passed = *r.p_value > alpha;
    return r;
}

test_report exact_distribution_compare(const std::map<std::vector<double>, double>& d1,
                                       const std::map<std::vector<double>, double>& d2,
                                       double tol) {
    auto total = [](const std::map<std::vector<double>, double>& d) {
        double s = 0.0;
        for (const auto& [k, p] : d) s += p;
        return s;
    };
    if (std::abs(total(d1) - 1.0) > tol || std::abs(total(d2) - 1.0) > tol)
        fail(errc::unnormalized, "distributions must sum to 1 within tol");
    double tv = 0.0;
    for (const auto& [k, p] : d1) {
        auto it = d2.find(k);
        tv += std::abs(p - (it == d2.end() ? 0.0 : it->second));
    }
    for (const auto& [k, q] : d2)
        if (d1.find(k) == d1.end()) tv += q;
    tv /= 2.0;
    test_report r;
    r.statistic = tv;
    r.exact_pass = tv <= tol;
    r.n_samples = {static_cast<long>(d1.size()), static_cast<long>(d2.size())};
    r.passed = *r.exact_pass;
    r.details["tv_distance"] = tv;
    return r;
}

test_report moment_check(const std::vector<double>& a, double target_mean, double target_var,
                         double k_sigma) {
    if (a.size() < 30) fail(errc::too_few_samples, "moment_check needs >= 30 samples");
    const double N = static_cast<double>(a.size());
    double mean = 0.0;
    for (double v : a) mean += v;
    mean /= N;
    double var = 0.0;
    for (double v : a) var += (v - mean) * (v - mean);
    var /= (N - 1.0);
    const double se_mean = std::sqrt(var / N);
    const double se_var = target_var * std::sqrt(2.0 / (N - 1.0));
    test_report r;
    r.statistic = std::abs(mean - target_mean) / (se_mean > 0.0 ? se_mean : 1.0);
    r.n_samples = {static_cast<long>(a.size()), 0};
    const bool mean_ok = std::abs(mean - target_mean) <= k_sigma * se_mean;
    const bool var_ok = std::abs(var - target_var) <= k_sigma * se_var;
    r.exact_pass = mean_ok && var_ok;
    r.passed = *r.exact_pass;
    r.details["sample_mean"] = mean;
    r.details["sample_var"] = var;
    return r;
}

}  // namespace cei
