#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cei/errors.hpp"

namespace cei {

struct test_report {
    std::string name;
    double statistic = 0.0;
    std::optional<double> p_value;
    std::optional<bool> exact_pass;
    std::pair<long, long> n_samples{0, 0};
    std::uint64_t seed = 0;
    bool passed = false;
    std::map<std::string, double> details;
};

// Survival function of the Kolmogorov distribution, Q(lambda) = P(K > lambda),
// evaluated by the alternating series for large lambda and its theta-dual for
// small lambda.
double kolmogorov_q(double lambda);

// Regularized lower incomplete gamma P(a, x) via series / continued fraction.
double regularized_gamma_p(double a, double x);
inline double regularized_gamma_q(double a, double x) { return 1.0 - regularized_gamma_p(a, x); }

// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value
// (Stephens-corrected effective sample size).
test_report ks_two_sample(const std::vector<double>& a, const std::vector<double>& b,
                          double alpha);

// One-sample KS against the uniform law on [0,1]; entries must lie in [0,1].
test_report ks_uniform(const std::vector<double>& a, double alpha);

// Chi-square independence test on a bins x bins contingency table built from
// equiprobable marginal bins; (bins-1)^2 degrees of freedom.
test_report chi2_independence(const std::vector<double>& a, const std::vector<double>& b,
                              int bins, double alpha);

// Exact total-variation comparison of two finite path distributions.
test_report exact_distribution_compare(const std::map<std::vector<double>, double>& d1,
                                       const std::map<std::vector<double>, double>& d2,
                                       double tol);

// Mean within k_sigma standard errors of target_mean and variance within
// k_sigma of target_var under the normal approximation of the estimators.
test_report moment_check(const std::vector<double>& a, double target_mean, double target_var,
                         double k_sigma);

}  // namespace cei
