#pragma once

#include <cstdint>
#include <vector>

#include "linalg.hpp"

namespace qgd {

double mean_of(const std::vector<double>& v);
double sample_variance(const std::vector<double>& v);

// (mean_a - mean_b) / s_pooled; NaN when the pooled variance vanishes
double cohens_d(const std::vector<double>& a, const std::vector<double>& b);

// (#{a_i > b_j} - #{a_i < b_j}) / (n_a n_b)
double cliffs_delta(const std::vector<double>& a, const std::vector<double>& b);

// ceil(n^(1/3))
int bootstrap_block_length(int n);

struct BootstrapCi {
    double lo = 0.0, hi = 0.0;
    bool flagged = false;  // more than 1% undefined resamples
};

// Circular moving-block bootstrap of each sample with its own block length;
// percentile 2.5/97.5 of the resampled Cohen's d.
BootstrapCi block_bootstrap_ci(const std::vector<double>& crisis, const std::vector<double>& normal,
                               int n_resamples = 10000, std::uint64_t seed = 42);

struct WelchResult {
    double t = 0.0;
    double dof = 0.0;
    double p = 1.0;  // two-sided
};

WelchResult welch_t(const std::vector<double>& a, const std::vector<double>& b);

// Holm step-down adjustment; preserves input order
std::vector<double> holm_adjust(const std::vector<double>& p_values);

// two-sided permutation test on the mean difference with add-one smoothing
double permutation_test(const std::vector<double>& crisis, const std::vector<double>& normal,
                        int n_perm = 5000, std::uint64_t seed = 42);

struct FriedmanResult {
    double chi2 = 0.0;
    double p = 1.0;
    double cd = 0.0;                 // Nemenyi critical difference at alpha
    std::vector<double> mean_ranks;  // per method, rank 1 = largest score
};

// scores: crises x methods, ranked per crisis with midranks for ties
FriedmanResult friedman_nemenyi(const RMatrix& scores, double alpha = 0.05);

// Demsar-normalized studentized range quantile q_alpha(k) (infinite dof),
// i.e. the upper-alpha studentized range point divided by sqrt(2).
double studentized_range_q(double alpha, int k);

// special functions backing the tests above
double normal_cdf(double x);
double regularized_gamma_q(double a, double x);   // chi-square survival via Q(a, x)
double regularized_beta(double a, double b, double x);
double student_t_sf_two_sided(double t, double dof);

}  // namespace qgd
