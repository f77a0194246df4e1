#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace kanood {

// Probability that a random InD score exceeds a random OOD score, ties
// counted 1/2 (Mann-Whitney formulation). Pair counts are accumulated in
// exact integer arithmetic.
double auroc(std::span<const double> ind_scores, std::span<const double> ood_scores);

// Fraction of OOD scores at or above the threshold that keeps >= 95% of InD
// scores. The threshold is the largest score t with |{ind >= t}| >=
// ceil(0.95 n); predicted-InD means score >= t (lower-value-inclusive).
double fpr_at_95(std::span<const double> ind_scores, std::span<const double> ood_scores);

// mu_overall = mean of mu_i, sigma_overall = sqrt(mean of sigma_i^2).
std::pair<double, double> overall_average(
    const std::vector<std::pair<double, double>>& per_dataset);

struct SeedSweepStats {
    double mu_b = 0.0;     // mean of per-seed means
    double sigma_b = 0.0;  // mean of per-seed standard deviations
    double sigma_d = 0.0;  // sqrt(mean of (mu_i - mu_b)^2)
};
SeedSweepStats seed_sweep_stats(const std::vector<std::pair<double, double>>& per_seed);

// Two-sided Welch's t-test p-value. The t CDF uses the regularized
// incomplete beta function evaluated by continued fraction.
double welch_t_test(std::span<const double> a, std::span<const double> b);

namespace detail {
// Exposed for the t-CDF integration oracle in tests.
double regularized_incomplete_beta(double a, double b, double x);
double student_t_two_sided_p(double t, double dof);
}  // namespace detail

struct EvalSetResult {
    std::string name;
    std::string group;  // "near", "far", or ""
    double auroc_mean = 0.0;
    double auroc_sd = 0.0;  // population SD over seeds; 0 for a single seed
    double fpr95_mean = 0.0;
    double fpr95_sd = 0.0;
    int n_ind = 0;
    int n_ood = 0;
    std::vector<double> auroc_per_seed;
    std::vector<double> fpr95_per_seed;
};

struct EvalReport {
    std::vector<EvalSetResult> per_set;
    double near_mean = 0.0;  // mean AUROC over near-group sets
    double far_mean = 0.0;
    double mu_overall = 0.0;
    double sigma_overall = 0.0;
    bool has_seed_sweep = false;
    std::vector<std::pair<double, double>> per_seed_stats;  // (mean, SD) across sets
    SeedSweepStats sweep;
};

// Assembles group means, the overall average, and (for >= 2 seeds) the
// seed-sweep statistics from the per-set, per-seed AUROC values.
EvalReport finalize_report(std::vector<EvalSetResult> per_set);

}  // namespace kanood
