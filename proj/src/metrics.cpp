#include "kanood/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace kanood {

double auroc(std::span<const double> ind_scores, std::span<const double> ood_scores) {
    if (ind_scores.empty() || ood_scores.empty())
        throw std::invalid_argument("auroc: score lists must be nonempty");

    std::vector<double> ood(ood_scores.begin(), ood_scores.end());
    std::sort(ood.begin(), ood.end());

    int64_t greater2 = 0;  // 2 * wins + ties, exact
    for (double s : ind_scores) {
        const auto lo = std::lower_bound(ood.begin(), ood.end(), s);
        const auto hi = std::upper_bound(lo, ood.end(), s);
        greater2 += 2 * static_cast<int64_t>(lo - ood.begin());
        greater2 += static_cast<int64_t>(hi - lo);
    }
    const int64_t total2 =
        2 * static_cast<int64_t>(ind_scores.size()) * static_cast<int64_t>(ood.size());
    return static_cast<double>(greater2) / static_cast<double>(total2);
}

double fpr_at_95(std::span<const double> ind_scores, std::span<const double> ood_scores) {
    if (ind_scores.empty() || ood_scores.empty())
        throw std::invalid_argument("fpr_at_95: score lists must be nonempty");

    std::vector<double> ind(ind_scores.begin(), ind_scores.end());
    std::sort(ind.begin(), ind.end(), std::greater<>());
    const int64_t n = static_cast<int64_t>(ind.size());
    const int64_t keep = (19 * n + 19) / 20;  // ceil(0.95 n)
    const double threshold = ind[static_cast<size_t>(keep - 1)];

    int64_t false_positives = 0;
    for (double s : ood_scores)
        if (s >= threshold) ++false_positives;
    return static_cast<double>(false_positives) / static_cast<double>(ood_scores.size());
}

std::pair<double, double> overall_average(
    const std::vector<std::pair<double, double>>& per_dataset) {
    if (per_dataset.empty()) throw std::invalid_argument("overall_average: empty input");
    double mu = 0.0;
    double var = 0.0;
    for (const auto& [m, s] : per_dataset) {
        mu += m;
        var += s * s;
    }
    const double inv = 1.0 / static_cast<double>(per_dataset.size());
    return {mu * inv, std::sqrt(var * inv)};
}

SeedSweepStats seed_sweep_stats(const std::vector<std::pair<double, double>>& per_seed) {
    if (per_seed.size() < 2)
        throw std::invalid_argument("seed_sweep_stats: need at least 2 seeds");
    SeedSweepStats out;
    for (const auto& [mu, sigma] : per_seed) {
        out.mu_b += mu;
        out.sigma_b += sigma;
    }
    const double inv = 1.0 / static_cast<double>(per_seed.size());
    out.mu_b *= inv;
    out.sigma_b *= inv;
    double var = 0.0;
    for (const auto& [mu, sigma] : per_seed) var += (mu - out.mu_b) * (mu - out.mu_b);
    out.sigma_d = std::sqrt(var * inv);
    return out;
}

namespace detail {

// Continued-fraction evaluation (modified Lentz), standard numerical recipe.
double regularized_incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;

    const double ln_front =
        std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);

    auto contfrac = [](double a_, double b_, double x_) {
        constexpr double tiny = 1e-300;
        constexpr double eps = 1e-15;
        double c = 1.0;
        double d = 1.0 - (a_ + b_) * x_ / (a_ + 1.0);
        if (std::abs(d) < tiny) d = tiny;
        d = 1.0 / d;
        double h = d;
        for (int m = 1; m <= 300; ++m) {
            const double m2 = 2.0 * m;
            double num = m * (b_ - m) * x_ / ((a_ + m2 - 1.0) * (a_ + m2));
            d = 1.0 + num * d;
            if (std::abs(d) < tiny) d = tiny;
            c = 1.0 + num / c;
            if (std::abs(c) < tiny) c = tiny;
            d = 1.0 / d;
            h *= d * c;
            num = -(a_ + m) * (a_ + b_ + m) * x_ / ((a_ + m2) * (a_ + m2 + 1.0));
            d = 1.0 + num * d;
            if (std::abs(d) < tiny) d = tiny;
            c = 1.0 + num / c;
            if (std::abs(c) < tiny) c = tiny;
            d = 1.0 / d;
            const double delta = d * c;
            h *= delta;
            if (std::abs(delta - 1.0) < eps) break;
        }
        return h;
    };

    // symmetry keeps the continued fraction in its fast-converging region
    if (x < (a + 1.0) / (a + b + 2.0))
        return std::exp(ln_front) * contfrac(a, b, x) / a;
    return 1.0 - std::exp(std::lgamma(a + b) - std::lgamma(b) - std::lgamma(a) +
                          b * std::log1p(-x) + a * std::log(x)) *
                     contfrac(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, double dof) {
    // P(|T| >= t) = I_{dof/(dof+t^2)}(dof/2, 1/2)
    const double x = dof / (dof + t * t);
    return regularized_incomplete_beta(dof / 2.0, 0.5, x);
}

}  // namespace detail

double welch_t_test(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2)
        throw std::invalid_argument("welch_t_test: each sample needs at least 2 values");

    auto mean_var = [](std::span<const double> v) {
        double mean = 0.0;
        for (double x : v) mean += x;
        mean /= static_cast<double>(v.size());
        double var = 0.0;
        for (double x : v) var += (x - mean) * (x - mean);
        var /= static_cast<double>(v.size() - 1);
        return std::pair{mean, var};
    };

    const auto [ma, va] = mean_var(a);
    const auto [mb, vb] = mean_var(b);
    if (va == 0.0 && vb == 0.0)
        throw std::invalid_argument("welch_t_test: both samples have zero variance");

    const double sa = va / static_cast<double>(a.size());
    const double sb = vb / static_cast<double>(b.size());
    const double t = (ma - mb) / std::sqrt(sa + sb);
    const double dof = (sa + sb) * (sa + sb) /
                       (sa * sa / static_cast<double>(a.size() - 1) +
                        sb * sb / static_cast<double>(b.size() - 1));
    return detail::student_t_two_sided_p(std::abs(t), dof);
}

EvalReport finalize_report(std::vector<EvalSetResult> per_set) {
    EvalReport report;
    report.per_set = std::move(per_set);
    if (report.per_set.empty()) throw std::invalid_argument("finalize_report: no result sets");

    std::vector<std::pair<double, double>> per_dataset;
    double near_sum = 0.0, far_sum = 0.0;
    int near_n = 0, far_n = 0;
    for (const auto& set : report.per_set) {
        per_dataset.emplace_back(set.auroc_mean, set.auroc_sd);
        if (set.group == "near") {
            near_sum += set.auroc_mean;
            ++near_n;
        } else if (set.group == "far") {
            far_sum += set.auroc_mean;
            ++far_n;
        }
    }
    std::tie(report.mu_overall, report.sigma_overall) = overall_average(per_dataset);
    report.near_mean = near_n ? near_sum / near_n : 0.0;
    report.far_mean = far_n ? far_sum / far_n : 0.0;

    const size_t seeds = report.per_set.front().auroc_per_seed.size();
    if (seeds >= 2) {
        for (size_t s = 0; s < seeds; ++s) {
            double mean = 0.0;
            for (const auto& set : report.per_set) mean += set.auroc_per_seed[s];
            mean /= static_cast<double>(report.per_set.size());
            double var = 0.0;
            for (const auto& set : report.per_set) {
                const double d = set.auroc_per_seed[s] - mean;
                var += d * d;
            }
            var /= static_cast<double>(report.per_set.size());
            report.per_seed_stats.emplace_back(mean, std::sqrt(var));
        }
        report.sweep = seed_sweep_stats(report.per_seed_stats);
        report.has_seed_sweep = true;
    }
    return report;
}

}  // namespace kanood
