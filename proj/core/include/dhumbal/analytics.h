// Copyright 2026 The Dhumbal Bench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DHUMBAL_ANALYTICS_H_
#define DHUMBAL_ANALYTICS_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dhumbal/records.h"

namespace dhumbal {

struct WinRateInterval {
  double rate = 0.0;  // percent
  double low = 0.0;
  double high = 0.0;
};

// Normal-approximation interval on the percentage scale:
// w +- 1.96 * sqrt(w (100 - w) / n). Throws DomainError for rounds < 1 or
// wins outside [0, rounds].
WinRateInterval win_rate_ci(int wins, int rounds);
// Same interval from an already computed rate in percent.
WinRateInterval win_rate_ci_from_rate(double rate_percent, int rounds);

double mean(std::span<const double> xs);
// Unbiased (n - 1) variance; 0 for fewer than two values.
double sample_variance(std::span<const double> xs);

struct TTestResult {
  double t = 0.0;
  double p = 1.0;
  double df = 0.0;
};

// Two-tailed Welch test with Welch-Satterthwaite degrees of freedom. Both
// variances zero: equal means give t = 0, p = 1; different means give an
// infinite t and p = 0. Throws DomainError when a sample has fewer than two
// values.
TTestResult welch_t(std::span<const double> a, std::span<const double> b);

// (mean_a - mean_b) / pooled sd. Absent when the pooled sd is zero. Throws
// DomainError when n1 + n2 < 3.
std::optional<double> cohens_d(std::span<const double> a, std::span<const double> b);

// alpha / k; throws DomainError for k < 1.
double bonferroni(double alpha, int k);

// ceil(2 (z_{1-alpha/2} + z_{power})^2 sigma^2 / delta^2).
int power_sample_size(double sigma, double delta, double alpha = 0.05, double power = 0.80);

// Product-moment correlation; absent when either variance is zero. Throws
// DomainError on unequal lengths or fewer than two pairs.
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);

// Per-agent primary and secondary metrics. `names` lists the participants in
// agent-index order.
MetricsSummary summarize(std::span<const RoundRecord> records, std::span<const std::string> names);

// Index of the category winner: highest win rate, economic performance as
// the tie-breaker.
int category_winner(const MetricsSummary& summary);

enum class Metric { kWin, kEconomic, kJhyap, kCards, kRisk };
inline constexpr Metric kAllMetrics[] = {Metric::kWin, Metric::kEconomic, Metric::kJhyap,
                                         Metric::kCards, Metric::kRisk};
std::string_view to_string(Metric metric);

// Per-observation samples behind each metric: per-round win indicators,
// per-round coin deltas, per-call success indicators, per-round discard
// counts and per-call declared hand values.
std::vector<double> metric_samples(std::span<const RoundRecord> records, int agent, Metric metric);

struct ComparisonResult {
  std::string metric;
  int first = 0;
  int second = 0;
  std::optional<double> cohens_d;
  std::optional<double> t_stat;
  std::optional<double> p_value;
  // Of {0.05, 0.01, 0.001}, the levels still passed after dividing by the
  // number of comparisons.
  std::vector<double> significant_at;
  int n1 = 0;
  int n2 = 0;
};

// "*", "**", "***" for p below 0.05, 0.01, 0.001.
std::string significance_stars(std::optional<double> p);

// Every agent pair x every metric. Bonferroni k is the number of comparisons.
std::vector<ComparisonResult> pairwise_comparisons(std::span<const RoundRecord> records,
                                                   int num_agents);

// Plain-text table with the columns of the published result tables.
std::string format_summary_table(const MetricsSummary& summary, const std::string& title);
// metric,pair,d,p,stars
std::string format_comparison_csv(std::span<const ComparisonResult> results,
                                  std::span<const std::string> names);

}  // namespace dhumbal

#endif  // DHUMBAL_ANALYTICS_H_
