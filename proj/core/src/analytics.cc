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

#include "dhumbal/analytics.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/beta.hpp>

#include "dhumbal/errors.h"

namespace dhumbal {

namespace {

constexpr double kZ95 = 1.96;

std::string fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

std::string optional_fixed(const std::optional<double>& value, int decimals) {
  return value ? fixed(*value, decimals) : std::string("n/a");
}

}  // namespace

WinRateInterval win_rate_ci_from_rate(double rate, int rounds) {
  if (rounds < 1) throw DomainError("win rate needs at least one round");
  const double half = kZ95 * std::sqrt(rate * (100.0 - rate) / rounds);
  return {rate, rate - half, rate + half};
}

WinRateInterval win_rate_ci(int wins, int rounds) {
  if (rounds < 1) throw DomainError("win rate needs at least one round");
  if (wins < 0 || wins > rounds) throw DomainError("wins must lie in [0, rounds]");
  return win_rate_ci_from_rate(100.0 * wins / rounds, rounds);
}

double mean(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double sample_variance(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return ss / static_cast<double>(xs.size() - 1);
}

TTestResult welch_t(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) throw DomainError("Welch test needs two values per sample");
  const double n1 = static_cast<double>(a.size());
  const double n2 = static_cast<double>(b.size());
  const double diff = mean(a) - mean(b);
  const double q1 = sample_variance(a) / n1;
  const double q2 = sample_variance(b) / n2;
  const double se2 = q1 + q2;
  TTestResult r;
  if (se2 == 0.0) {
    r.df = n1 + n2 - 2;
    if (diff == 0.0) return r;
    r.t = diff > 0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
    r.p = 0.0;
    return r;
  }
  r.t = diff / std::sqrt(se2);
  r.df = se2 * se2 / (q1 * q1 / (n1 - 1) + q2 * q2 / (n2 - 1));
  // Two-tailed tail mass of Student t is I_{df/(df+t^2)}(df/2, 1/2).
  const double x = r.df / (r.df + r.t * r.t);
  r.p = std::clamp(boost::math::ibeta(r.df / 2.0, 0.5, x), 0.0, 1.0);
  return r;
}

std::optional<double> cohens_d(std::span<const double> a, std::span<const double> b) {
  const double n1 = static_cast<double>(a.size());
  const double n2 = static_cast<double>(b.size());
  if (a.empty() || b.empty() || n1 + n2 < 3) throw DomainError("Cohen's d needs n1 + n2 >= 3");
  const double pooled =
      std::sqrt(((n1 - 1) * sample_variance(a) + (n2 - 1) * sample_variance(b)) / (n1 + n2 - 2));
  if (pooled == 0.0) return std::nullopt;
  return (mean(a) - mean(b)) / pooled;
}

double bonferroni(double alpha, int k) {
  if (k < 1) throw DomainError("Bonferroni correction needs k >= 1");
  return alpha / k;
}

int power_sample_size(double sigma, double delta, double alpha, double power) {
  if (sigma <= 0 || delta <= 0) throw DomainError("sigma and delta must be positive");
  if (alpha <= 0 || alpha >= 1 || power <= 0 || power >= 1) {
    throw DomainError("alpha and power must lie in (0, 1)");
  }
  const boost::math::normal standard;
  const double z = boost::math::quantile(standard, 1 - alpha / 2) +
                   boost::math::quantile(standard, power);
  return static_cast<int>(std::ceil(2 * z * z * sigma * sigma / (delta * delta)));
}

std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DomainError("Pearson needs equal-length samples");
  if (x.size() < 2) throw DomainError("Pearson needs at least two pairs");
  const double mx = mean(x), my = mean(y);
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0 || syy == 0) return std::nullopt;
  return sxy / std::sqrt(sxx * syy);
}

MetricsSummary summarize(std::span<const RoundRecord> records, std::span<const std::string> names) {
  MetricsSummary s;
  const int n_agents = static_cast<int>(names.size());
  s.rounds = static_cast<int>(records.size());
  s.agents.resize(n_agents);
  for (int a = 0; a < n_agents; ++a) s.agents[a].name = names[a];
  if (records.empty()) return s;

  std::vector<double> delta_sum(n_agents), cards(n_agents), reward(n_agents), hand(n_agents),
      turns(n_agents), ms(n_agents);
  std::vector<long> decisions(n_agents), rounds_seated(n_agents);
  std::vector<std::vector<double>> call_values(n_agents), call_success(n_agents);
  for (const auto& r : records) {
    if (!r.winner) ++s.draws;
    for (int seat = 0; seat < static_cast<int>(r.seating.size()); ++seat) {
      const int a = r.seating[seat];
      if (a < 0 || a >= n_agents) throw ParseError("seating refers to an unknown agent");
      const auto& st = r.agents.at(a);
      ++rounds_seated[a];
      delta_sum[a] += static_cast<double>(st.coin_delta);
      s.agents[a].total_coin_delta += st.coin_delta;
      cards[a] += st.cards_discarded;
      reward[a] += st.reward;
      hand[a] += st.final_hand_value;
      turns[a] += r.turns;
      decisions[a] += st.decisions;
      ms[a] += st.decision_ms;
      if (r.winner == a) ++s.agents[a].wins;
    }
    if (r.jhyap) {
      const int a = r.jhyap->agent;
      ++s.agents[a].jhyap_calls;
      if (r.jhyap->success) ++s.agents[a].jhyap_successes;
      call_values[a].push_back(r.jhyap->hand_value);
      call_success[a].push_back(r.jhyap->success ? 1.0 : 0.0);
    }
  }
  for (int a = 0; a < n_agents; ++a) {
    auto& m = s.agents[a];
    const auto ci = win_rate_ci(m.wins, s.rounds);
    m.win_rate = ci.rate;
    m.ci_low = ci.low;
    m.ci_high = ci.high;
    const double n = static_cast<double>(std::max<long>(rounds_seated[a], 1));
    m.economic_performance = delta_sum[a] / n;
    m.cards_per_round = cards[a] / n;
    m.avg_reward = reward[a] / n;
    m.avg_hand_value = hand[a] / n;
    m.avg_turns = turns[a] / n;
    if (decisions[a] > 0) m.avg_decision_ms = ms[a] / static_cast<double>(decisions[a]);
    if (m.jhyap_calls > 0) m.jhyap_success = 100.0 * m.jhyap_successes / m.jhyap_calls;
    if (call_values[a].size() >= 2) m.risk_correlation = pearson(call_values[a], call_success[a]);
  }
  return s;
}

int category_winner(const MetricsSummary& summary) {
  int best = 0;
  for (int a = 1; a < static_cast<int>(summary.agents.size()); ++a) {
    const auto& m = summary.agents[a];
    const auto& b = summary.agents[best];
    if (m.win_rate > b.win_rate ||
        (m.win_rate == b.win_rate && m.economic_performance > b.economic_performance)) {
      best = a;
    }
  }
  return best;
}

std::string_view to_string(Metric metric) {
  switch (metric) {
    case Metric::kWin: return "win";
    case Metric::kEconomic: return "economic";
    case Metric::kJhyap: return "jhyap";
    case Metric::kCards: return "cards";
    case Metric::kRisk: return "risk";
  }
  return "?";
}

std::vector<double> metric_samples(std::span<const RoundRecord> records, int agent, Metric metric) {
  std::vector<double> out;
  for (const auto& r : records) {
    const bool seated = std::find(r.seating.begin(), r.seating.end(), agent) != r.seating.end();
    switch (metric) {
      case Metric::kWin:
        if (seated) out.push_back(r.winner == agent ? 1.0 : 0.0);
        break;
      case Metric::kEconomic:
        if (seated) out.push_back(static_cast<double>(r.agents.at(agent).coin_delta));
        break;
      case Metric::kCards:
        if (seated) out.push_back(r.agents.at(agent).cards_discarded);
        break;
      case Metric::kJhyap:
        if (r.jhyap && r.jhyap->agent == agent) out.push_back(r.jhyap->success ? 1.0 : 0.0);
        break;
      case Metric::kRisk:
        if (r.jhyap && r.jhyap->agent == agent) out.push_back(r.jhyap->hand_value);
        break;
    }
  }
  return out;
}

std::string significance_stars(std::optional<double> p) {
  if (!p) return "";
  if (*p < 0.001) return "***";
  if (*p < 0.01) return "**";
  if (*p < 0.05) return "*";
  return "";
}

std::vector<ComparisonResult> pairwise_comparisons(std::span<const RoundRecord> records,
                                                   int num_agents) {
  std::vector<ComparisonResult> out;
  const int pairs = num_agents * (num_agents - 1) / 2;
  const int k = std::max(1, pairs * static_cast<int>(std::size(kAllMetrics)));
  for (Metric metric : kAllMetrics) {
    for (int i = 0; i < num_agents; ++i) {
      for (int j = i + 1; j < num_agents; ++j) {
        ComparisonResult c;
        c.metric = std::string(to_string(metric));
        c.first = i;
        c.second = j;
        const auto a = metric_samples(records, i, metric);
        const auto b = metric_samples(records, j, metric);
        c.n1 = static_cast<int>(a.size());
        c.n2 = static_cast<int>(b.size());
        if (a.size() >= 2 && b.size() >= 2) {
          const auto t = welch_t(a, b);
          c.t_stat = t.t;
          c.p_value = t.p;
          c.cohens_d = cohens_d(a, b);
          for (double level : {0.05, 0.01, 0.001}) {
            if (t.p < bonferroni(level, k)) c.significant_at.push_back(level);
          }
        }
        out.push_back(std::move(c));
      }
    }
  }
  return out;
}

std::string format_summary_table(const MetricsSummary& summary, const std::string& title) {
  std::ostringstream os;
  os << title << " (" << summary.rounds << " rounds, " << summary.draws << " draws)\n";
  char line[256];
  std::snprintf(line, sizeof line, "%-16s %8s %18s %10s %10s %8s %8s %12s\n", "Agent", "Win(%)",
                "95% CI(%)", "Econ.", "Jhyap(%)", "Calls", "Cards", "Dec.Time(ms)");
  os << line;
  for (const auto& m : summary.agents) {
    const std::string ci = "[" + fixed(m.ci_low, 2) + ", " + fixed(m.ci_high, 2) + "]";
    std::snprintf(line, sizeof line, "%-16s %8s %18s %10s %10s %8d %8s %12s\n", m.name.c_str(),
                  fixed(m.win_rate, 2).c_str(), ci.c_str(), fixed(m.economic_performance, 2).c_str(),
                  optional_fixed(m.jhyap_success, 2).c_str(), m.jhyap_calls,
                  fixed(m.cards_per_round, 2).c_str(), optional_fixed(m.avg_decision_ms, 3).c_str());
    os << line;
  }
  return os.str();
}

std::string format_comparison_csv(std::span<const ComparisonResult> results,
                                  std::span<const std::string> names) {
  std::ostringstream os;
  os << "metric,pair,d,p,stars\n";
  for (const auto& c : results) {
    os << c.metric << ',' << names[c.first] << " vs " << names[c.second] << ','
       << (c.cohens_d ? fixed(*c.cohens_d, 3) : "") << ',';
    if (c.p_value) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.3g", *c.p_value);
      os << buf;
    }
    os << ',' << significance_stars(c.p_value) << '\n';
  }
  return os.str();
}

}  // namespace dhumbal
