#include "stance/behavior.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace stance::behavior {

std::vector<double> average_ranks(const std::vector<double>& values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    // Mean of 1-based ranks i+1 .. j+1 shared by the tie group.
    const double mean_rank = static_cast<double>(i + j + 2) / 2.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = mean_rank;
    i = j + 1;
  }
  return ranks;
}

double spearman_rho(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("spearman_rho: length mismatch");
  if (x.size() < 2) throw std::invalid_argument("spearman_rho: need at least 2 pairs");

  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const std::size_t n = x.size();
  const double mean = static_cast<double>(n + 1) / 2.0;

  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = rx[i] - mean;
    const double dy = ry[i] - mean;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0)
    throw std::invalid_argument("spearman_rho: constant input has no defined rank correlation");
  return sxy / std::sqrt(sxx * syy);
}

namespace {

// Continued fraction for the incomplete beta function (Lentz's method).
double betacf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 3e-16;
  constexpr double kFpMin = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double incomplete_beta_reg(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
  return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double student_t_two_tailed(double t, double nu) {
  if (nu <= 0.0) throw std::invalid_argument("student_t_two_tailed: dof must be > 0");
  const double x = nu / (nu + t * t);
  return incomplete_beta_reg(nu / 2.0, 0.5, x);
}

double spearman_pvalue(double rho, std::size_t n) {
  if (n < 3) throw std::invalid_argument("spearman_pvalue: need n >= 3");
  if (std::abs(rho) > 1.0 + 1e-12) throw std::invalid_argument("spearman_pvalue: |rho| > 1");
  if (std::abs(rho) >= 1.0) return 0.0;
  const double dof = static_cast<double>(n - 2);
  const double t = rho * std::sqrt(dof / (1.0 - rho * rho));
  return student_t_two_tailed(t, dof);
}

std::vector<CorrelationResult> pairwise_correlations(const profile::ProfileTable& profiles,
                                                     const std::vector<std::string>& topics) {
  const auto joined = profile::opinionated_user_join(profiles, topics);
  if (joined.size() < 3)
    throw std::invalid_argument("pairwise_correlations: fewer than 3 joined users");

  std::vector<CorrelationResult> results;
  for (std::size_t i = 0; i < topics.size(); ++i) {
    for (std::size_t j = i + 1; j < topics.size(); ++j) {
      std::vector<double> x, y;
      x.reserve(joined.size());
      y.reserve(joined.size());
      for (const auto& user : joined) {
        const auto& per_topic = profiles.rows.at(user);
        x.push_back(per_topic.at(topics[i]).support_pct);
        y.push_back(per_topic.at(topics[j]).support_pct);
      }
      CorrelationResult r;
      r.topic_a = topics[i];
      r.topic_b = topics[j];
      r.n = joined.size();
      r.rho = spearman_rho(x, y);
      r.p_value = spearman_pvalue(r.rho, r.n);
      results.push_back(std::move(r));
    }
  }
  return results;
}

ConditionalTable conditional_probability_table(const profile::ProfileTable& profiles,
                                               const std::string& target,
                                               const std::array<std::string, 2>& conditioners) {
  ConditionalTable table;
  table.target = target;
  table.conditioners = conditioners;

  const std::vector<std::string> topics = {target, conditioners[0], conditioners[1]};
  const auto joined = profile::opinionated_user_join(profiles, topics);
  if (joined.empty())
    throw std::invalid_argument("conditional_probability_table: empty user join");

  auto side = [](profile::UserCategory c) { return c == profile::UserCategory::Support ? 0 : 1; };
  for (const auto& user : joined) {
    const auto& per_topic = profiles.rows.at(user);
    const int i = side(per_topic.at(conditioners[0]).category);
    const int j = side(per_topic.at(conditioners[1]).category);
    ++table.cell_counts[i][j];
    if (per_topic.at(target).category == profile::UserCategory::Support)
      ++table.cell_support_counts[i][j];
  }
  table.n = joined.size();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      if (table.cell_counts[i][j] > 0)
        table.p_target_support[i][j] = static_cast<double>(table.cell_support_counts[i][j]) /
                                       static_cast<double>(table.cell_counts[i][j]);
  return table;
}

std::string ConditionalTable::to_text() const {
  std::ostringstream os;
  os << "target\t" << target << '\n';
  os << "conditioners\t" << conditioners[0] << '\t' << conditioners[1] << '\n';
  os << "n\t" << n << '\n';
  os << "cell\tp_target_support\tcount\tsupport_count\n";
  const char* names[2] = {"Support", "Against"};
  char buf[32];
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      os << names[i] << ',' << names[j] << '\t';
      if (p_target_support[i][j]) {
        std::snprintf(buf, sizeof(buf), "%.6f", *p_target_support[i][j]);
        os << buf;
      } else {
        os << "undefined";
      }
      os << '\t' << cell_counts[i][j] << '\t' << cell_support_counts[i][j] << '\n';
    }
  }
  return os.str();
}

QuadrantExport quadrant_export(const profile::ProfileTable& profiles, const std::string& topic_a,
                               const std::string& topic_b) {
  QuadrantExport q;
  q.topic_a = topic_a;
  q.topic_b = topic_b;
  const auto joined = profile::opinionated_user_join(profiles, {topic_a, topic_b});
  for (const auto& user : joined) {
    const auto& per_topic = profiles.rows.at(user);
    const double a = per_topic.at(topic_a).support_pct;
    const double b = per_topic.at(topic_b).support_pct;
    q.points.emplace_back(user, a, b);
    ++q.quadrant_counts[a >= 0.5 ? 0 : 1][b >= 0.5 ? 0 : 1];
  }
  return q;
}

void write_correlations(const std::string& path, const std::vector<CorrelationResult>& results) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write correlations file: " + path);
  out << "topic_a\ttopic_b\trho\tp_value\tn\n";
  char buf[96];
  for (const auto& r : results) {
    std::snprintf(buf, sizeof(buf), "%.6f\t%.6g", r.rho, r.p_value);
    out << r.topic_a << '\t' << r.topic_b << '\t' << buf << '\t' << r.n << '\n';
  }
}

void write_quadrants(const std::string& path, const QuadrantExport& q) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write quadrant file: " + path);
  out << "# quadrant_counts high_high=" << q.quadrant_counts[0][0]
      << " high_low=" << q.quadrant_counts[0][1] << " low_high=" << q.quadrant_counts[1][0]
      << " low_low=" << q.quadrant_counts[1][1] << '\n';
  out << "user_id\tsupport_pct_" << q.topic_a << "\tsupport_pct_" << q.topic_b << '\n';
  char buf[64];
  for (const auto& [user, a, b] : q.points) {
    std::snprintf(buf, sizeof(buf), "%.6f\t%.6f", a, b);
    out << user << '\t' << buf << '\n';
  }
}

}  // namespace stance::behavior
