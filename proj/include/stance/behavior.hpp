#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "stance/profile.hpp"

namespace stance::behavior {

struct CorrelationResult {
  std::string topic_a;
  std::string topic_b;
  double rho = 0.0;
  double p_value = 1.0;
  std::size_t n = 0;
};

// Fractional (average) ranks, 1-based; ties share the mean rank.
std::vector<double> average_ranks(const std::vector<double>& values);

// Pearson correlation of average ranks. Throws on length mismatch, length
// < 2, or a constant input.
double spearman_rho(const std::vector<double>& x, const std::vector<double>& y);

// Two-tailed p from t = rho * sqrt((n-2)/(1-rho^2)) against Student-t with
// n-2 dof; |rho| = 1 gives p = 0 by convention. Requires n >= 3.
double spearman_pvalue(double rho, std::size_t n);

// Regularized incomplete beta I_x(a, b); exposed for the p-value tests.
double incomplete_beta_reg(double a, double b, double x);

// Two-tailed Student-t tail probability P(|T| >= |t|) with nu dof.
double student_t_two_tailed(double t, double nu);

// Spearman over support_pct vectors of the joined non-Weak users, one
// result per unordered topic pair.
std::vector<CorrelationResult> pairwise_correlations(const profile::ProfileTable& profiles,
                                                     const std::vector<std::string>& topics);

struct ConditionalTable {
  std::string target;
  std::array<std::string, 2> conditioners;
  // Indexed [first conditioner category][second]: 0 = Support, 1 = Against.
  // Empty cells have no probability.
  std::array<std::array<std::optional<double>, 2>, 2> p_target_support;
  std::array<std::array<std::size_t, 2>, 2> cell_counts{};
  std::array<std::array<std::size_t, 2>, 2> cell_support_counts{};
  std::size_t n = 0;

  std::string to_text() const;
};

// P(target Support | conditioner categories) over users categorized
// (non-Weak) on all three topics. Zero-count cells stay undefined.
ConditionalTable conditional_probability_table(const profile::ProfileTable& profiles,
                                               const std::string& target,
                                               const std::array<std::string, 2>& conditioners);

struct QuadrantExport {
  std::string topic_a;
  std::string topic_b;
  std::vector<std::tuple<std::string, double, double>> points;  // user, pct_a, pct_b
  // [a-side][b-side]: 0 = high (>= 0.5), 1 = low.
  std::array<std::array<std::size_t, 2>, 2> quadrant_counts{};
};

// Boundary convention: support_pct >= 0.5 counts as the high side.
QuadrantExport quadrant_export(const profile::ProfileTable& profiles, const std::string& topic_a,
                               const std::string& topic_b);

void write_correlations(const std::string& path, const std::vector<CorrelationResult>& results);
void write_quadrants(const std::string& path, const QuadrantExport& q);

}  // namespace stance::behavior
