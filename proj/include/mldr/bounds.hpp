#pragma once

#include <vector>

#include "mldr/rational.hpp"

namespace mldr {

// Normalized message sizes: d nonnegative weights that sum to exactly 1.
// weights[k-1] is the share of total data carried by priority level k.
struct MessageProfile {
  int d = 0;
  std::vector<Rational> weights;

  // Validates shape, nonnegativity and the unit sum.
  static MessageProfile make(int d, std::vector<Rational> weights);

  // Builds the profile from raw (unnormalized) sizes.
  static MessageProfile from_sizes(const std::vector<Rational>& sizes);
};

// Normalized per-object (storage, repair-bandwidth) operating point.
struct RatePoint {
  Rational alpha_bar;
  Rational beta_bar;

  bool operator==(const RatePoint&) const = default;
};

// The two outer bounds induced by a profile:
//   beta_bar >= beta_floor
//   alpha_bar + line_beta_coeff * beta_bar >= line_rhs
struct BoundSet {
  Rational beta_floor;
  Rational line_beta_coeff;
  Rational line_rhs;
};

// Exact slacks of a point against both bounds; negative slack = violated.
struct Feasibility {
  bool feasible = false;
  Rational beta_slack;
  Rational line_slack;
};

// 1 / sum_{i=1..k} (d+1-i); the per-level bandwidth normalization constant.
Rational t_coeff(int d, int k);

// 0 + 1 + ... + d = d(d+1)/2.
Rational j_sum(int d);

// Floor on beta_bar: sum_k t_coeff(d,k) * weight_k.
Rational bound_beta(const MessageProfile& profile);

// The tradeoff line alpha_bar + j_sum(d-1) * beta_bar >= j_sum(d) * floor.
BoundSet bound_line(const MessageProfile& profile);

// Intersection of the two bounds: (d * floor, floor).
RatePoint mbr_point(const MessageProfile& profile);

// Weighted sum of per-level minimum-storage points (1/k, 1/(k(d-k+1))).
RatePoint msr_point(const MessageProfile& profile);

// Rate of a stacked scheme: weighted sum of per-level operating points.
RatePoint separate_point(const std::vector<RatePoint>& per_level, const MessageProfile& profile);

// Exact feasibility of a point against both bounds, with per-bound slack.
Feasibility feasible(const RatePoint& point, const MessageProfile& profile);

}  // namespace mldr
