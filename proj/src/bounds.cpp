#include "mldr/bounds.hpp"

namespace mldr {

MessageProfile MessageProfile::make(int d, std::vector<Rational> weights) {
  if (d < 1) throw InvalidParams("profile needs d >= 1");
  if (static_cast<int>(weights.size()) != d) throw SizeMismatch("profile needs exactly d weights");
  Rational sum;
  for (const Rational& w : weights) {
    if (w.sign() < 0) throw InvalidParams("profile weights must be nonnegative");
    sum += w;
  }
  if (sum != Rational(1)) throw InvalidParams("profile weights must sum to 1, got " + sum.str());
  return MessageProfile{d, std::move(weights)};
}

MessageProfile MessageProfile::from_sizes(const std::vector<Rational>& sizes) {
  Rational total;
  for (const Rational& s : sizes) {
    if (s.sign() < 0) throw InvalidParams("sizes must be nonnegative");
    total += s;
  }
  if (total.is_zero()) throw InvalidParams("at least one size must be positive");
  std::vector<Rational> w;
  w.reserve(sizes.size());
  for (const Rational& s : sizes) w.push_back(s / total);
  return make(static_cast<int>(sizes.size()), std::move(w));
}

Rational t_coeff(int d, int k) {
  if (d < 1 || k < 1 || k > d) throw InvalidParams("t_coeff requires 1 <= k <= d");
  long denom = 0;
  for (int i = 1; i <= k; ++i) denom += d + 1 - i;
  return Rational(1, denom);
}

Rational j_sum(int d) {
  if (d < 0) throw InvalidParams("j_sum requires d >= 0");
  return Rational(static_cast<long>(d) * (d + 1) / 2);
}

Rational bound_beta(const MessageProfile& profile) {
  Rational sum;
  for (int k = 1; k <= profile.d; ++k) sum += t_coeff(profile.d, k) * profile.weights[k - 1];
  return sum;
}

BoundSet bound_line(const MessageProfile& profile) {
  Rational floor = bound_beta(profile);
  return BoundSet{floor, j_sum(profile.d - 1), j_sum(profile.d) * floor};
}

RatePoint mbr_point(const MessageProfile& profile) {
  Rational floor = bound_beta(profile);
  return RatePoint{Rational(profile.d) * floor, floor};
}

RatePoint msr_point(const MessageProfile& profile) {
  RatePoint p;
  for (int k = 1; k <= profile.d; ++k) {
    const Rational& w = profile.weights[k - 1];
    p.alpha_bar += Rational(1, k) * w;
    p.beta_bar += Rational(1, static_cast<long>(k) * (profile.d - k + 1)) * w;
  }
  return p;
}

RatePoint separate_point(const std::vector<RatePoint>& per_level, const MessageProfile& profile) {
  if (static_cast<int>(per_level.size()) != profile.d) {
    throw SizeMismatch("separate_point needs one operating point per level");
  }
  RatePoint p;
  for (int k = 1; k <= profile.d; ++k) {
    const Rational& w = profile.weights[k - 1];
    p.alpha_bar += per_level[k - 1].alpha_bar * w;
    p.beta_bar += per_level[k - 1].beta_bar * w;
  }
  return p;
}

Feasibility feasible(const RatePoint& point, const MessageProfile& profile) {
  BoundSet b = bound_line(profile);
  Feasibility f;
  f.beta_slack = point.beta_bar - b.beta_floor;
  f.line_slack = point.alpha_bar + b.line_beta_coeff * point.beta_bar - b.line_rhs;
  f.feasible = f.beta_slack.sign() >= 0 && f.line_slack.sign() >= 0;
  return f;
}

}  // namespace mldr
