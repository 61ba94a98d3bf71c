#pragma once

#include <memory>
#include <string>

#include "mldr/prover/certificate.hpp"
#include "mldr/prover/model.hpp"
#include "mldr/prover/simplex.hpp"

namespace mldr::prover {

struct ProveOptions {
  SymmetryMode symmetry = SymmetryMode::Equalities;
  double tolerance = 1e-7;       // float threshold for a zero LP value
  bool want_certificate = true;  // attempt the exact stage
  SimplexOptions simplex;
};

// Outcome of one query. A PROVEN verdict always carries an exact certificate
// (re-verified against the problem rows); a NOT_IMPLIED verdict carries the
// most violating normalized point, exact when the model is small enough to
// re-derive it in rational arithmetic.
struct Verdict {
  enum class Status { Proven, NotImplied };
  Status status = Status::Proven;
  bool proven() const { return status == Status::Proven; }

  bool exact = false;
  double lp_value_float = 0;  // minimum of the query over the normalized set
  Rational lp_value;          // meaningful when exact
  bool unbounded = false;     // query decreases without bound
  Certificate certificate;    // when proven and exact
  std::vector<std::pair<std::string, Rational>> witness;  // when rejected and exact
  int simplex_iterations = 0;
  std::string query_name;
  std::shared_ptr<const LpProblem> problem;
};

Verdict prove(const LpProblem& lp, const ProveOptions& options = {});
Verdict prove(const GroundModel& model, const LinearQuery& query,
              const ProveOptions& options = {});

// The two outer storage/repair trade-off bounds on the (d+1)-node system,
// checked against the full model. Throws ModelTooLarge when the model does
// not fit the LP size limit.
struct TheoremCheck {
  Verdict repair_bound;   // beta >= sum of weighted message rates
  Verdict storage_bound;  // alpha plus weighted beta >= scaled rate sum
};
TheoremCheck theorem_check(int d, const ProveOptions& options = {});

// Queries the theorem verdicts are built from, exposed for reuse.
LinearQuery repair_bound_query(int d);
LinearQuery storage_bound_query(int d);

}  // namespace mldr::prover
