#include "mldr/prover/prove.hpp"

#include <cmath>
#include <limits>

#include "mldr/bounds.hpp"

namespace mldr::prover {

namespace {

struct DualForm {
  SparseMatrix A;
  std::vector<DualColumn> dcols;
  std::vector<char> free_cols;
  std::vector<double> cost;
  std::vector<double> b;
};

// The query is proven iff  min query.x  over the primal description is zero.
// That minimum is found through the multiplier side:  min v  subject to the
// row combination reproducing the query, v being the normalization-row
// multiplier; the primal minimum is -v. Inequality rows contribute one
// nonnegative column, equality rows one sign-unrestricted column.
DualForm build_dual_form(const LpProblem& lp) {
  DualForm d;
  d.A.m = lp.n_cols;
  d.A.start.push_back(0);
  for (int r = 0; r < static_cast<int>(lp.rows.size()); ++r) {
    const LpRow& row = lp.rows[r];
    for (const auto& [col, coeff] : row.terms) {
      d.A.row.push_back(col);
      d.A.val.push_back(coeff.to_double());
    }
    d.A.start.push_back(static_cast<int>(d.A.row.size()));
    d.cost.push_back(-row.rhs.to_double());
    d.dcols.push_back({r, 1});
    d.free_cols.push_back(row.equality ? 1 : 0);
  }
  d.b.reserve(lp.n_cols);
  for (const Rational& v : lp.objective) d.b.push_back(v.to_double());
  return d;
}

}  // namespace

Verdict prove(const LpProblem& lp, const ProveOptions& options) {
  DualForm d = build_dual_form(lp);
  auto problem = std::make_shared<const LpProblem>(lp);

  Verdict v;
  v.problem = problem;

  SimplexSolution sol =
      solve_equality_form(d.A, d.cost, d.b, d.free_cols, options.simplex);
  v.simplex_iterations = sol.iterations;

  if (!sol.feasible) {
    // No multiplier combination reproduces the query at all: the query is
    // unbounded below over the primal description.
    v.status = Verdict::Status::NotImplied;
    v.unbounded = true;
    v.lp_value_float = -std::numeric_limits<double>::infinity();
    return v;
  }

  if (sol.objective <= options.tolerance) {
    v.status = Verdict::Status::Proven;
    v.lp_value_float = 0.0;
    v.lp_value = Rational(0);
    if (!options.want_certificate) return v;
    auto cert = exact_certificate(lp, d.dcols, d.A, sol);
    if (!cert) cert = exact_certificate_fallback(lp, d.dcols, d.A, sol);
    if (!cert)
      throw SolverError("query looks provable but no exact certificate emerged");
    verify_certificate(lp, *cert);
    v.certificate = std::move(*cert);
    v.exact = true;
    return v;
  }

  v.status = Verdict::Status::NotImplied;
  v.lp_value_float = -sol.objective;
  if (options.want_certificate) {
    auto w = exact_witness(lp, d.dcols, d.A, sol);
    if (w && w->lp_value.sign() < 0) {
      v.exact = true;
      v.lp_value = w->lp_value;
      v.witness.reserve(w->values.size());
      for (const auto& [col, value] : w->values)
        v.witness.emplace_back(lp.col_names[col], value);
    }
  }
  return v;
}

Verdict prove(const GroundModel& model, const LinearQuery& query,
              const ProveOptions& options) {
  BuildOptions build;
  build.symmetry = options.symmetry;
  LpProblem lp = build_lp(model, query, build);
  Verdict v = prove(lp, options);
  v.query_name = query.name;
  return v;
}

LinearQuery repair_bound_query(int d) {
  LinearQuery q;
  q.name = "repair bandwidth dominates the weighted rate sum";
  q.aux(Rational(1), kAuxBeta);
  for (int k = 1; k <= d; ++k) q.aux(-t_coeff(d, k), aux_message(k));
  return q;
}

LinearQuery storage_bound_query(int d) {
  LinearQuery q;
  q.name = "storage plus weighted repair dominates the scaled rate sum";
  q.aux(Rational(1), kAuxAlpha);
  q.aux(Rational(j_sum(d - 1)), kAuxBeta);
  for (int k = 1; k <= d; ++k)
    q.aux(Rational(-j_sum(d)) * t_coeff(d, k), aux_message(k));
  return q;
}

TheoremCheck theorem_check(int d, const ProveOptions& options) {
  GroundModel model = GroundModel::standard(d);
  TheoremCheck out;
  out.repair_bound = prove(model, repair_bound_query(d), options);
  out.storage_bound = prove(model, storage_bound_query(d), options);
  return out;
}

}  // namespace mldr::prover
