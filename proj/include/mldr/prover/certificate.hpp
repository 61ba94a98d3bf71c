#pragma once

#include <optional>
#include <vector>

#include "mldr/prover/model.hpp"
#include "mldr/prover/simplex.hpp"

namespace mldr::prover {

// Multiplier combination of model rows. Proves  query >= sum mult*rhs  when
// every inequality multiplier is nonnegative; a proof of the query itself
// additionally needs that value to be zero.
struct Certificate {
  std::vector<std::pair<int, Rational>> multipliers;  // (row id, value), nonzero
};

// Exact re-check of a certificate against the problem rows: the multiplier
// combination must reproduce the query coefficients exactly, inequality rows
// must carry nonnegative multipliers, and the combined right-hand side must
// be zero. Throws CertificateInvalid otherwise.
void verify_certificate(const LpProblem& lp, const Certificate& cert);

// Column of the equality-form solve: which problem row it multiplies, with
// sign -1 for the negated half of an equality split.
struct DualColumn {
  int row = 0;
  int sign = 1;
};

// Turns the float-optimal basis into an exact certificate by solving the
// basis system in rational arithmetic. Returns nothing when the basis does
// not support an exact zero-value combination.
std::optional<Certificate> exact_certificate(const LpProblem& lp,
                                             const std::vector<DualColumn>& dcols,
                                             const SparseMatrix& A,
                                             const SimplexSolution& sol);

// Last-resort exact stage: Bland-rule simplex in rational arithmetic over the
// columns the float solve priced as near-optimal, on the rows they touch.
// Gives up (returns nothing) when the restriction is too large.
std::optional<Certificate> exact_certificate_fallback(
    const LpProblem& lp, const std::vector<DualColumn>& dcols,
    const SparseMatrix& A, const SimplexSolution& sol);

// Exact counterexample for a rejected query: solves the basis transpose
// system for the optimal point of the primal description and verifies every
// row exactly. values hold the nonzero coordinates by problem column.
struct ExactWitness {
  std::vector<std::pair<int, Rational>> values;
  Rational lp_value;
};
std::optional<ExactWitness> exact_witness(const LpProblem& lp,
                                          const std::vector<DualColumn>& dcols,
                                          const SparseMatrix& A,
                                          const SimplexSolution& sol);

}  // namespace mldr::prover
