#pragma once

#include <vector>

#include "mldr/errors.hpp"

namespace mldr::prover {

// Column-major sparse matrix.
struct SparseMatrix {
  int m = 0;                // rows
  std::vector<int> start;   // size n()+1
  std::vector<int> row;
  std::vector<double> val;
  int n() const { return static_cast<int>(start.size()) - 1; }
};

struct SimplexOptions {
  double tol_cost = 1e-9;    // entering threshold on reduced costs
  double tol_pivot = 1e-9;   // smallest acceptable ratio-test pivot
  double tol_feas = 1e-7;    // phase-1 success threshold (scaled)
  int max_iterations = 200000;
  int refactor_every = 3000;
  int drift_check_every = 256;
  int stall_limit = 500;     // iterations without progress before Bland's rule
};

// Solution of  min cost.u  s.t.  A u = b,  u >= 0 except where free.
struct SimplexSolution {
  bool feasible = true;          // false: phase 1 could not zero artificials
  double objective = 0;
  std::vector<double> u;         // length A.n()
  std::vector<double> pi;        // simplex multipliers, length m
  std::vector<double> reduced;   // reduced costs, length A.n()
  std::vector<int> basis;        // length m; id >= A.n() means artificial (id - n = row)
  std::vector<double> basic_values;
  int iterations = 0;
};

// Two-phase revised simplex with a dense product-form inverse. Deterministic:
// Dantzig pricing with a fixed tie rule, falling back to Bland's rule after a
// long stall. Throws SolverError on iteration overflow or numerical failure.
// free_cols marks sign-unrestricted columns (empty: all nonnegative); a free
// column may enter moving either way and, once basic, never blocks a step.
SimplexSolution solve_equality_form(const SparseMatrix& A,
                                    const std::vector<double>& cost,
                                    const std::vector<double>& b,
                                    const std::vector<char>& free_cols,
                                    const SimplexOptions& options = {});
SimplexSolution solve_equality_form(const SparseMatrix& A,
                                    const std::vector<double>& cost,
                                    const std::vector<double>& b,
                                    const SimplexOptions& options = {});

}  // namespace mldr::prover
