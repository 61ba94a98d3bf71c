#include "mldr/prover/certificate.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace mldr::prover {

namespace {

// Sparse rational Gaussian elimination for A x = rhs with A given by entries.
// Unknowns that end up free resolve to zero; returns nothing when the system
// is inconsistent. Pivots greedily on the sparsest active column.
class SparseSolver {
 public:
  SparseSolver(int n_rows, int n_cols)
      : n_rows_(n_rows), n_cols_(n_cols), rows_(n_rows), rhs_(n_rows, Rational(0)),
        col_rows_(n_cols) {}

  void add(int row, int col, const Rational& v) {
    if (v.is_zero()) return;
    auto [it, fresh] = rows_[row].emplace(col, v);
    if (!fresh) {
      it->second += v;
      if (it->second.is_zero()) {
        rows_[row].erase(it);
        col_rows_[col].erase(row);
        return;
      }
    }
    col_rows_[col].insert(row);
  }

  void set_rhs(int row, Rational v) { rhs_[row] = std::move(v); }

  std::optional<std::vector<Rational>> solve() {
    std::vector<char> row_done(n_rows_, 0), col_done(n_cols_, 0);
    std::vector<std::pair<int, int>> pivots;  // (row, col) in order
    for (int step = 0; step < n_cols_; ++step) {
      int pc = -1;
      size_t best = SIZE_MAX;
      for (int c = 0; c < n_cols_; ++c) {
        if (col_done[c]) continue;
        size_t sz = col_rows_[c].size();
        if (sz < best) { best = sz; pc = c; }
      }
      if (pc < 0) break;
      col_done[pc] = 1;
      if (best == 0) continue;  // free unknown, resolves to zero
      int pr = -1;
      size_t rbest = SIZE_MAX;
      for (int r : col_rows_[pc]) {
        if (rows_[r].size() < rbest) { rbest = rows_[r].size(); pr = r; }
      }
      Rational piv = rows_[pr].at(pc);
      for (auto& [c, v] : rows_[pr]) v /= piv;
      rhs_[pr] /= piv;
      std::vector<int> victims(col_rows_[pc].begin(), col_rows_[pc].end());
      for (int r : victims) {
        if (r == pr) continue;
        Rational f = rows_[r].at(pc);
        for (const auto& [c, v] : rows_[pr]) {
          Rational delta = f * v;
          auto [it, fresh] = rows_[r].emplace(c, -delta);
          if (!fresh) {
            it->second -= delta;
            if (it->second.is_zero()) {
              rows_[r].erase(it);
              col_rows_[c].erase(r);
              continue;
            }
          }
          if (fresh) col_rows_[c].insert(r);
        }
        rhs_[r] -= f * rhs_[pr];
      }
      // retire the pivot row from the active structure
      for (const auto& [c, v] : rows_[pr]) col_rows_[c].erase(pr);
      row_done[pr] = 1;
      pivots.emplace_back(pr, pc);
    }
    for (int r = 0; r < n_rows_; ++r)
      if (!row_done[r] && !rhs_[r].is_zero() && rows_[r].empty()) return std::nullopt;
    for (int r = 0; r < n_rows_; ++r)
      if (!row_done[r] && !rows_[r].empty())
        throw InternalError("elimination left an active row with entries");
    std::vector<Rational> x(n_cols_, Rational(0));
    for (auto it = pivots.rbegin(); it != pivots.rend(); ++it) {
      auto [r, c] = *it;
      Rational v = rhs_[r];
      for (const auto& [c2, a] : rows_[r]) {
        if (c2 == c) continue;
        if (!x[c2].is_zero()) v -= a * x[c2];
      }
      x[c] = std::move(v);
    }
    // a row may be inconsistent only against already-fixed unknowns
    for (int r = 0; r < n_rows_; ++r) {
      if (row_done[r]) continue;
      Rational v = rhs_[r];
      for (const auto& [c2, a] : rows_[r]) v -= a * x[c2];
      if (!v.is_zero()) return std::nullopt;
    }
    return x;
  }

 private:
  int n_rows_, n_cols_;
  std::vector<std::map<int, Rational>> rows_;
  std::vector<Rational> rhs_;
  std::vector<std::set<int>> col_rows_;
};

Rational dual_cost(const LpProblem& lp, const DualColumn& dc) {
  return lp.rows[dc.row].rhs * Rational(-dc.sign);
}

std::map<int, Rational> to_multipliers(const std::vector<DualColumn>& dcols,
                                       const std::vector<int>& cols,
                                       const std::vector<Rational>& values) {
  std::map<int, Rational> mult;
  for (size_t t = 0; t < cols.size(); ++t) {
    if (values[t].is_zero()) continue;
    const DualColumn& dc = dcols[cols[t]];
    mult[dc.row] += Rational(dc.sign) * values[t];
  }
  return mult;
}

std::optional<Certificate> finish_certificate(const LpProblem& lp,
                                              std::map<int, Rational> mult,
                                              std::set<int>* bad_rows) {
  Rational rhs_acc(0);
  bool ok = true;
  for (const auto& [row, v] : mult) {
    if (v.is_zero()) continue;
    if (!lp.rows[row].equality && v.sign() < 0) {
      ok = false;
      if (bad_rows) bad_rows->insert(row);
    }
    rhs_acc += v * lp.rows[row].rhs;
  }
  if (!rhs_acc.is_zero()) {
    ok = false;
    if (bad_rows && lp.normalization_row >= 0) bad_rows->insert(lp.normalization_row);
  }
  if (!ok) return std::nullopt;
  Certificate cert;
  for (auto& [row, v] : mult)
    if (!v.is_zero()) cert.multipliers.emplace_back(row, std::move(v));
  return cert;
}

}  // namespace

void verify_certificate(const LpProblem& lp, const Certificate& cert) {
  std::vector<Rational> acc(lp.n_cols, Rational(0));
  Rational rhs_acc(0);
  for (const auto& [row, mult] : cert.multipliers) {
    if (row < 0 || row >= static_cast<int>(lp.rows.size()))
      throw CertificateInvalid("certificate references a missing row");
    const LpRow& r = lp.rows[row];
    if (!r.equality && mult.sign() < 0)
      throw CertificateInvalid("negative multiplier on inequality: " + r.label);
    for (const auto& [col, coeff] : r.terms) acc[col] += mult * coeff;
    rhs_acc += mult * r.rhs;
  }
  if (!rhs_acc.is_zero())
    throw CertificateInvalid("combination proves a negative bound, not zero");
  for (int c = 0; c < lp.n_cols; ++c)
    if (acc[c] != lp.objective[c])
      throw CertificateInvalid("combination misses the query on " + lp.col_names[c]);
}

std::optional<Certificate> exact_certificate(const LpProblem& lp,
                                             const std::vector<DualColumn>& dcols,
                                             const SparseMatrix& A,
                                             const SimplexSolution& sol) {
  const int m = lp.n_cols;
  const int n = A.n();
  std::vector<int> cand;
  for (int i = 0; i < m; ++i)
    if (sol.basis[i] < n) cand.push_back(sol.basis[i]);
  std::set<int> banned;
  for (int attempt = 0; attempt < 8; ++attempt) {
    std::vector<int> cols;
    for (int j : cand)
      if (!banned.count(dcols[j].row)) cols.push_back(j);
    SparseSolver solver(m, static_cast<int>(cols.size()));
    for (size_t t = 0; t < cols.size(); ++t) {
      const DualColumn& dc = dcols[cols[t]];
      for (const auto& [pc, coeff] : lp.rows[dc.row].terms)
        solver.add(pc, static_cast<int>(t), coeff * Rational(dc.sign));
    }
    for (int pc = 0; pc < m; ++pc) solver.set_rhs(pc, lp.objective[pc]);
    auto values = solver.solve();
    if (!values) return std::nullopt;
    std::set<int> bad;
    auto cert = finish_certificate(lp, to_multipliers(dcols, cols, *values), &bad);
    if (cert) return cert;
    if (bad.empty()) return std::nullopt;
    banned.insert(bad.begin(), bad.end());
  }
  return std::nullopt;
}

std::optional<ExactWitness> exact_witness(const LpProblem& lp,
                                          const std::vector<DualColumn>& dcols,
                                          const SparseMatrix& A,
                                          const SimplexSolution& sol) {
  const int m = lp.n_cols;
  const int n = A.n();
  if (m > 600) return std::nullopt;  // keep the exact solve cheap
  // One equation per basic column: its coefficients against the multipliers
  // equal its cost. The optimal point of the primal description is -pi.
  SparseSolver solver(m, m);
  for (int i = 0; i < m; ++i) {
    int id = sol.basis[i];
    if (id >= n) {
      int prow = id - n;
      solver.add(i, prow, Rational(sol.basic_values[i] < 0 ? -1 : 1));
      // artificial columns carry zero cost in the final phase
      solver.set_rhs(i, Rational(0));
      continue;
    }
    const DualColumn& dc = dcols[id];
    for (const auto& [pc, coeff] : lp.rows[dc.row].terms)
      solver.add(i, pc, coeff * Rational(dc.sign));
    solver.set_rhs(i, dual_cost(lp, dc));
  }
  auto pi = solver.solve();
  if (!pi) return std::nullopt;
  std::vector<Rational> x(m);
  for (int c = 0; c < m; ++c) x[c] = -(*pi)[c];
  for (const LpRow& row : lp.rows) {
    Rational v(0);
    for (const auto& [col, coeff] : row.terms) v += coeff * x[col];
    if (row.equality ? (v != row.rhs) : (v < row.rhs)) return std::nullopt;
  }
  ExactWitness w;
  w.lp_value = Rational(0);
  for (int c = 0; c < m; ++c) {
    if (!lp.objective[c].is_zero()) w.lp_value += lp.objective[c] * x[c];
    if (!x[c].is_zero()) w.values.emplace_back(c, x[c]);
  }
  return w;
}

namespace {

// Dense rational tableau simplex with Bland's rule; used only on the small
// restriction the float solve identifies, so termination and exactness beat
// speed.
class DenseExact {
 public:
  DenseExact(int m, int n_real) : m_(m), nr_(n_real), nt_(n_real + m) {
    tab_.assign(m_, std::vector<Rational>(nt_, Rational(0)));
    xb_.assign(m_, Rational(0));
    basis_.resize(m_);
    inb_.assign(nt_, 0);
  }

  std::vector<std::vector<Rational>> tab_;
  std::vector<Rational> xb_;
  std::vector<int> basis_;
  std::vector<char> inb_;
  int m_, nr_, nt_;

  // Returns false on iteration overflow.
  bool optimize(const std::vector<Rational>& cost, bool allow_artificials) {
    std::vector<Rational> obj(nt_, Rational(0));
    for (int j = 0; j < nt_; ++j) {
      obj[j] = cost[j];
      for (int i = 0; i < m_; ++i)
        if (!cost[basis_[i]].is_zero() && !tab_[i][j].is_zero())
          obj[j] -= cost[basis_[i]] * tab_[i][j];
    }
    int limit = 6 * m_ + 1000;
    for (int it = 0; it < limit; ++it) {
      int enter = -1;
      for (int j = 0; j < nt_; ++j) {
        if (!allow_artificials && j >= nr_) break;
        if (in_basis(j)) continue;
        if (obj[j].sign() < 0) { enter = j; break; }  // Bland: first index
      }
      if (enter < 0) return true;
      int leave = -1;
      Rational best;
      for (int i = 0; i < m_; ++i) {
        if (tab_[i][enter].sign() <= 0) continue;
        Rational t = xb_[i] / tab_[i][enter];
        if (leave < 0 || t < best ||
            (t == best && basis_[i] < basis_[leave])) {
          best = t;
          leave = i;
        }
      }
      if (leave < 0) throw SolverError("exact stage met an unbounded direction");
      pivot(enter, leave, obj);
    }
    return false;
  }

  bool in_basis(int j) const { return inb_[j] != 0; }

  void pivot(int enter, int leave, std::vector<Rational>& obj) {
    Rational inv = tab_[leave][enter].inverse();
    for (int j = 0; j < nt_; ++j)
      if (!tab_[leave][j].is_zero()) tab_[leave][j] *= inv;
    xb_[leave] *= inv;
    for (int i = 0; i < m_; ++i) {
      if (i == leave || tab_[i][enter].is_zero()) continue;
      Rational f = tab_[i][enter];
      for (int j = 0; j < nt_; ++j)
        if (!tab_[leave][j].is_zero()) tab_[i][j] -= f * tab_[leave][j];
      xb_[i] -= f * xb_[leave];
    }
    if (!obj[enter].is_zero()) {
      Rational f = obj[enter];
      for (int j = 0; j < nt_; ++j)
        if (!tab_[leave][j].is_zero()) obj[j] -= f * tab_[leave][j];
    }
    inb_[basis_[leave]] = 0;
    basis_[leave] = enter;
    inb_[enter] = 1;
  }
};

}  // namespace

std::optional<Certificate> exact_certificate_fallback(
    const LpProblem& lp, const std::vector<DualColumn>& dcols,
    const SparseMatrix& A, const SimplexSolution& sol) {
  const int n = A.n();
  const int m = lp.n_cols;
  std::vector<char> picked(n, 0);
  for (int j = 0; j < n; ++j)
    if (std::abs(sol.reduced[j]) <= 1e-6) picked[j] = 1;
  for (int i = 0; i < m; ++i)
    if (sol.basis[i] < n) picked[sol.basis[i]] = 1;

  // rows the chosen columns touch; any untouched row must have zero target
  for (int round = 0; round < 2; ++round) {
    std::vector<char> touched(m, 0);
    for (int j = 0; j < n; ++j)
      if (picked[j])
        for (int p = A.start[j]; p < A.start[j + 1]; ++p) touched[A.row[p]] = 1;
    bool expand = false;
    for (int pc = 0; pc < m; ++pc) {
      if (touched[pc] || lp.objective[pc].is_zero()) continue;
      expand = true;
      if (round > 0) return std::nullopt;
      for (int j = 0; j < n; ++j) {
        if (picked[j]) continue;
        for (int p = A.start[j]; p < A.start[j + 1]; ++p)
          if (A.row[p] == pc) { picked[j] = 1; break; }
      }
    }
    if (!expand) break;
  }

  // the tableau works with nonnegative variables only, so a picked column on
  // an equality row contributes both signed halves
  std::vector<DualColumn> lcols;
  for (int j = 0; j < n; ++j) {
    if (!picked[j]) continue;
    const DualColumn& dc = dcols[j];
    lcols.push_back({dc.row, dc.sign});
    if (lp.rows[dc.row].equality) lcols.push_back({dc.row, -dc.sign});
  }
  std::vector<int> rows;
  {
    std::vector<char> touched(m, 0);
    for (const DualColumn& dc : lcols)
      for (const auto& [pc, coeff] : lp.rows[dc.row].terms) touched[pc] = 1;
    for (int pc = 0; pc < m; ++pc) {
      if (touched[pc]) rows.push_back(pc);
      else if (!lp.objective[pc].is_zero()) return std::nullopt;
    }
  }
  if (lcols.size() > 2500 || rows.size() > 500) return std::nullopt;

  const int rm = static_cast<int>(rows.size());
  const int rn = static_cast<int>(lcols.size());
  std::vector<int> row_pos(m, -1);
  for (int i = 0; i < rm; ++i) row_pos[rows[i]] = i;

  DenseExact dx(rm, rn);
  for (int t = 0; t < rn; ++t) {
    const DualColumn& dc = lcols[t];
    for (const auto& [pc, coeff] : lp.rows[dc.row].terms) {
      int i = row_pos[pc];
      if (i >= 0) dx.tab_[i][t] += coeff * Rational(dc.sign);
    }
  }
  std::vector<Rational> phase1(dx.nt_, Rational(0));
  for (int i = 0; i < rm; ++i) {
    Rational c = lp.objective[rows[i]];
    int art = rn + i;
    dx.basis_[i] = art;
    dx.inb_[art] = 1;
    phase1[art] = Rational(1);
    if (c.sign() < 0) {
      dx.tab_[i][art] = Rational(-1);
      dx.xb_[i] = -c;
    } else {
      dx.tab_[i][art] = Rational(1);
      dx.xb_[i] = c;
    }
  }
  if (!dx.optimize(phase1, true)) return std::nullopt;
  Rational p1(0);
  for (int i = 0; i < rm; ++i)
    if (dx.basis_[i] >= rn) p1 += dx.xb_[i];
  if (!p1.is_zero()) return std::nullopt;
  // drive artificials stuck at zero out where a real pivot exists
  for (int i = 0; i < rm; ++i) {
    if (dx.basis_[i] < rn) continue;
    std::vector<Rational> dummy(dx.nt_, Rational(0));
    for (int j = 0; j < rn; ++j) {
      if (dx.in_basis(j) || dx.tab_[i][j].is_zero()) continue;
      dx.pivot(j, i, dummy);
      break;
    }
  }
  std::vector<Rational> phase2(dx.nt_, Rational(0));
  for (int t = 0; t < rn; ++t) phase2[t] = dual_cost(lp, lcols[t]);
  if (!dx.optimize(phase2, false)) return std::nullopt;
  Rational v(0);
  for (int i = 0; i < rm; ++i)
    if (dx.basis_[i] < rn) v += phase2[dx.basis_[i]] * dx.xb_[i];
  if (!v.is_zero()) return std::nullopt;

  std::vector<Rational> values(rn, Rational(0));
  for (int i = 0; i < rm; ++i)
    if (dx.basis_[i] < rn) values[dx.basis_[i]] = dx.xb_[i];
  std::vector<int> idx(rn);
  for (int t = 0; t < rn; ++t) idx[t] = t;
  return finish_certificate(lp, to_multipliers(lcols, idx, values), nullptr);
}

}  // namespace mldr::prover
