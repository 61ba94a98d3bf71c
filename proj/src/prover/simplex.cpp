#include "mldr/prover/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <cstdio>
#include <cstdlib>

namespace mldr::prover {

namespace {

class Solver {
 public:
  Solver(const SparseMatrix& A, const std::vector<double>& cost,
         const std::vector<double>& b, const std::vector<char>& free_cols,
         const SimplexOptions& opt)
      : A_(A), cost2_(cost), b_(b), opt_(opt), m_(A.m), n_(A.n()) {
    if (static_cast<int>(cost.size()) != n_ || static_cast<int>(b.size()) != m_)
      throw SizeMismatch("simplex input dimensions disagree");
    if (!free_cols.empty() && static_cast<int>(free_cols.size()) != n_)
      throw SizeMismatch("free-column mask length disagrees");
    freec_ = free_cols;
    freec_.resize(n_, 0);
    bscale_ = 1.0;
    for (double v : b_) bscale_ = std::max(bscale_, std::fabs(v));
  }

  SimplexSolution run() {
    init_artificial_basis();
    SimplexSolution out;
    for (int round = 0;; ++round) {
      if (round > 6)
        throw SolverError("repeated basis repairs failed to converge");
      phase_ = 1;
      reset_progress();
      iterate();
      out.iterations = iters_;
      double p1 = infeasibility();
      if (p1 > opt_.tol_feas * bscale_) {
        out.feasible = false;
        out.objective = p1;
        return out;
      }
      drive_out_artificials();
      phase_ = 2;
      reset_progress();
      iterate();
      if (phase_ == 2) break;  // otherwise a basis repair demoted us
    }
    out.iterations = iters_;
    out.feasible = true;
    out.objective = objective();
    out.basis = basis_;
    out.basic_values = xb_;
    out.u.assign(n_, 0.0);
    for (int i = 0; i < m_; ++i)
      if (basis_[i] < n_) out.u[basis_[i]] = xb_[i];
    valid_pi_ = false;  // hand back a freshly computed pi, not the running one
    compute_pi();
    out.pi = pi_;
    out.reduced.resize(n_);
    for (int j = 0; j < n_; ++j) out.reduced[j] = reduced_cost(j);
    return out;
  }

 private:
  const SparseMatrix& A_;
  std::vector<double> cost2_;
  std::vector<double> b_;
  SimplexOptions opt_;
  int m_, n_;
  double bscale_ = 1.0;

  std::vector<int> basis_;          // column per row; >= n_ -> artificial
  std::vector<signed char> art_sign_;
  std::vector<double> pert_;        // phase-1 artificial costs, near 1
  std::vector<char> freec_;         // sign-unrestricted real columns
  std::vector<char> in_basis_;      // over real columns
  std::vector<double> binv_;        // column-major m x m inverse of the basis
  std::vector<double> xb_, pi_, w_;
  bool valid_pi_ = false;
  int phase_ = 1;
  int iters_ = 0, since_refactor_ = 0, stall_ = 0, repairs_ = 0;
  double best_obj_ = 0;
  bool bland_ = false;

  double col_cost(int j) const {
    // distinct artificial costs break the massive ties a pure unit objective
    // produces on degenerate vertices; feasibility is still judged by value
    if (phase_ == 1) return j >= n_ ? pert_[j - n_] : 0.0;
    return j >= n_ ? 0.0 : cost2_[j];
  }

  // artificials and non-free real columns must stay nonnegative
  bool cone_basic(int i) const {
    int j = basis_[i];
    return j >= n_ || !freec_[j];
  }

  void reset_progress() {
    stall_ = 0;
    bland_ = false;
    valid_pi_ = false;  // phase costs changed
    best_obj_ = objective();
  }

  void init_artificial_basis() {
    basis_.resize(m_);
    art_sign_.assign(m_, 1);
    in_basis_.assign(n_, 0);
    binv_.assign(size_t(m_) * m_, 0.0);
    xb_.resize(m_);
    pi_.assign(m_, 0.0);
    valid_pi_ = false;
    w_.resize(m_);
    pert_.resize(m_);
    for (int i = 0; i < m_; ++i) {
      basis_[i] = n_ + i;
      art_sign_[i] = (b_[i] < 0) ? -1 : 1;
      binv_[size_t(i) * m_ + i] = art_sign_[i];
      xb_[i] = std::fabs(b_[i]);
      pert_[i] = 1.0 + 1e-7 * ((uint64_t(i) * 2654435761u % 1021) / 1021.0);
    }
    since_refactor_ = 0;
  }

  double objective() const {
    double s = 0;
    for (int i = 0; i < m_; ++i) s += col_cost(basis_[i]) * xb_[i];
    return s;
  }

  void compute_pi() {
    // pi = c_B B^-1; with the inverse stored by columns each entry is a dot.
    // The full m^2 pass is expensive, so pivots keep pi updated in place and
    // this recomputes only after the flag was dropped.
    if (valid_pi_) return;
    std::vector<double> cb(m_);
    for (int i = 0; i < m_; ++i) cb[i] = col_cost(basis_[i]);
    for (int j = 0; j < m_; ++j) {
      const double* col = &binv_[size_t(j) * m_];
      double s = 0;
      for (int i = 0; i < m_; ++i) s += cb[i] * col[i];
      pi_[j] = s;
    }
    valid_pi_ = true;
  }

  double reduced_cost(int j) const {
    double s = col_cost(j);
    for (int p = A_.start[j]; p < A_.start[j + 1]; ++p)
      s -= pi_[A_.row[p]] * A_.val[p];
    return s;
  }

  // w = B^-1 a_j for a real column j.
  void ftran(int j) {
    std::fill(w_.begin(), w_.end(), 0.0);
    for (int p = A_.start[j]; p < A_.start[j + 1]; ++p) {
      const double v = A_.val[p];
      const double* col = &binv_[size_t(A_.row[p]) * m_];
      for (int i = 0; i < m_; ++i) w_[i] += v * col[i];
    }
  }

  // Rebuilds the inverse from scratch: Gauss-Jordan on [B | I] with partial
  // pivoting and physical row swaps. Columns found dependent are replaced by
  // artificials; returns true when such a repair happened.
  bool refactor() {
    std::vector<double> mat(size_t(m_) * m_, 0.0);
    std::vector<char> art_used(m_, 0);
    for (int i = 0; i < m_; ++i) {
      int j = basis_[i];
      double* col = &mat[size_t(i) * m_];
      if (j >= n_) {
        col[j - n_] = art_sign_[j - n_];
        art_used[j - n_] = 1;
      } else {
        for (int p = A_.start[j]; p < A_.start[j + 1]; ++p)
          col[A_.row[p]] = A_.val[p];
      }
    }
    std::fill(binv_.begin(), binv_.end(), 0.0);
    for (int i = 0; i < m_; ++i) binv_[size_t(i) * m_ + i] = 1.0;
    std::vector<int> rid(m_);  // physical row -> original row id
    for (int i = 0; i < m_; ++i) rid[i] = i;
    std::vector<double> f(m_);
    bool repaired = false;
    for (int c = 0; c < m_; ++c) {
      double* pivcol = &mat[size_t(c) * m_];
      while (true) {
        int piv = c;
        double best = std::fabs(pivcol[c]);
        for (int r = c + 1; r < m_; ++r) {
          double v = std::fabs(pivcol[r]);
          if (v > best) { best = v; piv = r; }
        }
        if (best >= 1e-11) {
          if (piv != c) {
            for (int j = c; j < m_; ++j)
              std::swap(mat[size_t(j) * m_ + c], mat[size_t(j) * m_ + piv]);
            for (int j = 0; j < m_; ++j)
              std::swap(binv_[size_t(j) * m_ + c], binv_[size_t(j) * m_ + piv]);
            std::swap(rid[c], rid[piv]);
          }
          break;
        }
        // column c of the basis is dependent on the previous ones: park an
        // unused artificial in its place and retry the pivot search
        int pick = -1;
        for (int p = c; p < m_; ++p)
          if (!art_used[rid[p]]) { pick = p; break; }
        if (pick < 0) throw SolverError("no artificial available for repair");
        ++repairs_;
        if (std::getenv("MLDR_SIMPLEX_TRACE"))
          std::fprintf(stderr, "[simplex] repair #%d at basis col %d (iters=%d phase=%d)\n",
                       repairs_, c, iters_, phase_);
        int old = basis_[c];
        if (old < n_) in_basis_[old] = 0;
        int row_orig = rid[pick];
        basis_[c] = n_ + row_orig;
        art_used[row_orig] = 1;
        std::fill(pivcol, pivcol + m_, 0.0);
        pivcol[pick] = art_sign_[row_orig];
        repaired = true;
      }
      std::memcpy(f.data(), pivcol, sizeof(double) * m_);
      const double inv = 1.0 / f[c];
      auto eliminate = [&](double* col) {
        double v = col[c];
        if (v == 0.0) return;
        v *= inv;
        col[c] = v;
        for (int r = 0; r < m_; ++r) {
          if (r == c) continue;
          double fr = f[r];
          if (fr != 0.0) col[r] -= fr * v;
        }
      };
      for (int j = c + 1; j < m_; ++j) eliminate(&mat[size_t(j) * m_]);
      for (int j = 0; j < m_; ++j) eliminate(&binv_[size_t(j) * m_]);
    }
    recompute_xb();
    since_refactor_ = 0;
    valid_pi_ = false;
    return repaired;
  }

  void recompute_xb() {
    std::fill(xb_.begin(), xb_.end(), 0.0);
    for (int r = 0; r < m_; ++r) {
      if (b_[r] == 0.0) continue;
      const double* col = &binv_[size_t(r) * m_];
      for (int i = 0; i < m_; ++i) xb_[i] += b_[r] * col[i];
    }
  }

  double residual() const {
    std::vector<double> acc(m_, 0.0);
    for (int i = 0; i < m_; ++i) {
      int j = basis_[i];
      if (xb_[i] == 0.0) continue;
      if (j >= n_) {
        acc[j - n_] += art_sign_[j - n_] * xb_[i];
      } else {
        for (int p = A_.start[j]; p < A_.start[j + 1]; ++p)
          acc[A_.row[p]] += A_.val[p] * xb_[i];
      }
    }
    double err = 0;
    for (int i = 0; i < m_; ++i) err = std::max(err, std::fabs(acc[i] - b_[i]));
    return err;
  }

  // Best candidates first: a nonnegative column may enter when its reduced
  // cost is negative, a free column when it is nonzero either way (entering
  // direction -1 means the free variable decreases from zero).
  void pick_entering(int want, std::vector<std::pair<int, int>>& out) {
    compute_pi();
    out.clear();
    std::vector<double> vals;
    for (int j = 0; j < n_; ++j) {
      if (in_basis_[j]) continue;
      double d = reduced_cost(j);
      int dir = 1;
      double score = d;
      if (freec_[j]) {
        if (std::fabs(d) <= opt_.tol_cost) continue;
        if (d > 0) dir = -1;
        score = -std::fabs(d);
      } else if (d >= -opt_.tol_cost) {
        continue;
      }
      if (bland_) {
        out.emplace_back(j, dir);  // Bland: strictly the first eligible index
        return;
      }
      if (out.size() < size_t(want)) {
        out.emplace_back(j, dir);
        vals.push_back(score);
      } else {
        int worst = 0;
        for (size_t t = 1; t < vals.size(); ++t)
          if (vals[t] > vals[worst]) worst = static_cast<int>(t);
        if (score < vals[worst]) {
          out[worst] = {j, dir};
          vals[worst] = score;
        }
      }
    }
    // order by score, most negative first
    for (size_t a = 0; a < out.size(); ++a)
      for (size_t b2 = a + 1; b2 < out.size(); ++b2)
        if (vals[b2] < vals[a]) {
          std::swap(vals[a], vals[b2]);
          std::swap(out[a], out[b2]);
        }
  }

  // Returns leaving row, or -1 if the direction is unbounded. Only rows whose
  // basic variable is sign-restricted can block; dw = dir*w is the rate that
  // variable shrinks at. Two passes in the style of Harris: first a maximum
  // step with bounds relaxed by delta, then the numerically best pivot among
  // rows whose true ratio fits. This keeps degenerate vertices from forcing
  // noise-sized steps.
  int ratio_test(int dir) const {
    if (bland_) {
      double tmin = 0;
      bool have = false;
      for (int i = 0; i < m_; ++i) {
        if (!cone_basic(i)) continue;
        double dw = dir * w_[i];
        if (dw <= opt_.tol_pivot) continue;
        double t = std::max(xb_[i], 0.0) / dw;
        if (!have || t < tmin) { tmin = t; have = true; }
      }
      if (!have) return -1;
      int pick = -1;
      for (int i = 0; i < m_; ++i) {
        if (!cone_basic(i)) continue;
        double dw = dir * w_[i];
        if (dw <= opt_.tol_pivot) continue;
        double t = std::max(xb_[i], 0.0) / dw;
        if (t > tmin + 1e-12 * (1.0 + tmin)) continue;
        // smallest basis id among ties, for guaranteed termination
        if (pick < 0 || basis_[i] < basis_[pick]) pick = i;
      }
      return pick;
    }
    const double delta = 1e-9 * (1.0 + bscale_);
    double tmax = 0;
    bool have = false;
    for (int i = 0; i < m_; ++i) {
      if (!cone_basic(i)) continue;
      double dw = dir * w_[i];
      if (dw <= opt_.tol_pivot) continue;
      double t = (std::max(xb_[i], 0.0) + delta) / dw;
      if (!have || t < tmax) { tmax = t; have = true; }
    }
    if (!have) return -1;
    int pick = -1;
    double best_w = 0;
    bool pick_art = false;
    for (int i = 0; i < m_; ++i) {
      if (!cone_basic(i)) continue;
      double dw = dir * w_[i];
      if (dw <= opt_.tol_pivot) continue;
      if (std::max(xb_[i], 0.0) / dw > tmax) continue;
      // prefer kicking artificials out, then the largest pivot
      bool art = basis_[i] >= n_;
      if (pick < 0 || (art && !pick_art) || (art == pick_art && dw > best_w)) {
        pick = i;
        best_w = dw;
        pick_art = art;
      }
    }
    return pick;
  }

  void pivot(int enter, int leave_row, int dir) {
    const double wr = w_[leave_row];
    if (std::fabs(wr) < opt_.tol_pivot)
      throw SolverError("degenerate pivot element");
    // the entering variable moves to dir*t, t >= 0
    const double t = std::max(xb_[leave_row], 0.0) / (dir * wr);
    const double theta = dir * t;
    const double snap = 1e-12 * (1.0 + bscale_);
    for (int i = 0; i < m_; ++i) {
      xb_[i] -= theta * w_[i];
      if (std::fabs(xb_[i]) < snap) xb_[i] = 0.0;  // keep noise from creeping
    }
    xb_[leave_row] = theta;
    // pi' = pi + (d_enter / w_leave) * (row `leave_row` of the old inverse),
    // folded into the eta sweep below so each column is touched once.
    double pf = 0.0;
    if (valid_pi_) {
      double de = col_cost(enter);
      for (int p = A_.start[enter]; p < A_.start[enter + 1]; ++p)
        de -= pi_[A_.row[p]] * A_.val[p];
      pf = de / wr;
    }
    const double inv = 1.0 / wr;
    for (int j = 0; j < m_; ++j) {
      double* col = &binv_[size_t(j) * m_];
      double piv = col[leave_row];
      if (piv == 0.0) continue;
      if (pf != 0.0) pi_[j] += pf * piv;
      piv *= inv;
      col[leave_row] = piv;
      for (int i = 0; i < m_; ++i) {
        if (i == leave_row) continue;
        double wi = w_[i];
        if (wi != 0.0) col[i] -= wi * piv;
      }
    }
    int old = basis_[leave_row];
    if (old < n_) in_basis_[old] = 0;
    basis_[leave_row] = enter;
    in_basis_[enter] = 1;
    ++since_refactor_;
  }

  void drive_out_artificials() {
    // Swap real columns in for artificials stuck at zero; rows admitting no
    // pivot are linearly dependent and the artificial stays parked at zero.
    for (int r = 0; r < m_; ++r) {
      if (basis_[r] < n_) continue;
      int best_j = -1;
      double best_v = 1e-7;
      for (int j = 0; j < n_; ++j) {
        if (in_basis_[j]) continue;
        double e = 0;
        for (int p = A_.start[j]; p < A_.start[j + 1]; ++p)
          e += binv_[size_t(A_.row[p]) * m_ + r] * A_.val[p];
        if (std::fabs(e) > best_v) {
          best_v = std::fabs(e);
          best_j = j;
        }
      }
      if (best_j < 0) continue;
      ftran(best_j);
      if (std::fabs(w_[r]) < opt_.tol_pivot) continue;
      pivot(best_j, r, 1);  // parked at zero, so the swap moves nothing
    }
  }

  // Signed slack against the cone: artificial values of either sign mean
  // A u = b is violated, sign-restricted columns must not sit negative.
  double infeasibility() const {
    double s = 0;
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] >= n_) s += std::fabs(xb_[i]);
      else if (!freec_[basis_[i]]) s += std::max(-xb_[i], 0.0);
    }
    return s;
  }

  // After a repair the parked artificials may sit at nonzero values, meaning
  // the point no longer solves A u = b and phase 1 must resume.
  bool feasibility_lost() const {
    return infeasibility() > opt_.tol_feas * bscale_;
  }

  void iterate() {
    std::vector<std::pair<int, int>> candidates;
    while (true) {
      if (iters_ >= opt_.max_iterations)
        throw SolverError("simplex iteration limit exceeded");
      pick_entering(bland_ ? 1 : 3, candidates);
      if (candidates.empty()) return;  // optimal for this phase
      int leave = -1, enter = -1, dir = 1, last_ftran = -1;
      for (const auto& [cand, cdir] : candidates) {
        ftran(cand);
        last_ftran = cand;
        int l = ratio_test(cdir);
        if (l < 0) continue;  // numerically unbounded: try another column
        if (std::fabs(w_[l]) >= 1e-7) {
          enter = cand;
          leave = l;
          dir = cdir;
          break;  // sound pivot, take it
        }
        if (enter < 0) {
          enter = cand;  // fallback: best reduced cost with a viable pivot
          leave = l;
          dir = cdir;
        }
      }
      if (enter < 0)
        throw SolverError("unbounded direction in a bounded phase");
      if (last_ftran != enter) {
        ftran(enter);
        leave = ratio_test(dir);
        if (leave < 0) throw SolverError("ratio test lost its pivot");
      }
      pivot(enter, leave, dir);
      ++iters_;
      double obj = objective();
      if (const char* tr = std::getenv("MLDR_SIMPLEX_TRACE")) {
        if (iters_ % 1000 == 0)
          std::fprintf(stderr,
                       "[simplex] iters=%d phase=%d obj=%.9g infeas=%.3g bland=%d stall=%d m=%d\n",
                       iters_, phase_, obj, infeasibility(), int(bland_), stall_, m_);
        if (tr[0] == '2' && bland_) {
          uint64_t h = 1469598103934665603ull;
          for (int i = 0; i < m_; ++i)
            h = (h ^ uint64_t(basis_[i])) * 1099511628211ull;
          std::fprintf(stderr,
                       "[pivots] it=%d enter=%d leave_id=%d dir=%d t=%.3g w=%.3g hash=%016llx\n",
                       iters_, enter, basis_[leave], dir, xb_[leave], w_[leave],
                       (unsigned long long)h);
        }
      }
      if (obj < best_obj_ - 1e-10 * (1.0 + std::fabs(best_obj_))) {
        best_obj_ = obj;
        stall_ = 0;
        bland_ = false;
      } else if (++stall_ > opt_.stall_limit) {
        bland_ = true;
      }
      if (iters_ % 1024 == 0) valid_pi_ = false;  // periodic drift refresh
      bool want_refactor = since_refactor_ >= opt_.refactor_every ||
                           (iters_ % opt_.drift_check_every == 0 &&
                            residual() > 1e-6 * bscale_);
      if (want_refactor) {
        bool repaired = refactor();
        if (repaired) {
          best_obj_ = objective();
          stall_ = 0;
          if (phase_ == 2 && feasibility_lost()) {
            phase_ = 1;
            return;  // caller restarts the phase sequence
          }
        }
      }
    }
  }
};

}  // namespace

SimplexSolution solve_equality_form(const SparseMatrix& A,
                                    const std::vector<double>& cost,
                                    const std::vector<double>& b,
                                    const std::vector<char>& free_cols,
                                    const SimplexOptions& options) {
  Solver s(A, cost, b, free_cols, options);
  return s.run();
}

SimplexSolution solve_equality_form(const SparseMatrix& A,
                                    const std::vector<double>& cost,
                                    const std::vector<double>& b,
                                    const SimplexOptions& options) {
  return solve_equality_form(A, cost, b, {}, options);
}

}  // namespace mldr::prover
