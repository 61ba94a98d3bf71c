#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mldr/errors.hpp"

namespace mldr::prover {

// A set of ground variables as a bitmask. Models are capped well below 64
// variables, so one word is enough everywhere.
using VarSet = uint64_t;

enum class VarKind { Node, Repair, Message, Generic };

struct GroundVar {
  std::string name;
  VarKind kind = VarKind::Generic;
  int i = 0;  // node index for Node; helper index for Repair; level for Message
  int j = 0;  // target index for Repair
};

// The random-variable namespace of a d-message system on n = d+1 nodes:
//   W_i      data stored at node i                     (i in [1:n])
//   S_{i,j}  repair data node i sends toward node j    (i != j)
//   M_k      the level-k message                       (k in [1:d])
// together with the functional-dependency structure
//   S_{i,j} = f(W_i);  W_k = f(S_{*,k} from all other nodes);
//   M_k = f(any k-subset of the W's)
// and the node-relabeling action of the symmetric group, which fixes every
// M_k. Joint entropies of a symmetrical code are constant on orbits.
class GroundSpace {
 public:
  explicit GroundSpace(int d);

  int d() const { return d_; }
  int n() const { return n_; }
  int var_count() const { return static_cast<int>(vars_.size()); }
  const std::vector<GroundVar>& vars() const { return vars_; }

  int w_index(int i) const;
  int s_index(int i, int j) const;
  int m_index(int k) const;
  int index_of(const std::string& name) const;  // throws UnknownName

  VarSet W(int i) const { return VarSet(1) << w_index(i); }
  VarSet S(int i, int j) const { return VarSet(1) << s_index(i, j); }
  VarSet M(int k) const { return VarSet(1) << m_index(k); }

  // Repair data converging on node k from all higher-indexed nodes.
  VarSet l(int k) const;
  // Union l_1 ... l_k.
  VarSet l_prefix(int k) const;
  // l_r plus node 1's contribution S_{1,r}; defined for r in [2:d].
  VarSet lp(int r) const;
  // Union lp(lo) ... lp(hi) (empty when lo > hi).
  VarSet lp_range(int lo, int hi) const;
  VarSet W_prefix(int k) const;
  VarSet M_prefix(int k) const;
  VarSet S_set(const std::vector<int>& senders, int target) const;

  // perm is a 1-based image table on nodes: node i -> perm[i-1].
  VarSet apply(const std::vector<int>& perm, VarSet s) const;

  // Functional-dependency closure of a set.
  VarSet closure(VarSet s) const;

  // Minimum of the orbit of s under all node permutations (no closure).
  VarSet orbit_min(VarSet s) const;

  // Canonical representative: orbit minimum of the closure. Two sets get the
  // same representative iff symmetry plus the FDs force equal entropies.
  VarSet canonical(VarSet s) const { return orbit_min(closure(s)); }

  struct Fd {
    VarSet from;
    VarSet to;
    std::string label;
  };
  const std::vector<Fd>& fds() const { return fds_; }

  // All n! node permutations as variable-index image tables.
  const std::vector<std::vector<int>>& var_perms() const { return var_perms_; }
  // Generating set (a transposition and the long cycle), same encoding.
  std::vector<std::vector<int>> generator_var_perms() const;

  // Variable-level image table for a node permutation.
  std::vector<int> var_perm_of(const std::vector<int>& node_perm) const;

  std::string set_name(VarSet s) const;

 private:
  int d_ = 0;
  int n_ = 0;
  std::vector<GroundVar> vars_;
  std::map<std::string, int> by_name_;
  std::vector<std::vector<int>> s_idx_;  // [i][j] -> var index
  std::vector<Fd> fds_;
  std::vector<std::vector<int>> var_perms_;
};

// Applies a variable-level image table to a set.
VarSet apply_var_perm(const std::vector<int>& var_perm, VarSet s);

}  // namespace mldr::prover
