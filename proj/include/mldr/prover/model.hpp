#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mldr/prover/ground.hpp"
#include "mldr/rational.hpp"

namespace mldr::prover {

// Auxiliary scalar columns that may appear beside joint entropies.
// alpha/beta are per-node storage and per-helper repair budgets; B_k are
// message sizes. Encoded as small ids: 0 = alpha, 1 = beta, 2+k = B_{k+1}.
constexpr int kAuxAlpha = 0;
constexpr int kAuxBeta = 1;
inline int aux_message(int k) { return 1 + k; }
std::string aux_name(int aux);

// One additive term of a query: coeff * H(of | given) when of != 0, or
// coeff * aux scalar when aux >= 0.
struct QueryTerm {
  Rational coeff;
  VarSet of = 0;
  VarSet given = 0;
  int aux = -1;
};

// A claimed inequality  sum of terms >= 0  over a model.
struct LinearQuery {
  std::string name;
  std::vector<QueryTerm> terms;

  LinearQuery& H(const Rational& coeff, VarSet of, VarSet given = 0);
  LinearQuery& I(const Rational& coeff, VarSet a, VarSet b, VarSet given = 0);
  LinearQuery& aux(const Rational& coeff, int aux_id);
};

// Group definition for a grouped model: named unions of ground variables.
struct GroupSpec {
  std::string name;
  std::vector<std::string> members;  // ground variable names
};

// Constraints declared over group names.
struct GroupedConstraints {
  // from-groups jointly determine to-groups
  std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> fds;
  // one mutually independent family (joint entropy splits into the sum)
  std::vector<std::string> independent;
  // H(group) = B_k
  std::vector<std::pair<std::string, int>> message_size;
  std::vector<std::string> alpha_bounded;  // H(group) <= alpha
  std::vector<std::string> beta_bounded;   // H(group) <= beta
};

// A finite entropy model: a list of variables plus linear constraints on the
// joint-entropy vector. Three flavors share the representation:
//  - standard(d): the full (d+1)-node system with node symmetry,
//  - grouped: selected unions of ground variables with declared constraints,
//  - generic: opaque variables with no constraints beyond the Shannon cone.
class GroundModel {
 public:
  static GroundModel standard(int d, int max_vars = 16);
  static GroundModel generic(const std::vector<std::string>& names);
  static GroundModel grouped(const GroundSpace& space,
                             const std::vector<GroupSpec>& groups,
                             const GroupedConstraints& constraints);

  int var_count() const { return static_cast<int>(var_names_.size()); }
  const std::vector<std::string>& var_names() const { return var_names_; }

  struct Fd {
    VarSet from, to;
    std::string label;
  };
  const std::vector<Fd>& fds() const { return fds_; }
  const std::vector<VarSet>& independent() const { return independent_; }
  const std::vector<VarSet>& alpha_bounded() const { return alpha_bounded_; }
  const std::vector<VarSet>& beta_bounded() const { return beta_bounded_; }
  const std::vector<std::pair<VarSet, int>>& message_size() const {
    return message_size_;
  }

  bool node_symmetry() const { return space_ != nullptr; }
  // Non-null only for standard models.
  const GroundSpace* space() const { return space_.get(); }
  int d() const { return d_; }

  // For grouped models: the ground variables behind model variable v.
  VarSet ground_of(int v) const;
  bool is_grouped() const { return !group_ground_.empty(); }

  // Resolves a variable, composite, or built-in name to a model-variable set.
  // Standard models accept W#/S#_#/M# plus l#, lc# (l_1..l_#), lp# (S_1#+l#),
  // Wc#, Mc#. Composites registered by define_composite are checked first.
  VarSet resolve(const std::string& name) const;
  void define_composite(const std::string& name, VarSet set);
  // Resolves "alpha", "beta", "B#" to an aux id, or nullopt.
  static std::optional<int> aux_of(const std::string& name);

  std::string set_name(VarSet s) const;

 private:
  GroundModel() = default;

  std::vector<std::string> var_names_;
  std::vector<Fd> fds_;
  std::vector<VarSet> independent_;
  std::vector<VarSet> alpha_bounded_;
  std::vector<VarSet> beta_bounded_;
  std::vector<std::pair<VarSet, int>> message_size_;
  std::shared_ptr<const GroundSpace> space_;
  std::vector<VarSet> group_ground_;
  std::map<std::string, VarSet> composites_;
  std::map<std::string, int> by_name_;
  int d_ = 0;
};

// ---- LP description ------------------------------------------------------
//
// Primal form used throughout the prover: variables are joint-entropy
// coordinates (one per nonempty variable set, possibly quotiented by the
// symmetry orbits) plus the auxiliary scalars. Every constraint is a row
//   sum coeff * x  >= rhs   (or == rhs),
// and a query c is PROVEN iff min c.x over the feasible set is 0, with the
// normalization row bounding the recession cone.

enum class SymmetryMode { None, Equalities, OrbitQuotient };

struct LpRow {
  std::vector<std::pair<int, Rational>> terms;  // sorted by column id
  bool equality = false;
  Rational rhs;  // zero except the normalization row
  std::string label;
};

struct LpProblem {
  int n_cols = 0;
  std::vector<std::string> col_names;
  std::vector<LpRow> rows;
  std::vector<Rational> objective;  // dense, length n_cols
  int normalization_row = -1;
  SymmetryMode symmetry = SymmetryMode::None;
};

struct BuildOptions {
  SymmetryMode symmetry = SymmetryMode::Equalities;
};

LpProblem build_lp(const GroundModel& model, const LinearQuery& query,
                   const BuildOptions& options = {});

// Replaces the objective of an LP previously built for `model`, leaving the
// constraint rows untouched; lets one LP serve many queries.
void set_objective(LpProblem& lp, const GroundModel& model,
                   const LinearQuery& query);

// Number of elemental Shannon rows for n variables: n conditional entropies
// plus C(n,2) * 2^(n-2) conditional mutual informations (1 when n = 1).
uint64_t elemental_count(int n_vars);

}  // namespace mldr::prover
