#include "mldr/prover/model.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

namespace mldr::prover {

std::string aux_name(int aux) {
  if (aux == kAuxAlpha) return "alpha";
  if (aux == kAuxBeta) return "beta";
  if (aux >= 2) return "B" + std::to_string(aux - 1);
  throw InternalError("bad aux id");
}

std::optional<int> GroundModel::aux_of(const std::string& name) {
  if (name == "alpha") return kAuxAlpha;
  if (name == "beta") return kAuxBeta;
  if (name.size() >= 2 && name[0] == 'B') {
    int k = 0;
    for (size_t p = 1; p < name.size(); ++p) {
      if (!isdigit(static_cast<unsigned char>(name[p]))) return std::nullopt;
      k = k * 10 + (name[p] - '0');
    }
    if (k >= 1) return aux_message(k);
  }
  return std::nullopt;
}

LinearQuery& LinearQuery::H(const Rational& coeff, VarSet of, VarSet given) {
  if (of == 0) throw InvalidParams("entropy term needs a nonempty set");
  terms.push_back({coeff, of, given, -1});
  return *this;
}

LinearQuery& LinearQuery::I(const Rational& coeff, VarSet a, VarSet b,
                            VarSet given) {
  // I(A;B|C) = H(A|C) + H(B|C) - H(AB|C)
  H(coeff, a, given);
  H(coeff, b, given);
  H(-coeff, a | b, given);
  return *this;
}

LinearQuery& LinearQuery::aux(const Rational& coeff, int aux_id) {
  if (aux_id < 0) throw InvalidParams("bad auxiliary id");
  terms.push_back({coeff, 0, 0, aux_id});
  return *this;
}

GroundModel GroundModel::standard(int d, int max_vars) {
  auto space = std::make_shared<GroundSpace>(d);
  if (space->var_count() > max_vars)
    throw ModelTooLarge("full system model needs " +
                        std::to_string(space->var_count()) +
                        " variables, limit is " + std::to_string(max_vars));
  GroundModel m;
  m.d_ = d;
  for (const auto& v : space->vars()) {
    m.by_name_[v.name] = static_cast<int>(m.var_names_.size());
    m.var_names_.push_back(v.name);
  }
  for (const auto& fd : space->fds()) m.fds_.push_back({fd.from, fd.to, fd.label});
  for (int k = 1; k <= d; ++k) m.independent_.push_back(space->M(k));
  for (int i = 1; i <= d + 1; ++i) m.alpha_bounded_.push_back(space->W(i));
  for (int i = 1; i <= d + 1; ++i)
    for (int j = 1; j <= d + 1; ++j)
      if (i != j) m.beta_bounded_.push_back(space->S(i, j));
  for (int k = 1; k <= d; ++k)
    m.message_size_.push_back({space->M(k), aux_message(k)});
  m.space_ = space;
  return m;
}

GroundModel GroundModel::generic(const std::vector<std::string>& names) {
  if (names.empty()) throw InvalidParams("a model needs at least one variable");
  if (names.size() > 20) throw ModelTooLarge("too many variables for an LP model");
  GroundModel m;
  for (const auto& name : names) {
    if (m.by_name_.count(name)) throw InvalidParams("duplicate variable: " + name);
    m.by_name_[name] = static_cast<int>(m.var_names_.size());
    m.var_names_.push_back(name);
  }
  return m;
}

GroundModel GroundModel::grouped(const GroundSpace& space,
                                 const std::vector<GroupSpec>& groups,
                                 const GroupedConstraints& constraints) {
  if (groups.empty()) throw InvalidGrouping("no groups given");
  if (groups.size() > 20) throw ModelTooLarge("too many groups for an LP model");
  GroundModel m;
  m.d_ = space.d();
  VarSet used = 0;
  for (const auto& g : groups) {
    if (g.members.empty()) throw InvalidGrouping("empty group: " + g.name);
    if (m.by_name_.count(g.name))
      throw InvalidGrouping("duplicate group name: " + g.name);
    VarSet ground = 0;
    for (const auto& member : g.members)
      ground |= VarSet(1) << space.index_of(member);
    if (ground & used)
      throw InvalidGrouping("group " + g.name + " overlaps an earlier group");
    used |= ground;
    m.by_name_[g.name] = static_cast<int>(m.var_names_.size());
    m.var_names_.push_back(g.name);
    m.group_ground_.push_back(ground);
  }
  auto resolve_list = [&](const std::vector<std::string>& names) {
    VarSet s = 0;
    for (const auto& name : names) {
      auto it = m.by_name_.find(name);
      if (it == m.by_name_.end()) throw UnknownName("unknown group: " + name);
      s |= VarSet(1) << it->second;
    }
    return s;
  };
  for (const auto& fd : constraints.fds) {
    VarSet from = resolve_list(fd.first);
    VarSet to = resolve_list(fd.second);
    if (from == 0 || to == 0) throw InvalidGrouping("empty side in dependency");
    m.fds_.push_back({from, to, "declared dependency"});
  }
  for (const auto& name : constraints.independent)
    m.independent_.push_back(resolve_list({name}));
  for (const auto& [name, k] : constraints.message_size) {
    if (k < 1 || k > space.d())
      throw InvalidParams("message level out of range: " + std::to_string(k));
    m.message_size_.push_back({resolve_list({name}), aux_message(k)});
  }
  for (const auto& name : constraints.alpha_bounded)
    m.alpha_bounded_.push_back(resolve_list({name}));
  for (const auto& name : constraints.beta_bounded)
    m.beta_bounded_.push_back(resolve_list({name}));
  return m;
}

VarSet GroundModel::ground_of(int v) const {
  if (v < 0 || v >= var_count()) throw InvalidParams("variable index out of range");
  if (!group_ground_.empty()) return group_ground_[v];
  return VarSet(1) << v;
}

void GroundModel::define_composite(const std::string& name, VarSet set) {
  if (set == 0 || (set >> var_count()) != 0)
    throw InvalidParams("composite " + name + " is not a valid variable set");
  composites_[name] = set;
}

VarSet GroundModel::resolve(const std::string& name) const {
  auto cit = composites_.find(name);
  if (cit != composites_.end()) return cit->second;
  auto it = by_name_.find(name);
  if (it != by_name_.end()) return VarSet(1) << it->second;
  if (space_) {
    // Built-in composites of the standard model. l_k is the repair data
    // converging on node k from higher-indexed nodes; the c suffix denotes
    // the prefix union; lp_r additionally includes node 1's contribution.
    auto num = [&](size_t from) -> int {
      int v = 0;
      if (from >= name.size()) throw UnknownName("unknown variable: " + name);
      for (size_t p = from; p < name.size(); ++p) {
        if (!isdigit(static_cast<unsigned char>(name[p])))
          throw UnknownName("unknown variable: " + name);
        v = v * 10 + (name[p] - '0');
      }
      return v;
    };
    try {
      if (name.rfind("Wc", 0) == 0) return space_->W_prefix(num(2));
      if (name.rfind("Mc", 0) == 0) return space_->M_prefix(num(2));
      if (name.rfind("lc", 0) == 0) return space_->l_prefix(num(2));
      if (name.rfind("lp", 0) == 0) return space_->lp(num(2));
      if (name.rfind("l", 0) == 0) return space_->l(num(1));
    } catch (const InvalidParams&) {
      throw UnknownName("unknown variable: " + name);
    }
  }
  throw UnknownName("unknown variable: " + name);
}

std::string GroundModel::set_name(VarSet s) const {
  if (s == 0) return "{}";
  std::string out = "{";
  bool first = true;
  VarSet rest = s;
  while (rest) {
    int v = __builtin_ctzll(rest);
    rest &= rest - 1;
    if (!first) out += ",";
    out += var_names_[v];
    first = false;
  }
  return out + "}";
}

uint64_t elemental_count(int n_vars) {
  if (n_vars < 1) throw InvalidParams("need at least one variable");
  if (n_vars == 1) return 1;
  uint64_t pairs = uint64_t(n_vars) * (n_vars - 1) / 2;
  return uint64_t(n_vars) + pairs * (uint64_t(1) << (n_vars - 2));
}

namespace {

// Deterministic mask -> column mapping, optionally quotienting by orbits.
struct ColumnSpace {
  std::unordered_map<VarSet, int> of_rep;
  std::vector<VarSet> rep;
  const GroundSpace* gs = nullptr;  // set in quotient mode

  VarSet represent(VarSet mask) const {
    return gs ? gs->orbit_min(mask) : mask;
  }
  int col(VarSet mask) const {
    auto it = of_rep.find(represent(mask));
    if (it == of_rep.end()) throw InternalError("unmapped entropy column");
    return it->second;
  }
};

void add_term(std::map<int, Rational>& terms, int col, const Rational& coeff) {
  auto [it, fresh] = terms.emplace(col, coeff);
  if (!fresh) {
    it->second += coeff;
    if (it->second.is_zero()) terms.erase(it);
  }
}

LpRow finish_row(std::map<int, Rational>& terms, bool equality, Rational rhs,
                 std::string label) {
  LpRow row;
  row.terms.assign(terms.begin(), terms.end());
  row.equality = equality;
  row.rhs = std::move(rhs);
  row.label = std::move(label);
  return row;
}

std::string row_key(const LpRow& row) {
  std::string key = row.equality ? "=" : ">";
  key += row.rhs.str();
  for (const auto& [col, coeff] : row.terms) {
    key += ";";
    key += std::to_string(col);
    key += ":";
    key += coeff.str();
  }
  return key;
}

ColumnSpace make_columns(const GroundModel& model, SymmetryMode mode, VarSet full) {
  ColumnSpace cols;
  if (mode == SymmetryMode::OrbitQuotient) cols.gs = model.space();
  for (VarSet mask = 1; mask <= full; ++mask) {
    VarSet rep = cols.represent(mask);
    if (cols.of_rep.emplace(rep, static_cast<int>(cols.rep.size())).second)
      cols.rep.push_back(rep);
  }
  return cols;
}

}  // namespace

LpProblem build_lp(const GroundModel& model, const LinearQuery& query,
                   const BuildOptions& options) {
  const int nv = model.var_count();
  if (nv > 16)
    throw ModelTooLarge("an LP over " + std::to_string(nv) +
                        " variables would not fit in memory");
  const VarSet full = (nv == 64) ? ~VarSet(0) : ((VarSet(1) << nv) - 1);

  SymmetryMode mode = options.symmetry;
  if (!model.node_symmetry() && mode == SymmetryMode::OrbitQuotient)
    throw InvalidParams("orbit quotient needs a node-symmetric model");
  if (!model.node_symmetry()) mode = SymmetryMode::None;

  LpProblem lp;
  lp.symmetry = mode;

  ColumnSpace cols = make_columns(model, mode, full);
  const int n_entropy = static_cast<int>(cols.rep.size());
  const int n_aux = (model.d() > 0) ? 2 + model.d() : 0;
  lp.n_cols = n_entropy + n_aux;
  lp.col_names.reserve(lp.n_cols);
  for (int c = 0; c < n_entropy; ++c)
    lp.col_names.push_back("h" + model.set_name(cols.rep[c]));
  for (int a = 0; a < n_aux; ++a) lp.col_names.push_back(aux_name(a));
  auto aux_col = [&](int aux) {
    if (aux < 0 || aux >= n_aux)
      throw UnknownName("auxiliary " + (aux >= 0 ? aux_name(aux) : std::string("?")) +
                        " not present in this model");
    return n_entropy + aux;
  };

  const bool dedup = (mode == SymmetryMode::OrbitQuotient);
  std::unordered_map<std::string, int> seen;
  auto push_row = [&](LpRow row) {
    if (row.terms.empty()) return;
    if (dedup && !seen.emplace(row_key(row), 1).second) return;
    lp.rows.push_back(std::move(row));
  };

  // Elemental Shannon rows: every other inequality is implied by these.
  for (int i = 0; i < nv; ++i) {
    std::map<int, Rational> t;
    add_term(t, cols.col(full), Rational(1));
    VarSet rest = full & ~(VarSet(1) << i);
    if (rest) add_term(t, cols.col(rest), Rational(-1));
    push_row(finish_row(t, false, Rational(0),
                        "tail entropy of " + model.var_names()[i]));
  }
  for (int a = 0; a < nv; ++a) {
    for (int b = a + 1; b < nv; ++b) {
      VarSet pa = VarSet(1) << a, pb = VarSet(1) << b;
      VarSet others = full & ~(pa | pb);
      // iterate over all subsets K of the remaining variables
      VarSet k = 0;
      while (true) {
        std::map<int, Rational> t;
        add_term(t, cols.col(pa | k), Rational(1));
        add_term(t, cols.col(pb | k), Rational(1));
        add_term(t, cols.col(pa | pb | k), Rational(-1));
        if (k) add_term(t, cols.col(k), Rational(-1));
        push_row(finish_row(t, false, Rational(0),
                            "information between " + model.var_names()[a] +
                                " and " + model.var_names()[b]));
        if (k == others) break;
        k = (k - others) & others;  // next subset of `others`
      }
    }
  }

  for (const auto& fd : model.fds()) {
    if ((fd.to & ~fd.from) == 0) continue;
    std::map<int, Rational> t;
    add_term(t, cols.col(fd.from | fd.to), Rational(1));
    add_term(t, cols.col(fd.from), Rational(-1));
    push_row(finish_row(t, true, Rational(0), fd.label));
  }

  if (model.independent().size() >= 2) {
    std::map<int, Rational> t;
    VarSet all = 0;
    for (VarSet s : model.independent()) all |= s;
    add_term(t, cols.col(all), Rational(1));
    for (VarSet s : model.independent()) add_term(t, cols.col(s), Rational(-1));
    push_row(finish_row(t, true, Rational(0), "independent messages"));
  }

  for (VarSet s : model.alpha_bounded()) {
    std::map<int, Rational> t;
    add_term(t, aux_col(kAuxAlpha), Rational(1));
    add_term(t, cols.col(s), Rational(-1));
    push_row(finish_row(t, false, Rational(0), "storage bound on " + model.set_name(s)));
  }
  for (VarSet s : model.beta_bounded()) {
    std::map<int, Rational> t;
    add_term(t, aux_col(kAuxBeta), Rational(1));
    add_term(t, cols.col(s), Rational(-1));
    push_row(finish_row(t, false, Rational(0), "repair bound on " + model.set_name(s)));
  }
  for (const auto& [s, aux] : model.message_size()) {
    std::map<int, Rational> t;
    add_term(t, cols.col(s), Rational(1));
    add_term(t, aux_col(aux), Rational(-1));
    push_row(finish_row(t, true, Rational(0),
                        "size of " + model.set_name(s) + " is " + aux_name(aux)));
  }
  for (int a = 0; a < n_aux; ++a) {
    std::map<int, Rational> t;
    add_term(t, n_entropy + a, Rational(1));
    push_row(finish_row(t, false, Rational(0), aux_name(a) + " is nonnegative"));
  }

  if (mode == SymmetryMode::Equalities) {
    // Equalities for a generating set of the node group cut the feasible set
    // down to the fully symmetric subspace.
    std::set<std::pair<VarSet, VarSet>> done;
    for (const auto& vp : model.space()->generator_var_perms()) {
      for (VarSet mask = 1; mask <= full; ++mask) {
        VarSet img = apply_var_perm(vp, mask);
        if (img == mask) continue;
        VarSet lo = std::min(mask, img), hi = std::max(mask, img);
        if (!done.emplace(lo, hi).second) continue;
        std::map<int, Rational> t;
        add_term(t, cols.col(lo), Rational(1));
        add_term(t, cols.col(hi), Rational(-1));
        push_row(finish_row(t, true, Rational(0), "relabeling symmetry"));
      }
    }
  }

  {
    std::map<int, Rational> t;
    for (int c = 0; c < n_entropy; ++c) add_term(t, c, Rational(-1));
    for (int a = 2; a < n_aux; ++a) add_term(t, n_entropy + a, Rational(-1));
    LpRow row = finish_row(t, false, Rational(-1), "normalization");
    lp.normalization_row = static_cast<int>(lp.rows.size());
    lp.rows.push_back(std::move(row));
  }

  set_objective(lp, model, query);
  return lp;
}

void set_objective(LpProblem& lp, const GroundModel& model,
                   const LinearQuery& query) {
  const int nv = model.var_count();
  const VarSet full = (nv == 64) ? ~VarSet(0) : ((VarSet(1) << nv) - 1);
  SymmetryMode mode = lp.symmetry;
  ColumnSpace cols = make_columns(model, mode, full);
  const int n_entropy = static_cast<int>(cols.rep.size());
  const int n_aux = (model.d() > 0) ? 2 + model.d() : 0;
  if (lp.n_cols != n_entropy + n_aux)
    throw SizeMismatch("LP was built for a different model");
  lp.objective.assign(lp.n_cols, Rational(0));
  for (const QueryTerm& term : query.terms) {
    if (term.aux >= 0) {
      if (term.aux >= n_aux)
        throw UnknownName("auxiliary " + aux_name(term.aux) +
                          " not present in this model");
      lp.objective[n_entropy + term.aux] += term.coeff;
      continue;
    }
    if ((term.of | term.given) & ~full)
      throw InvalidParams("query term outside the model: " + query.name);
    lp.objective[cols.col(term.of | term.given)] += term.coeff;
    if (term.given) lp.objective[cols.col(term.given)] -= term.coeff;
  }
}

}  // namespace mldr::prover
