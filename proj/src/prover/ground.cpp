#include "mldr/prover/ground.hpp"

#include <algorithm>
#include <numeric>

namespace mldr::prover {

namespace {

// Enumerates subsets of {1..n} of the given size, as sorted index lists.
void k_subsets(int n, int k, std::vector<std::vector<int>>& out) {
  std::vector<int> pick(k);
  std::iota(pick.begin(), pick.end(), 1);
  while (true) {
    out.push_back(pick);
    int pos = k - 1;
    while (pos >= 0 && pick[pos] == n - (k - 1 - pos)) --pos;
    if (pos < 0) break;
    ++pick[pos];
    for (int t = pos + 1; t < k; ++t) pick[t] = pick[t - 1] + 1;
  }
}

}  // namespace

GroundSpace::GroundSpace(int d) : d_(d), n_(d + 1) {
  if (d < 1) throw InvalidParams("system level count must be at least 1");
  if (d > 6) throw ModelTooLarge("ground namespace limited to d <= 6");

  auto add = [&](GroundVar v) {
    by_name_[v.name] = static_cast<int>(vars_.size());
    vars_.push_back(std::move(v));
  };

  for (int i = 1; i <= n_; ++i)
    add({"W" + std::to_string(i), VarKind::Node, i, 0});

  s_idx_.assign(n_ + 1, std::vector<int>(n_ + 1, -1));
  for (int i = 1; i <= n_; ++i)
    for (int j = 1; j <= n_; ++j) {
      if (i == j) continue;
      s_idx_[i][j] = static_cast<int>(vars_.size());
      add({"S" + std::to_string(i) + "_" + std::to_string(j), VarKind::Repair,
           i, j});
    }

  for (int k = 1; k <= d_; ++k)
    add({"M" + std::to_string(k), VarKind::Message, k, 0});

  // Repair data is computed by the helper from its own share.
  for (int i = 1; i <= n_; ++i)
    for (int j = 1; j <= n_; ++j) {
      if (i == j) continue;
      fds_.push_back({W(i), S(i, j),
                      "W" + std::to_string(i) + " determines S" +
                          std::to_string(i) + "_" + std::to_string(j)});
    }

  // A share is rebuilt exactly from the repair data of all other nodes.
  for (int k = 1; k <= n_; ++k) {
    VarSet inbound = 0;
    for (int i = 1; i <= n_; ++i)
      if (i != k) inbound |= S(i, k);
    fds_.push_back({inbound, W(k), "repair data rebuilds W" + std::to_string(k)});
  }

  // Level k is decodable from any k shares.
  for (int k = 1; k <= d_; ++k) {
    std::vector<std::vector<int>> subs;
    k_subsets(n_, k, subs);
    for (const auto& sub : subs) {
      VarSet from = 0;
      for (int i : sub) from |= W(i);
      fds_.push_back({from, M(k), set_name(from) + " decodes M" + std::to_string(k)});
    }
  }

  std::vector<int> node_perm(n_);
  std::iota(node_perm.begin(), node_perm.end(), 1);
  do {
    var_perms_.push_back(var_perm_of(node_perm));
  } while (std::next_permutation(node_perm.begin(), node_perm.end()));
}

int GroundSpace::w_index(int i) const {
  if (i < 1 || i > n_) throw UnknownName("no such node: W" + std::to_string(i));
  return i - 1;
}

int GroundSpace::s_index(int i, int j) const {
  if (i < 1 || i > n_ || j < 1 || j > n_ || i == j)
    throw UnknownName("no such repair variable: S" + std::to_string(i) + "_" +
                      std::to_string(j));
  return s_idx_[i][j];
}

int GroundSpace::m_index(int k) const {
  if (k < 1 || k > d_)
    throw UnknownName("no such message: M" + std::to_string(k));
  return n_ + n_ * (n_ - 1) + (k - 1);
}

int GroundSpace::index_of(const std::string& name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) throw UnknownName("unknown variable: " + name);
  return it->second;
}

VarSet GroundSpace::l(int k) const {
  if (k < 1 || k > d_)
    throw InvalidParams("repair-union index out of range: " + std::to_string(k));
  VarSet s = 0;
  for (int i = k + 1; i <= n_; ++i) s |= S(i, k);
  return s;
}

VarSet GroundSpace::l_prefix(int k) const {
  VarSet s = 0;
  for (int r = 1; r <= k; ++r) s |= l(r);
  return s;
}

VarSet GroundSpace::lp(int r) const {
  if (r < 2 || r > d_)
    throw InvalidParams("augmented repair-union index out of range: " +
                        std::to_string(r));
  return S(1, r) | l(r);
}

VarSet GroundSpace::lp_range(int lo, int hi) const {
  VarSet s = 0;
  for (int r = lo; r <= hi; ++r) s |= lp(r);
  return s;
}

VarSet GroundSpace::W_prefix(int k) const {
  VarSet s = 0;
  for (int i = 1; i <= k; ++i) s |= W(i);
  return s;
}

VarSet GroundSpace::M_prefix(int k) const {
  VarSet s = 0;
  for (int r = 1; r <= k; ++r) s |= M(r);
  return s;
}

VarSet GroundSpace::S_set(const std::vector<int>& senders, int target) const {
  VarSet s = 0;
  for (int i : senders) s |= S(i, target);
  return s;
}

std::vector<int> GroundSpace::var_perm_of(const std::vector<int>& node_perm) const {
  if (static_cast<int>(node_perm.size()) != n_)
    throw InvalidParams("node permutation has wrong length");
  std::vector<int> img(vars_.size());
  for (size_t v = 0; v < vars_.size(); ++v) {
    const GroundVar& gv = vars_[v];
    switch (gv.kind) {
      case VarKind::Node:
        img[v] = w_index(node_perm[gv.i - 1]);
        break;
      case VarKind::Repair:
        img[v] = s_index(node_perm[gv.i - 1], node_perm[gv.j - 1]);
        break;
      default:
        img[v] = static_cast<int>(v);
        break;
    }
  }
  return img;
}

VarSet apply_var_perm(const std::vector<int>& var_perm, VarSet s) {
  VarSet out = 0;
  while (s) {
    int v = __builtin_ctzll(s);
    s &= s - 1;
    out |= VarSet(1) << var_perm[v];
  }
  return out;
}

VarSet GroundSpace::apply(const std::vector<int>& perm, VarSet s) const {
  return apply_var_perm(var_perm_of(perm), s);
}

VarSet GroundSpace::closure(VarSet s) const {
  bool grew = true;
  while (grew) {
    grew = false;
    for (const Fd& fd : fds_) {
      if ((fd.from & ~s) == 0 && (fd.to & ~s) != 0) {
        s |= fd.to;
        grew = true;
      }
    }
  }
  return s;
}

VarSet GroundSpace::orbit_min(VarSet s) const {
  VarSet best = s;
  for (const auto& vp : var_perms_) {
    VarSet img = apply_var_perm(vp, s);
    if (img < best) best = img;
  }
  return best;
}

std::vector<std::vector<int>> GroundSpace::generator_var_perms() const {
  std::vector<std::vector<int>> out;
  std::vector<int> swap01(n_);
  std::iota(swap01.begin(), swap01.end(), 1);
  if (n_ >= 2) std::swap(swap01[0], swap01[1]);
  out.push_back(var_perm_of(swap01));
  std::vector<int> cycle(n_);
  for (int i = 0; i < n_; ++i) cycle[i] = (i + 1) % n_ + 1;
  out.push_back(var_perm_of(cycle));
  return out;
}

std::string GroundSpace::set_name(VarSet s) const {
  if (s == 0) return "{}";
  std::string out = "{";
  bool first = true;
  VarSet rest = s;
  while (rest) {
    int v = __builtin_ctzll(rest);
    rest &= rest - 1;
    if (!first) out += ",";
    out += vars_[v].name;
    first = false;
  }
  out += "}";
  return out;
}

}  // namespace mldr::prover
