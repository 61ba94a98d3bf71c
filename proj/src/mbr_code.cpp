#include "mldr/mbr_code.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace mldr {

MbrCode::MbrCode(MbrParams params, Field field, Matrix psi)
    : params_(params), field_(field), psi_(std::move(psi)) {}

MbrCode MbrCode::make(int n, int k, int d, const Field& field) {
  if (k < 1 || k > d || d > n - 1) {
    throw InvalidParams("need 1 <= k <= d <= n-1, got (n,k,d)=(" + std::to_string(n) + "," +
                        std::to_string(k) + "," + std::to_string(d) + ")");
  }
  if (field.q() <= static_cast<uint32_t>(n)) {
    throw InvalidParams("field must satisfy q > n for n distinct nonzero points");
  }
  MbrParams p;
  p.n = n;
  p.k = k;
  p.d = d;
  p.alpha = d;
  p.beta = 1;
  p.block = k * d - k * (k - 1) / 2;
  std::vector<felem> points(n);
  for (int i = 0; i < n; ++i) points[i] = static_cast<felem>(i + 1);
  return MbrCode(p, field, Matrix::vandermonde(field, points, d));
}

void MbrCode::check_index(int node) const {
  if (node < 1 || node > params_.n) {
    throw InvalidParams("node index " + std::to_string(node) + " outside [1:" +
                        std::to_string(params_.n) + "]");
  }
}

Matrix MbrCode::message_matrix(const std::vector<felem>& message) const {
  if (message.size() != static_cast<size_t>(params_.block)) {
    throw SizeMismatch("message must have exactly " + std::to_string(params_.block) + " symbols");
  }
  const int k = params_.k, d = params_.d;
  Matrix m(field_, d, d);
  size_t pos = 0;
  for (int i = 0; i < k; ++i) {     // S block, symmetric, upper triangle row-major
    for (int j = i; j < k; ++j) {
      felem v = field_.from_int(message[pos++]);
      m.at(i, j) = v;
      m.at(j, i) = v;
    }
  }
  for (int i = 0; i < k; ++i) {     // T block and its transpose
    for (int j = k; j < d; ++j) {
      felem v = field_.from_int(message[pos++]);
      m.at(i, j) = v;
      m.at(j, i) = v;
    }
  }
  return m;
}

std::vector<NodeShare> MbrCode::encode(const std::vector<felem>& message) const {
  Matrix coded = psi_.mul(message_matrix(message));  // n x d
  std::vector<NodeShare> shares(params_.n);
  for (int i = 0; i < params_.n; ++i) {
    shares[i].node_index = i + 1;
    shares[i].symbols.resize(params_.d);
    for (int j = 0; j < params_.d; ++j) shares[i].symbols[j] = coded.at(i, j);
  }
  return shares;
}

std::vector<felem> MbrCode::reconstruct(const std::vector<NodeShare>& shares) const {
  const int k = params_.k, d = params_.d;
  if (shares.size() != static_cast<size_t>(k)) {
    throw SizeMismatch("reconstruction needs exactly k=" + std::to_string(k) + " shares, got " +
                       std::to_string(shares.size()));
  }
  std::set<int> seen;
  Matrix coded(field_, k, d);
  std::vector<size_t> rows;
  for (int i = 0; i < k; ++i) {
    const NodeShare& s = shares[i];
    check_index(s.node_index);
    if (!seen.insert(s.node_index).second) {
      throw DuplicateNode("share for node " + std::to_string(s.node_index) + " given twice");
    }
    if (s.symbols.size() != static_cast<size_t>(params_.alpha)) {
      throw SizeMismatch("share must carry alpha symbols");
    }
    rows.push_back(static_cast<size_t>(s.node_index - 1));
    for (int j = 0; j < d; ++j) coded.at(i, j) = s.symbols[j];
  }

  // coded = psi_rows * M = [phi*S + delta*T' | phi*T]; phi is invertible on
  // any k rows, so T comes from the right block, then S by subtraction.
  Matrix psi_rows = psi_.select_rows(rows);
  std::vector<size_t> phi_cols_ids, delta_cols_ids;
  Matrix phi(field_, k, k), delta(field_, k, d - k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) phi.at(i, j) = psi_rows.at(i, j);
    for (int j = k; j < d; ++j) delta.at(i, j - k) = psi_rows.at(i, j);
  }
  Matrix phi_inv(field_, 0, 0);
  try {
    phi_inv = phi.invert();
  } catch (const SingularMatrix&) {
    throw InternalError("reconstruction system singular; code construction is broken");
  }

  Matrix t_block(field_, k, d - k);
  if (d > k) {
    Matrix right(field_, k, d - k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < d - k; ++j) right.at(i, j) = coded.at(i, k + j);
    t_block = phi_inv.mul(right);
  }

  Matrix left(field_, k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) left.at(i, j) = coded.at(i, j);
  Matrix s_block = left;
  if (d > k) {
    Matrix dt = delta.mul(t_block.transpose());
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) s_block.at(i, j) = field_.sub(left.at(i, j), dt.at(i, j));
  }
  s_block = phi_inv.mul(s_block);

  std::vector<felem> message;
  message.reserve(params_.block);
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j) message.push_back(s_block.at(i, j));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < d - k; ++j) message.push_back(t_block.at(i, j));
  return message;
}

RepairSymbol MbrCode::helper_symbol(const NodeShare& helper_share, int target) const {
  check_index(helper_share.node_index);
  check_index(target);
  if (helper_share.node_index == target) {
    throw SelfRepair("node " + std::to_string(target) + " cannot help rebuild itself");
  }
  if (helper_share.symbols.size() != static_cast<size_t>(params_.alpha)) {
    throw SizeMismatch("helper share must carry alpha symbols");
  }
  felem acc = 0;
  for (int j = 0; j < params_.d; ++j) {
    acc = field_.add(acc, field_.mul(helper_share.symbols[j], psi_.at(target - 1, j)));
  }
  return RepairSymbol{helper_share.node_index, target, acc};
}

NodeShare MbrCode::regenerate(int target, const std::vector<RepairSymbol>& symbols) const {
  check_index(target);
  const int d = params_.d;
  if (symbols.size() != static_cast<size_t>(d)) {
    throw InvalidRepairSet("repair needs exactly d=" + std::to_string(d) + " symbols");
  }
  std::set<int> helpers;
  std::vector<size_t> rows;
  Matrix rhs(field_, d, 1);
  for (int i = 0; i < d; ++i) {
    const RepairSymbol& s = symbols[i];
    check_index(s.helper);
    if (s.target != target) throw InvalidRepairSet("repair symbol aimed at a different target");
    if (s.helper == target) throw InvalidRepairSet("target cannot appear among helpers");
    if (!helpers.insert(s.helper).second) {
      throw InvalidRepairSet("helper " + std::to_string(s.helper) + " appears twice");
    }
    rows.push_back(static_cast<size_t>(s.helper - 1));
    rhs.at(i, 0) = field_.from_int(s.symbol);
  }

  // Each symbol is psi_j' (M psi_f); any d helper rows of psi are invertible,
  // and M psi_f transposed is exactly the lost row psi_f' M (M symmetric).
  Matrix solution(field_, 0, 0);
  try {
    solution = psi_.select_rows(rows).solve(rhs);
  } catch (const SingularMatrix&) {
    throw InternalError("repair system singular; code construction is broken");
  }
  NodeShare share;
  share.node_index = target;
  share.symbols.resize(d);
  for (int j = 0; j < d; ++j) share.symbols[j] = solution.at(j, 0);
  return share;
}

}  // namespace mldr
