#pragma once

#include <vector>

#include "mldr/matrix.hpp"

namespace mldr {

// Parameters of one (n,k,d) regenerating code at the minimum-bandwidth point:
// each node stores alpha = d symbols, each repair helper sends beta = 1, and
// one codeword carries block = k*d - k*(k-1)/2 message symbols.
struct MbrParams {
  int n = 0;
  int k = 0;
  int d = 0;
  int alpha = 0;
  int beta = 1;
  int block = 0;
};

// Contents of one storage node: alpha symbols.
struct NodeShare {
  int node_index = 0;  // 1-based
  std::vector<felem> symbols;
};

// One symbol sent by a helper toward a node being rebuilt.
struct RepairSymbol {
  int helper = 0;
  int target = 0;
  felem symbol = 0;
};

// Product-matrix regenerating code. The encoding matrix psi (n x d) is
// Vandermonde on evaluation points 1..n, split as [phi | delta] with phi the
// first k columns. A codeword is the symmetric d x d message matrix
// M = [[S, T], [T', 0]]: S is k x k symmetric and holds the first k(k+1)/2
// message symbols (upper triangle, row-major), T is k x (d-k) and holds the
// rest (row-major). Node i stores the row psi_i' * M. When k = d the T block
// is empty and M = S.
class MbrCode {
 public:
  static MbrCode make(int n, int k, int d, const Field& field);

  const MbrParams& params() const { return params_; }
  const Field& field() const { return field_; }
  const Matrix& psi() const { return psi_; }

  // message.size() == block; returns all n node shares.
  std::vector<NodeShare> encode(const std::vector<felem>& message) const;

  // Exactly k shares with distinct valid indices; recovers the message.
  std::vector<felem> reconstruct(const std::vector<NodeShare>& shares) const;

  // The single symbol helper j contributes to rebuilding node `target`:
  // (psi_j' M) . psi_target, computed from the helper's stored row alone.
  RepairSymbol helper_symbol(const NodeShare& helper_share, int target) const;

  // d symbols from distinct helpers, all aimed at `target`; returns a share
  // bit-identical to the lost one.
  NodeShare regenerate(int target, const std::vector<RepairSymbol>& symbols) const;

 private:
  MbrCode(MbrParams params, Field field, Matrix psi);

  Matrix message_matrix(const std::vector<felem>& message) const;
  void check_index(int node) const;

  MbrParams params_;
  Field field_;
  Matrix psi_;
};

}  // namespace mldr
