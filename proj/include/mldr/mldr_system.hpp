#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mldr/bounds.hpp"
#include "mldr/mbr_code.hpp"

namespace mldr {

// System parameters: d independent messages on n nodes over GF(q). sizes[k-1]
// is the size of the level-k message in symbols; zeros are allowed.
struct MldrConfig {
  int n = 0;
  int d = 0;
  std::vector<uint64_t> sizes;
  Field field{257};
};

// Striping plan for one priority level: the level-k message is padded to a
// whole number of codeword generations of its (n,k,d) code.
struct LevelLayout {
  int level = 0;
  uint64_t size = 0;
  uint64_t block = 0;
  uint64_t generations = 0;
  uint64_t padded_size = 0;
  uint64_t pad = 0;
};

// One node's stacked share: per-level, per-generation chunks of d symbols,
// concatenated in ascending level then ascending generation order.
struct SystemShare {
  int node_index = 0;
  std::vector<felem> symbols;

  bool operator==(const SystemShare&) const = default;
};

// The repair traffic one helper sends toward a failed node: one symbol per
// generation, beta_total in all, in layout order.
struct RepairPacket {
  int helper = 0;
  int target = 0;
  std::vector<felem> symbols;
};

// Separate-coding stack: level k runs its own (n,k,d) minimum-bandwidth code;
// nodes store the concatenation of all per-level shares. Every node holds
// alpha_total = d * beta_total symbols and every repair pulls beta_total
// symbols from each of d helpers.
class MldrSystem {
 public:
  static MldrSystem plan(const MldrConfig& config);

  const MldrConfig& config() const { return config_; }
  const std::vector<LevelLayout>& layouts() const { return layouts_; }
  const MbrCode* code(int level) const;  // nullptr when the level is empty

  uint64_t alpha_total() const { return alpha_total_; }
  uint64_t beta_total() const { return beta_total_; }

  // messages[k-1] must have exactly sizes[k-1] symbols.
  std::vector<SystemShare> encode(const std::vector<std::vector<felem>>& messages) const;

  // Any j distinct shares recover every level k <= j; returned vector has one
  // entry per level k in [1 : min(j,d)], empty where sizes[k-1] == 0.
  // Padding is stripped.
  std::vector<std::vector<felem>> reconstruct(const std::vector<SystemShare>& shares) const;

  // The beta_total symbols a helper contributes toward rebuilding `target`.
  RepairPacket repair_packet(const SystemShare& helper_share, int target) const;

  // Rebuilds the lost share from d packets aimed at `target`.
  SystemShare assemble(int target, const std::vector<RepairPacket>& packets) const;

  // Convenience: packets from d helper shares, then assemble.
  SystemShare regenerate(int target, const std::vector<SystemShare>& helpers) const;

  // Operating point normalized by padded sizes: exact equality with the
  // bound intersection whenever padding is zero (and in general, because the
  // padded sizes are what the codes actually store).
  RatePoint achieved_point() const;

  // Same counters normalized by the requested (unpadded) sizes.
  RatePoint achieved_point_unpadded() const;

  // Profile of the padded sizes; the one achieved_point() is exact against.
  MessageProfile padded_profile() const;

 private:
  MldrSystem() = default;

  // Offset of (level index in layouts_, generation) inside a share.
  size_t chunk_offset(size_t level_pos, uint64_t generation) const;
  NodeShare chunk(const SystemShare& share, size_t level_pos, uint64_t generation) const;

  MldrConfig config_;
  std::vector<LevelLayout> layouts_;
  std::vector<std::optional<MbrCode>> codes_;
  uint64_t alpha_total_ = 0;
  uint64_t beta_total_ = 0;
};

}  // namespace mldr
