#include "mldr/mldr_system.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace mldr {

MldrSystem MldrSystem::plan(const MldrConfig& config) {
  if (config.n < 2 || config.d < 1 || config.d > config.n - 1) {
    throw InvalidParams("need n >= 2 and 1 <= d <= n-1");
  }
  if (config.sizes.size() != static_cast<size_t>(config.d)) {
    throw SizeMismatch("config needs exactly d message sizes");
  }
  if (std::all_of(config.sizes.begin(), config.sizes.end(), [](uint64_t s) { return s == 0; })) {
    throw EmptySystem("all message sizes are zero");
  }

  MldrSystem sys;
  sys.config_ = config;
  for (int k = 1; k <= config.d; ++k) {
    LevelLayout layout;
    layout.level = k;
    layout.size = config.sizes[k - 1];
    if (layout.size == 0) {
      sys.layouts_.push_back(layout);
      sys.codes_.emplace_back(std::nullopt);
      continue;
    }
    MbrCode code = MbrCode::make(config.n, k, config.d, config.field);
    layout.block = static_cast<uint64_t>(code.params().block);
    layout.generations = (layout.size + layout.block - 1) / layout.block;
    layout.padded_size = layout.generations * layout.block;
    layout.pad = layout.padded_size - layout.size;
    sys.beta_total_ += layout.generations;
    sys.layouts_.push_back(layout);
    sys.codes_.emplace_back(std::move(code));
  }
  sys.alpha_total_ = static_cast<uint64_t>(config.d) * sys.beta_total_;
  return sys;
}

const MbrCode* MldrSystem::code(int level) const {
  if (level < 1 || level > config_.d) throw InvalidParams("level out of range");
  const auto& c = codes_[level - 1];
  return c ? &*c : nullptr;
}

size_t MldrSystem::chunk_offset(size_t level_pos, uint64_t generation) const {
  size_t off = 0;
  for (size_t i = 0; i < level_pos; ++i) {
    off += static_cast<size_t>(layouts_[i].generations) * config_.d;
  }
  return off + static_cast<size_t>(generation) * config_.d;
}

NodeShare MldrSystem::chunk(const SystemShare& share, size_t level_pos, uint64_t generation) const {
  size_t off = chunk_offset(level_pos, generation);
  NodeShare ns;
  ns.node_index = share.node_index;
  ns.symbols.assign(share.symbols.begin() + off, share.symbols.begin() + off + config_.d);
  return ns;
}

std::vector<SystemShare> MldrSystem::encode(const std::vector<std::vector<felem>>& messages) const {
  if (messages.size() != static_cast<size_t>(config_.d)) {
    throw SizeMismatch("need exactly d messages");
  }
  std::vector<SystemShare> shares(config_.n);
  for (int i = 0; i < config_.n; ++i) {
    shares[i].node_index = i + 1;
    shares[i].symbols.reserve(alpha_total_);
  }
  for (int k = 1; k <= config_.d; ++k) {
    const LevelLayout& layout = layouts_[k - 1];
    if (messages[k - 1].size() != layout.size) {
      throw SizeMismatch("message for level " + std::to_string(k) + " must have " +
                         std::to_string(layout.size) + " symbols");
    }
    if (layout.generations == 0) continue;
    std::vector<felem> padded = messages[k - 1];
    padded.resize(layout.padded_size, 0);
    const MbrCode& code = *codes_[k - 1];
    for (uint64_t g = 0; g < layout.generations; ++g) {
      std::vector<felem> piece(padded.begin() + g * layout.block,
                               padded.begin() + (g + 1) * layout.block);
      std::vector<NodeShare> coded = code.encode(piece);
      for (int i = 0; i < config_.n; ++i) {
        shares[i].symbols.insert(shares[i].symbols.end(), coded[i].symbols.begin(),
                                 coded[i].symbols.end());
      }
    }
  }
  return shares;
}

std::vector<std::vector<felem>> MldrSystem::reconstruct(
    const std::vector<SystemShare>& shares) const {
  if (shares.empty() || shares.size() > static_cast<size_t>(config_.n)) {
    throw SizeMismatch("need between 1 and n shares");
  }
  std::set<int> seen;
  std::vector<SystemShare> ordered = shares;
  for (const SystemShare& s : ordered) {
    if (s.node_index < 1 || s.node_index > config_.n) throw InvalidParams("bad node index");
    if (!seen.insert(s.node_index).second) {
      throw DuplicateNode("share for node " + std::to_string(s.node_index) + " given twice");
    }
    if (s.symbols.size() != alpha_total_) {
      throw SizeMismatch("share must carry alpha_total symbols");
    }
  }
  std::sort(ordered.begin(), ordered.end(),
            [](const SystemShare& a, const SystemShare& b) { return a.node_index < b.node_index; });

  int j = static_cast<int>(ordered.size());
  int levels = std::min(j, config_.d);
  std::vector<std::vector<felem>> out(levels);
  for (int k = 1; k <= levels; ++k) {
    const LevelLayout& layout = layouts_[k - 1];
    if (layout.generations == 0) continue;
    const MbrCode& code = *codes_[k - 1];
    std::vector<felem> message;
    message.reserve(layout.padded_size);
    for (uint64_t g = 0; g < layout.generations; ++g) {
      std::vector<NodeShare> picked;
      for (int s = 0; s < k; ++s) picked.push_back(chunk(ordered[s], k - 1, g));
      std::vector<felem> piece = code.reconstruct(picked);
      message.insert(message.end(), piece.begin(), piece.end());
    }
    message.resize(layout.size);  // strip padding
    out[k - 1] = std::move(message);
  }
  return out;
}

RepairPacket MldrSystem::repair_packet(const SystemShare& helper_share, int target) const {
  if (target < 1 || target > config_.n) throw InvalidParams("bad target index");
  if (helper_share.node_index == target) throw SelfRepair("node cannot help rebuild itself");
  if (helper_share.symbols.size() != alpha_total_) {
    throw SizeMismatch("helper share must carry alpha_total symbols");
  }
  RepairPacket packet;
  packet.helper = helper_share.node_index;
  packet.target = target;
  packet.symbols.reserve(beta_total_);
  for (int k = 1; k <= config_.d; ++k) {
    const LevelLayout& layout = layouts_[k - 1];
    if (layout.generations == 0) continue;
    const MbrCode& code = *codes_[k - 1];
    for (uint64_t g = 0; g < layout.generations; ++g) {
      packet.symbols.push_back(code.helper_symbol(chunk(helper_share, k - 1, g), target).symbol);
    }
  }
  return packet;
}

SystemShare MldrSystem::assemble(int target, const std::vector<RepairPacket>& packets) const {
  if (packets.size() != static_cast<size_t>(config_.d)) {
    throw InvalidRepairSet("repair needs exactly d packets");
  }
  std::set<int> helpers;
  for (const RepairPacket& p : packets) {
    if (p.target != target) throw InvalidRepairSet("packet aimed at a different target");
    if (p.helper == target) throw InvalidRepairSet("target cannot appear among helpers");
    if (p.helper < 1 || p.helper > config_.n) throw InvalidParams("bad helper index");
    if (!helpers.insert(p.helper).second) throw InvalidRepairSet("duplicate helper");
    if (p.symbols.size() != beta_total_) {
      throw SizeMismatch("packet must carry beta_total symbols");
    }
  }

  SystemShare share;
  share.node_index = target;
  share.symbols.reserve(alpha_total_);
  size_t pos = 0;
  for (int k = 1; k <= config_.d; ++k) {
    const LevelLayout& layout = layouts_[k - 1];
    if (layout.generations == 0) continue;
    const MbrCode& code = *codes_[k - 1];
    for (uint64_t g = 0; g < layout.generations; ++g) {
      std::vector<RepairSymbol> syms;
      for (const RepairPacket& p : packets) {
        syms.push_back(RepairSymbol{p.helper, target, p.symbols[pos]});
      }
      NodeShare rebuilt = code.regenerate(target, syms);
      share.symbols.insert(share.symbols.end(), rebuilt.symbols.begin(), rebuilt.symbols.end());
      ++pos;
    }
  }
  return share;
}

SystemShare MldrSystem::regenerate(int target, const std::vector<SystemShare>& helpers) const {
  if (helpers.size() != static_cast<size_t>(config_.d)) {
    throw InvalidRepairSet("repair needs exactly d helper shares");
  }
  std::vector<RepairPacket> packets;
  packets.reserve(helpers.size());
  for (const SystemShare& h : helpers) {
    if (h.node_index == target) throw InvalidRepairSet("target cannot appear among helpers");
    packets.push_back(repair_packet(h, target));
  }
  return assemble(target, packets);
}

MessageProfile MldrSystem::padded_profile() const {
  std::vector<Rational> sizes;
  for (const LevelLayout& layout : layouts_) {
    sizes.push_back(Rational(static_cast<long>(layout.padded_size)));
  }
  return MessageProfile::from_sizes(sizes);
}

RatePoint MldrSystem::achieved_point() const {
  Rational total;
  for (const LevelLayout& layout : layouts_) total += Rational(static_cast<long>(layout.padded_size));
  return RatePoint{Rational(static_cast<long>(alpha_total_)) / total,
                   Rational(static_cast<long>(beta_total_)) / total};
}

RatePoint MldrSystem::achieved_point_unpadded() const {
  Rational total;
  for (const LevelLayout& layout : layouts_) total += Rational(static_cast<long>(layout.size));
  return RatePoint{Rational(static_cast<long>(alpha_total_)) / total,
                   Rational(static_cast<long>(beta_total_)) / total};
}

}  // namespace mldr
