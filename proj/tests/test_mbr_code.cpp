#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "mldr/bounds.hpp"
#include "mldr/mbr_code.hpp"

using namespace mldr;

namespace {

std::vector<felem> random_message(const MbrCode& code, std::mt19937_64& rng) {
  std::uniform_int_distribution<uint32_t> dist(0, code.field().q() - 1);
  std::vector<felem> m(code.params().block);
  for (felem& v : m) v = dist(rng);
  return m;
}

std::vector<std::vector<int>> subsets_of_size(int n, int r) {
  std::vector<std::vector<int>> out;
  for (int mask = 0; mask < (1 << n); ++mask) {
    if (__builtin_popcount(mask) != r) continue;
    std::vector<int> s;
    for (int i = 0; i < n; ++i)
      if (mask & (1 << i)) s.push_back(i + 1);
    out.push_back(s);
  }
  return out;
}

// Independent re-derivation of the message matrix from the documented fill
// order; used as the oracle for helper_symbol.
Matrix oracle_message_matrix(const Field& f, int k, int d, const std::vector<felem>& msg) {
  Matrix m(f, d, d);
  size_t pos = 0;
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j) m.at(i, j) = m.at(j, i) = msg[pos++];
  for (int i = 0; i < k; ++i)
    for (int j = k; j < d; ++j) m.at(i, j) = m.at(j, i) = msg[pos++];
  return m;
}

void check_code_roundtrips(const MbrCode& code, const std::vector<felem>& msg) {
  const MbrParams& p = code.params();
  std::vector<NodeShare> shares = code.encode(msg);
  for (const auto& subset : subsets_of_size(p.n, p.k)) {
    std::vector<NodeShare> picked;
    for (int idx : subset) picked.push_back(shares[idx - 1]);
    CHECK(code.reconstruct(picked) == msg);
  }
  for (int target = 1; target <= p.n; ++target) {
    for (const auto& helper_set : subsets_of_size(p.n, p.d)) {
      if (std::find(helper_set.begin(), helper_set.end(), target) != helper_set.end()) continue;
      std::vector<RepairSymbol> syms;
      for (int h : helper_set) syms.push_back(code.helper_symbol(shares[h - 1], target));
      NodeShare rebuilt = code.regenerate(target, syms);
      CHECK(rebuilt.node_index == target);
      CHECK(rebuilt.symbols == shares[target - 1].symbols);
    }
  }
}

}  // namespace

TEST_CASE("code parameters") {
  Field f(257);
  MbrCode c423 = MbrCode::make(4, 2, 3, f);
  CHECK(c423.params().alpha == 3);
  CHECK(c423.params().beta == 1);
  CHECK(c423.params().block == 5);
  MbrCode c433 = MbrCode::make(4, 3, 3, f);
  CHECK(c433.params().block == 6);
  CHECK(c433.params().alpha == 3);
  CHECK_THROWS_AS(MbrCode::make(4, 3, 2, f), InvalidParams);
  CHECK_THROWS_AS(MbrCode::make(4, 0, 2, f), InvalidParams);
  CHECK_THROWS_AS(MbrCode::make(4, 2, 4, f), InvalidParams);
  CHECK_THROWS_AS(MbrCode::make(6, 2, 3, Field(5)), InvalidParams);
  CHECK_NOTHROW(MbrCode::make(6, 2, 3, Field(7)));
}

TEST_CASE("normalized operating point matches the bandwidth constants") {
  Field f(257);
  for (int d = 1; d <= 8; ++d) {
    for (int k = 1; k <= d; ++k) {
      MbrCode code = MbrCode::make(d + 1, k, d, f);
      Rational block(code.params().block);
      CHECK(Rational(code.params().alpha) / block == Rational(d) * t_coeff(d, k));
      CHECK(Rational(code.params().beta) / block == t_coeff(d, k));
    }
  }
}

TEST_CASE("replication-degenerate (2,1,1) code") {
  Field f(257);
  MbrCode code = MbrCode::make(2, 1, 1, f);
  CHECK(code.params().block == 1);
  std::vector<felem> msg{42};
  std::vector<NodeShare> shares = code.encode(msg);
  // psi has a single all-ones column (p^0), so every node replicates m.
  CHECK(shares[0].symbols == std::vector<felem>{42});
  CHECK(shares[1].symbols == std::vector<felem>{42});
  CHECK(code.reconstruct({shares[0]}) == msg);
  CHECK(code.reconstruct({shares[1]}) == msg);
  check_code_roundtrips(code, msg);
}

TEST_CASE("encode basics for (4,2,3)") {
  Field f(257);
  MbrCode code = MbrCode::make(4, 2, 3, f);
  std::vector<felem> msg{1, 2, 3, 4, 5};
  std::vector<NodeShare> shares = code.encode(msg);
  CHECK(shares.size() == 4);
  for (const NodeShare& s : shares) CHECK(s.symbols.size() == 3);

  std::vector<felem> zero(5, 0);
  for (const NodeShare& s : code.encode(zero)) {
    CHECK(s.symbols == std::vector<felem>(3, 0));
  }

  // Linearity: componentwise sum of encodings encodes the sum.
  std::vector<felem> m2{10, 20, 30, 40, 50};
  std::vector<felem> sum(5);
  for (int i = 0; i < 5; ++i) sum[i] = f.add(msg[i], m2[i]);
  std::vector<NodeShare> s1 = code.encode(msg), s2 = code.encode(m2), s3 = code.encode(sum);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(s3[i].symbols[j] == f.add(s1[i].symbols[j], s2[i].symbols[j]));

  check_code_roundtrips(code, msg);
}

TEST_CASE("reconstruction works for the k = d edge case") {
  Field f(257);
  MbrCode code = MbrCode::make(4, 3, 3, f);
  std::mt19937_64 rng(21);
  check_code_roundtrips(code, random_message(code, rng));
}

TEST_CASE("helper symbol equals the bilinear form through the message matrix") {
  Field f(257);
  MbrCode code = MbrCode::make(5, 2, 3, f);
  std::mt19937_64 rng(22);
  std::vector<felem> msg = random_message(code, rng);
  std::vector<NodeShare> shares = code.encode(msg);
  Matrix m = oracle_message_matrix(f, 2, 3, msg);
  for (int j = 1; j <= 5; ++j) {
    for (int t = 1; t <= 5; ++t) {
      if (j == t) continue;
      // Oracle: psi_j' * M * psi_t via explicit matrix products.
      Matrix pj = code.psi().select_rows({size_t(j - 1)});
      Matrix pt = code.psi().select_rows({size_t(t - 1)});
      felem expect = pj.mul(m).mul(pt.transpose()).at(0, 0);
      CHECK(code.helper_symbol(shares[j - 1], t).symbol == expect);
    }
  }
  // Zero codeword sends zero repair data.
  std::vector<NodeShare> zs = code.encode(std::vector<felem>(5, 0));
  CHECK(code.helper_symbol(zs[0], 2).symbol == 0);
}

TEST_CASE("repair then reconstruct composes") {
  Field f(257);
  MbrCode code = MbrCode::make(4, 2, 3, f);
  std::mt19937_64 rng(23);
  std::vector<felem> msg = random_message(code, rng);
  std::vector<NodeShare> shares = code.encode(msg);
  std::vector<RepairSymbol> syms;
  for (int h : {2, 3, 4}) syms.push_back(code.helper_symbol(shares[h - 1], 1));
  NodeShare rebuilt = code.regenerate(1, syms);
  CHECK(code.reconstruct({rebuilt, shares[1]}) == msg);
}

TEST_CASE("random-message sweep over every shape with n <= 5") {
  Field f(257);
  std::mt19937_64 rng(24);
  for (int n = 2; n <= 5; ++n) {
    for (int d = 1; d <= n - 1; ++d) {
      for (int k = 1; k <= d; ++k) {
        MbrCode code = MbrCode::make(n, k, d, f);
        for (int t = 0; t < 10; ++t) check_code_roundtrips(code, random_message(code, rng));
      }
    }
  }
}

TEST_CASE("error handling") {
  Field f(257);
  MbrCode code = MbrCode::make(4, 2, 3, f);
  std::vector<felem> msg{1, 2, 3, 4, 5};
  std::vector<NodeShare> shares = code.encode(msg);

  CHECK_THROWS_AS(code.encode({1, 2, 3}), SizeMismatch);
  CHECK_THROWS_AS(code.reconstruct({shares[0]}), SizeMismatch);
  CHECK_THROWS_AS(code.reconstruct({shares[0], shares[0]}), DuplicateNode);
  CHECK_THROWS_AS(code.helper_symbol(shares[1], 2), SelfRepair);
  CHECK_THROWS_AS(code.helper_symbol(shares[1], 9), InvalidParams);

  auto sym = [&](int h, int t) { return code.helper_symbol(shares[h - 1], t); };
  CHECK_THROWS_AS(code.regenerate(1, {sym(2, 1), sym(3, 1)}), InvalidRepairSet);
  CHECK_THROWS_AS(code.regenerate(1, {sym(2, 1), sym(3, 1), sym(3, 1)}), InvalidRepairSet);
  CHECK_THROWS_AS(code.regenerate(1, {sym(2, 1), sym(3, 1), sym(4, 2)}), InvalidRepairSet);
  NodeShare stray = shares[0];
  RepairSymbol self{1, 1, 0};
  CHECK_THROWS_AS(code.regenerate(1, {sym(2, 1), sym(3, 1), self}), InvalidRepairSet);
}
