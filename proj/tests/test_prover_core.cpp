#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "mldr/prover/prove.hpp"

using namespace mldr;
using namespace mldr::prover;

TEST_CASE("ground namespace layout") {
  GroundSpace g1(1), g2(2), g3(3);
  CHECK(g1.var_count() == 5);
  CHECK(g2.var_count() == 11);
  CHECK(g3.var_count() == 19);

  CHECK(g2.index_of("W1") == g2.w_index(1));
  CHECK(g2.index_of("S3_1") == g2.s_index(3, 1));
  CHECK(g2.index_of("M2") == g2.m_index(2));
  CHECK_THROWS_AS(g2.index_of("S1_1"), UnknownName);
  CHECK_THROWS_AS(g2.index_of("W9"), UnknownName);
  CHECK_THROWS_AS((void)g2.s_index(2, 2), UnknownName);
  CHECK_THROWS_AS(GroundSpace(0), InvalidParams);
  CHECK_THROWS_AS(GroundSpace(7), ModelTooLarge);

  // l_k gathers repair data from higher-indexed nodes only
  CHECK(g2.l(1) == (g2.S(2, 1) | g2.S(3, 1)));
  CHECK(g2.l(2) == g2.S(3, 2));
  CHECK(g2.l_prefix(2) == (g2.l(1) | g2.l(2)));
  CHECK(g2.lp(2) == (g2.S(1, 2) | g2.l(2)));
  CHECK(g3.lp_range(2, 3) == (g3.lp(2) | g3.lp(3)));
  CHECK(g3.lp_range(3, 2) == 0);
  CHECK(g2.W_prefix(2) == (g2.W(1) | g2.W(2)));
  CHECK(g2.M_prefix(2) == (g2.M(1) | g2.M(2)));
  CHECK_THROWS_AS(g2.l(3), InvalidParams);
  CHECK_THROWS_AS(g2.lp(1), InvalidParams);
}

TEST_CASE("closure reflects the dependency structure") {
  GroundSpace g(2);
  // all repair data converging on node 1 rebuilds its share
  VarSet c1 = g.closure(g.l(1));
  CHECK((c1 & g.W(1)) != 0);
  // which then regenerates everything node 1 ever sends
  CHECK((c1 & g.S(1, 2)) != 0);
  CHECK((c1 & g.S(1, 3)) != 0);
  // one share decodes the first message
  CHECK((g.closure(g.W(2)) & g.M(1)) != 0);
  CHECK((g.closure(g.W(2)) & g.M(2)) == 0);
  CHECK((g.closure(g.W(1) | g.W(3)) & g.M(2)) != 0);
  // successive repair unions unlock successive shares
  for (int d : {2, 3}) {
    GroundSpace g2(d);
    for (int k = 1; k <= d; ++k) {
      VarSet cl = g2.closure(g2.l_prefix(k));
      CHECK((cl & g2.W_prefix(k)) == g2.W_prefix(k));
      CHECK((cl & g2.M_prefix(k)) == g2.M_prefix(k));
    }
  }
}

TEST_CASE("canonicalization is constant on orbits") {
  GroundSpace g(2);
  const VarSet full = (VarSet(1) << g.var_count()) - 1;
  for (VarSet s = 1; s <= full; ++s) {
    VarSet cs = g.canonical(s), os = g.orbit_min(s);
    CHECK(g.closure(g.closure(s)) == g.closure(s));
    for (const auto& vp : g.var_perms()) {
      VarSet img = apply_var_perm(vp, s);
      CHECK(__builtin_popcountll(img) == __builtin_popcountll(s));
      CHECK(g.canonical(img) == cs);
      CHECK(g.orbit_min(img) == os);
    }
  }
  // the group action commutes with the closure
  std::mt19937_64 rng(7);
  for (int t = 0; t < 200; ++t) {
    VarSet s = rng() & full;
    if (!s) continue;
    for (const auto& vp : g.generator_var_perms())
      CHECK(g.closure(apply_var_perm(vp, s)) ==
            apply_var_perm(vp, g.closure(s)));
  }
}

TEST_CASE("elemental row counts") {
  CHECK(elemental_count(1) == 1);
  CHECK(elemental_count(2) == 3);
  CHECK(elemental_count(3) == 9);
  CHECK(elemental_count(4) == 28);
  CHECK(elemental_count(11) == 28171);
  CHECK_THROWS_AS(elemental_count(0), InvalidParams);

  GroundModel g2 = GroundModel::generic({"X", "Y"});
  LinearQuery q;
  q.H(Rational(1), g2.resolve("X"));
  LpProblem lp = build_lp(g2, q);
  size_t elemental = 0;
  for (const auto& row : lp.rows)
    if (!row.equality && row.label != "normalization") ++elemental;
  CHECK(elemental == 3);
}

TEST_CASE("model construction guards") {
  CHECK_THROWS_AS(GroundModel::standard(3), ModelTooLarge);
  GroundModel big = GroundModel::standard(3, 19);  // namespace fits, LP must not
  LinearQuery q;
  q.aux(Rational(1), kAuxBeta);
  CHECK_THROWS_AS(build_lp(big, q), ModelTooLarge);
  CHECK_THROWS_AS(GroundModel::generic({}), InvalidParams);
  CHECK_THROWS_AS(GroundModel::generic({"A", "A"}), InvalidParams);

  GroundSpace g(1);
  CHECK_THROWS_AS(GroundModel::grouped(g, {}, {}),
                  InvalidGrouping);
  CHECK_THROWS_AS(GroundModel::grouped(g, {{"a", {}}}, {}), InvalidGrouping);
  CHECK_THROWS_AS(GroundModel::grouped(g, {{"a", {"W1"}}, {"b", {"W1"}}}, {}),
                  InvalidGrouping);
  GroupedConstraints bad;
  bad.fds.push_back({{"a"}, {"zzz"}});
  CHECK_THROWS_AS(GroundModel::grouped(g, {{"a", {"W1"}}}, bad), UnknownName);
}

TEST_CASE("random distributions satisfy every generated row") {
  GroundModel model = GroundModel::generic({"X", "Y", "Z"});
  LinearQuery q;
  q.H(Rational(1), model.resolve("X"));
  LpProblem lp = build_lp(model, q);

  std::mt19937_64 rng(20240817);
  std::uniform_real_distribution<double> unif(0.01, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    double p[8], total = 0;
    for (double& v : p) total += (v = unif(rng));
    for (double& v : p) v /= total;
    // joint entropies of (X,Y,Z) for every nonempty subset mask
    double h[8] = {0};
    for (int mask = 1; mask < 8; ++mask) {
      double acc = 0;
      for (int fixed = 0; fixed < 8; ++fixed) {
        if (fixed & ~mask) continue;
        double marg = 0;
        for (int outcome = 0; outcome < 8; ++outcome)
          if ((outcome & mask) == fixed) marg += p[outcome];
        if (marg > 0) acc -= marg * std::log2(marg);
      }
      h[mask] = acc;
    }
    // columns are entropy coordinates; recover each mask from its name
    std::vector<int> mask_of(lp.n_cols, 0);
    for (int col = 0; col < lp.n_cols; ++col)
      for (int mask = 1; mask < 8; ++mask)
        if (lp.col_names[col] == "h" + model.set_name(mask)) mask_of[col] = mask;
    for (int r = 0; r < static_cast<int>(lp.rows.size()); ++r) {
      if (r == lp.normalization_row) continue;
      double v = 0;
      for (const auto& [col, coeff] : lp.rows[r].terms)
        v += coeff.to_double() * h[mask_of[col]];
      if (lp.rows[r].equality)
        CHECK(std::fabs(v) < 1e-9);
      else
        CHECK(v > -1e-9);
    }
  }
}

TEST_CASE("submodularity is proven with a verifiable certificate") {
  GroundModel model = GroundModel::generic({"X", "Y"});
  LinearQuery q;
  q.name = "submodularity";
  q.I(Rational(1), model.resolve("X"), model.resolve("Y"));
  Verdict v = prove(model, q);
  CHECK(v.proven());
  CHECK(v.exact);
  CHECK(v.lp_value == Rational(0));
  REQUIRE(!v.certificate.multipliers.empty());
  verify_certificate(*v.problem, v.certificate);

  // tampering with any multiplier must be caught
  Certificate bad = v.certificate;
  bad.multipliers[0].second += Rational(1, 7);
  CHECK_THROWS_AS(verify_certificate(*v.problem, bad), CertificateInvalid);
  Certificate negated = v.certificate;
  for (auto& [row, mult] : negated.multipliers) mult = -mult;
  CHECK_THROWS_AS(verify_certificate(*v.problem, negated), CertificateInvalid);
}

TEST_CASE("conditional information forms are proven") {
  GroundModel model = GroundModel::generic({"A", "B", "C"});
  VarSet A = model.resolve("A"), B = model.resolve("B"), C = model.resolve("C");
  {
    LinearQuery q;
    q.I(Rational(1), A, B, C);
    Verdict v = prove(model, q);
    CHECK(v.proven());
    CHECK(v.exact);
  }
  {
    // dropping conditioning from an entropy only grows it
    LinearQuery q;
    q.H(Rational(1), A, C).H(Rational(-1), A, B | C);
    Verdict v = prove(model, q);
    CHECK(v.proven());
  }
  {
    // the reverse is not implied
    LinearQuery q;
    q.H(Rational(1), A, B | C).H(Rational(-1), A, C);
    Verdict v = prove(model, q);
    CHECK(!v.proven());
    CHECK(v.lp_value_float < 0);
  }
}

TEST_CASE("the non-Shannon control query is rejected") {
  GroundModel model = GroundModel::generic({"A", "B", "C", "D"});
  VarSet A = model.resolve("A"), B = model.resolve("B"), C = model.resolve("C"),
         D = model.resolve("D");
  LinearQuery q;
  q.name = "four-variable control inequality";
  q.I(Rational(1), A, B);
  q.I(Rational(1), A, C | D);
  q.I(Rational(3), C, D, A);
  q.I(Rational(1), C, D, B);
  q.I(Rational(-2), C, D);
  Verdict v = prove(model, q);
  CHECK(!v.proven());
  CHECK(v.lp_value_float < -1e-9);
  // the model is small, so the witness must come back exact
  CHECK(v.exact);
  CHECK(v.lp_value.sign() < 0);
  REQUIRE(!v.witness.empty());

  // the witness satisfies every row of the problem: it is a genuine
  // polymatroid point scoring the query strictly below zero
  std::map<std::string, Rational> w(v.witness.begin(), v.witness.end());
  auto value_of = [&](int col) {
    auto it = w.find(v.problem->col_names[col]);
    return it == w.end() ? Rational(0) : it->second;
  };
  for (const LpRow& row : v.problem->rows) {
    Rational acc(0);
    for (const auto& [col, coeff] : row.terms) acc += coeff * value_of(col);
    if (row.equality)
      CHECK(acc == row.rhs);
    else
      CHECK(acc >= row.rhs);
  }
}

TEST_CASE("aux columns enter queries and rows") {
  GroundModel model = GroundModel::standard(1);
  {
    // beta caps every repair transfer
    LinearQuery q;
    q.aux(Rational(1), kAuxBeta);
    q.H(Rational(-1), model.resolve("S2_1"));
    Verdict v = prove(model, q);
    CHECK(v.proven());
    CHECK(v.exact);
  }
  {
    // alpha caps a share, and the share caps the first message
    LinearQuery q;
    q.aux(Rational(1), kAuxAlpha);
    q.H(Rational(-1), model.resolve("M1"));
    Verdict v = prove(model, q);
    CHECK(v.proven());
  }
  {
    // a message cannot dominate the share that stores it
    LinearQuery q;
    q.H(Rational(1), model.resolve("M1"));
    q.H(Rational(-1), model.resolve("W1"));
    Verdict v = prove(model, q);
    CHECK(!v.proven());
    CHECK(v.lp_value_float < 0);
  }
  CHECK(GroundModel::aux_of("alpha") == kAuxAlpha);
  CHECK(GroundModel::aux_of("beta") == kAuxBeta);
  CHECK(GroundModel::aux_of("B2") == aux_message(2));
  CHECK(!GroundModel::aux_of("Bx").has_value());
  CHECK(!GroundModel::aux_of("gamma").has_value());
}

TEST_CASE("singleton grouping reproduces the standard model") {
  GroundSpace space(1);
  std::vector<GroupSpec> groups;
  for (const auto& v : space.vars()) groups.push_back({v.name, {v.name}});
  GroupedConstraints gc;
  gc.fds.push_back({{"W1"}, {"S1_2"}});
  gc.fds.push_back({{"W2"}, {"S2_1"}});
  gc.fds.push_back({{"S2_1"}, {"W1"}});
  gc.fds.push_back({{"S1_2"}, {"W2"}});
  gc.fds.push_back({{"W1"}, {"M1"}});
  gc.fds.push_back({{"W2"}, {"M1"}});
  gc.independent.push_back("M1");
  gc.message_size.push_back({"M1", 1});
  gc.alpha_bounded = {"W1", "W2"};
  gc.beta_bounded = {"S1_2", "S2_1"};
  GroundModel grouped = GroundModel::grouped(space, groups, gc);
  GroundModel standard = GroundModel::standard(1);
  CHECK(grouped.var_count() == standard.var_count());

  auto both = [&](const LinearQuery& qg, const LinearQuery& qs) {
    ProveOptions opt;
    Verdict a = prove(grouped, qg, opt);
    opt.symmetry = SymmetryMode::None;  // grouped models carry no symmetry
    Verdict b = prove(standard, qs, opt);
    CHECK(a.proven() == b.proven());
    if (!a.proven())
      CHECK(a.lp_value_float == doctest::Approx(b.lp_value_float).epsilon(1e-6));
  };
  for (const char* name : {"S2_1", "M1", "W2"}) {
    LinearQuery qg, qs;
    qg.aux(Rational(1), kAuxBeta).H(Rational(-1), grouped.resolve(name));
    qs.aux(Rational(1), kAuxBeta).H(Rational(-1), standard.resolve(name));
    both(qg, qs);
  }
  {
    LinearQuery qg, qs;
    qg.H(Rational(1), grouped.resolve("W1")).H(Rational(-1), grouped.resolve("S1_2"));
    qs.H(Rational(1), standard.resolve("W1")).H(Rational(-1), standard.resolve("S1_2"));
    both(qg, qs);
  }
}

TEST_CASE("composite names resolve on the standard model") {
  GroundModel model = GroundModel::standard(2);
  const GroundSpace& g = *model.space();
  CHECK(model.resolve("l1") == g.l(1));
  CHECK(model.resolve("lc2") == g.l_prefix(2));
  CHECK(model.resolve("lp2") == g.lp(2));
  CHECK(model.resolve("Wc2") == g.W_prefix(2));
  CHECK(model.resolve("Mc2") == g.M_prefix(2));
  CHECK_THROWS_AS(model.resolve("l9"), UnknownName);
  CHECK_THROWS_AS(model.resolve("q1"), UnknownName);
  model.define_composite("front", g.W(1) | g.S(2, 1));
  CHECK(model.resolve("front") == (g.W(1) | g.S(2, 1)));
  CHECK_THROWS_AS(model.define_composite("bad", 0), InvalidParams);
}

TEST_CASE("symmetry modes agree on random queries") {
  std::mt19937_64 rng(424242);
  int proven = 0, rejected = 0;
  // restricting to symmetric codes is what makes the orbit quotient exact,
  // so the two modes must return the same verdict on every query
  auto cross_check = [&](int d, int trials) {
    GroundModel model = GroundModel::standard(d);
    const GroundSpace& g = *model.space();
    const VarSet full = (VarSet(1) << g.var_count()) - 1;
    BuildOptions ref_build, orb_build;
    ref_build.symmetry = SymmetryMode::Equalities;
    orb_build.symmetry = SymmetryMode::OrbitQuotient;
    LinearQuery seed;
    seed.H(Rational(1), g.W(1));
    LpProblem ref_lp = build_lp(model, seed, ref_build);
    LpProblem orb_lp = build_lp(model, seed, orb_build);
    ProveOptions popt;
    popt.want_certificate = false;
    auto random_set = [&] {
      VarSet s = 0;
      while (!s) s = rng() & full;
      return s;
    };
    for (int trial = 0; trial < trials; ++trial) {
      LinearQuery q;
      q.name = "random query " + std::to_string(trial);
      int terms = 1 + static_cast<int>(rng() % 3);
      for (int t = 0; t < terms; ++t) {
        Rational coeff(static_cast<long>(rng() % 5) - 2,
                       1 + static_cast<long>(rng() % 3));
        if (coeff.is_zero()) coeff = Rational(1);
        VarSet of = random_set();
        VarSet given = (rng() % 2) ? random_set() : 0;
        q.H(coeff, of, given);
      }
      set_objective(ref_lp, model, q);
      set_objective(orb_lp, model, q);
      Verdict a = prove(ref_lp, popt);
      Verdict b = prove(orb_lp, popt);
      CHECK(a.proven() == b.proven());
      (a.proven() ? proven : rejected) += 1;
    }
  };
  cross_check(1, 40);
  cross_check(2, 10);
  // the sample must exercise both outcomes to mean anything
  CHECK(proven > 0);
  CHECK(rejected > 0);
}

TEST_CASE("orbit quotient shrinks the column space") {
  GroundModel model = GroundModel::standard(2);
  LinearQuery q = repair_bound_query(2);
  BuildOptions ref, orb;
  ref.symmetry = SymmetryMode::Equalities;
  orb.symmetry = SymmetryMode::OrbitQuotient;
  LpProblem a = build_lp(model, q, ref);
  LpProblem b = build_lp(model, q, orb);
  CHECK(a.n_cols == 2047 + 4);
  CHECK(b.n_cols < a.n_cols / 2);
  CHECK(b.rows.size() < a.rows.size());
  // quotient mode is meaningless without a symmetric model
  GroundModel gen = GroundModel::generic({"X", "Y"});
  LinearQuery qs;
  qs.H(Rational(1), gen.resolve("X"));
  CHECK_THROWS_AS(build_lp(gen, qs, orb), InvalidParams);
}
