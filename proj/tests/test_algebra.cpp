#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "mldr/matrix.hpp"

using namespace mldr;

namespace {

// Brute-force inverse: scan all elements. Oracle for Field::inv.
felem slow_inv(const Field& f, felem a) {
  for (felem x = 1; x < f.q(); ++x)
    if (f.mul(a, x) == 1) return x;
  return 0;
}

Matrix random_matrix(const Field& f, size_t n, std::mt19937_64& rng) {
  Matrix m(f, n, n);
  std::uniform_int_distribution<uint32_t> dist(0, f.q() - 1);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) m.at(i, j) = dist(rng);
  return m;
}

Matrix random_nonsingular(const Field& f, size_t n, std::mt19937_64& rng) {
  for (;;) {
    Matrix m = random_matrix(f, n, rng);
    if (m.rank() == n) return m;
  }
}

}  // namespace

TEST_CASE("field construction validates the modulus") {
  CHECK_NOTHROW(Field(2));
  CHECK_NOTHROW(Field(257));
  CHECK_NOTHROW(Field(65537));
  CHECK_THROWS_AS(Field(1), InvalidParams);
  CHECK_THROWS_AS(Field(0), InvalidParams);
  CHECK_THROWS_AS(Field(10), InvalidParams);
  CHECK_THROWS_AS(Field(256), InvalidParams);
}

TEST_CASE("field ops match modular arithmetic on GF(257)") {
  Field f(257);
  CHECK(f.add(200, 100) == 43);
  CHECK(f.sub(0, 1) == 256);
  CHECK(f.neg(0) == 0);
  CHECK(f.neg(1) == 256);
  CHECK(f.inv(2) == 129);
  CHECK(f.mul(2, 129) == 1);
  CHECK(f.from_int(-1) == 256);
  CHECK(f.from_int(514) == 0);
  for (felem x = 0; x < 257; ++x) CHECK(f.mul(1, x) == x);
  CHECK_THROWS_AS(f.inv(0), DivisionByZero);
}

TEST_CASE("every nonzero element of GF(257) has the brute-force inverse") {
  Field f(257);
  for (felem a = 1; a < f.q(); ++a) {
    felem i = f.inv(a);
    CHECK(f.mul(a, i) == 1);
    CHECK(i == slow_inv(f, a));
  }
}

TEST_CASE("field axioms hold exhaustively for a small modulus") {
  Field f(13);
  for (felem a = 0; a < f.q(); ++a) {
    for (felem b = 0; b < f.q(); ++b) {
      CHECK(f.add(a, b) == f.add(b, a));
      CHECK(f.mul(a, b) == f.mul(b, a));
      CHECK(f.add(f.sub(a, b), b) == a);
      CHECK(f.sub(a, a) == 0);
      for (felem c = 0; c < f.q(); ++c) {
        CHECK(f.add(f.add(a, b), c) == f.add(a, f.add(b, c)));
        CHECK(f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c)));
        CHECK(f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c)));
      }
    }
  }
}

TEST_CASE("field axioms hold on sampled triples of GF(257)") {
  Field f(257);
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<uint32_t> dist(0, 256);
  for (int t = 0; t < 20000; ++t) {
    felem a = dist(rng), b = dist(rng), c = dist(rng);
    CHECK(f.add(f.add(a, b), c) == f.add(a, f.add(b, c)));
    CHECK(f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c)));
    CHECK(f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c)));
  }
}

TEST_CASE("vandermonde layout and preconditions") {
  Field f(257);
  Matrix v = Matrix::vandermonde(f, {1, 2, 3}, 2);
  CHECK(v.rows() == 3);
  CHECK(v.cols() == 2);
  CHECK(v.at(0, 0) == 1);
  CHECK(v.at(0, 1) == 1);
  CHECK(v.at(1, 0) == 1);
  CHECK(v.at(1, 1) == 2);
  CHECK(v.at(2, 0) == 1);
  CHECK(v.at(2, 1) == 3);
  CHECK_THROWS_AS(Matrix::vandermonde(f, {1, 1}, 1), InvalidPoints);
  CHECK_THROWS_AS(Matrix::vandermonde(f, {0, 1}, 1), InvalidPoints);
}

TEST_CASE("any square row-subset of a vandermonde matrix is invertible") {
  Field f(257);
  Matrix v = Matrix::vandermonde(f, {1, 2, 3, 4, 5, 6}, 3);
  // Exhaustive over all C(6,3) row triples: invert and multiply back.
  for (size_t a = 0; a < 6; ++a) {
    for (size_t b = a + 1; b < 6; ++b) {
      for (size_t c = b + 1; c < 6; ++c) {
        Matrix sub = v.select_rows({a, b, c});
        CHECK(sub.rank() == 3);
        Matrix inv = sub.invert();
        CHECK(inv.mul(sub) == Matrix::identity(f, 3));
      }
    }
  }
  // Any 2 of the first 3 rows of a width-2 slab are invertible too.
  Matrix v2 = Matrix::vandermonde(f, {1, 2, 3}, 2);
  for (size_t a = 0; a < 3; ++a)
    for (size_t b = a + 1; b < 3; ++b) CHECK(v2.select_rows({a, b}).rank() == 2);
}

TEST_CASE("vandermonde rank equals point count when points <= columns") {
  Field f(101);
  for (size_t k = 1; k <= 6; ++k) {
    std::vector<felem> pts;
    for (size_t i = 1; i <= k; ++i) pts.push_back(static_cast<felem>(2 * i));
    CHECK(Matrix::vandermonde(f, pts, k).rank() == k);
    CHECK(Matrix::vandermonde(f, pts, 8).rank() == k);
  }
}

TEST_CASE("solve and invert round-trip") {
  Field f(257);
  std::mt19937_64 rng(11);
  for (int t = 0; t < 25; ++t) {
    Matrix a = random_nonsingular(f, 4, rng);
    Matrix inv = a.invert();
    CHECK(a.mul(inv) == Matrix::identity(f, 4));
    CHECK(inv.invert() == a);
    Matrix b = random_matrix(f, 4, rng);
    Matrix x = a.solve(b);
    CHECK(a.mul(x) == b);
  }
  Matrix id = Matrix::identity(f, 3);
  Matrix any = random_matrix(f, 3, rng);
  CHECK(id.solve(any) == any);
}

TEST_CASE("matrix error cases") {
  Field f(257);
  Matrix zero(f, 2, 2);
  CHECK_THROWS_AS(zero.invert(), SingularMatrix);
  CHECK(zero.rank() == 0);
  Matrix a(f, 2, 3);
  Matrix b(f, 2, 3);
  CHECK_THROWS_AS(a.mul(b), SizeMismatch);
  CHECK_THROWS_AS(a.solve(b), SizeMismatch);
  Matrix rect(f, 3, 2);
  CHECK_NOTHROW(a.mul(rect));
}
