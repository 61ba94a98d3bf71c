#include "mldr/field.hpp"

namespace mldr {

namespace {

bool is_prime(uint64_t q) {
  if (q < 2) return false;
  if (q % 2 == 0) return q == 2;
  for (uint64_t i = 3; i * i <= q; i += 2) {
    if (q % i == 0) return false;
  }
  return true;
}

}  // namespace

Field::Field(uint64_t q) {
  if (q >= (uint64_t(1) << 32) || !is_prime(q)) {
    throw InvalidParams("field modulus must be a prime below 2^32, got " + std::to_string(q));
  }
  q_ = static_cast<uint32_t>(q);
}

felem Field::pow(felem a, uint64_t e) const {
  uint64_t base = a % q_;
  uint64_t acc = 1;
  while (e > 0) {
    if (e & 1) acc = acc * base % q_;
    base = base * base % q_;
    e >>= 1;
  }
  return static_cast<felem>(acc);
}

felem Field::inv(felem a) const {
  if (a % q_ == 0) throw DivisionByZero("no inverse of 0 in GF(" + std::to_string(q_) + ")");
  return pow(a, q_ - 2);
}

felem Field::from_int(int64_t x) const {
  int64_t r = x % int64_t(q_);
  if (r < 0) r += q_;
  return static_cast<felem>(r);
}

}  // namespace mldr
