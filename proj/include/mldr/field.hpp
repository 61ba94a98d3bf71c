#pragma once

#include <cstdint>

#include "mldr/errors.hpp"

namespace mldr {

// A field element is a residue in [0, q). Kept as a plain integer so vectors
// of symbols stay contiguous; the Field object carries the modulus.
using felem = uint32_t;

// Prime field GF(q). All arithmetic runs through 64-bit intermediates, so any
// prime modulus below 2^32 works. Codes additionally require q > n so that n
// distinct nonzero evaluation points exist.
class Field {
 public:
  explicit Field(uint64_t q = 257);

  uint32_t q() const { return q_; }

  felem add(felem a, felem b) const { return static_cast<felem>((uint64_t(a) + b) % q_); }
  felem sub(felem a, felem b) const { return static_cast<felem>((uint64_t(a) + q_ - b) % q_); }
  felem mul(felem a, felem b) const { return static_cast<felem>(uint64_t(a) * b % q_); }
  felem neg(felem a) const { return a == 0 ? 0 : q_ - a; }

  // a^e by square-and-multiply.
  felem pow(felem a, uint64_t e) const;

  // Multiplicative inverse via Fermat (q prime). Throws DivisionByZero on 0.
  felem inv(felem a) const;

  // Reduce an arbitrary signed integer into [0, q).
  felem from_int(int64_t x) const;

  bool operator==(const Field&) const = default;

 private:
  uint32_t q_;
};

}  // namespace mldr
