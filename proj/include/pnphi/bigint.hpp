#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <limits>

#include "pnphi/errors.hpp"

namespace pnphi {

// Exact integers for matrix powers and lattice vectors. Entries of phi^k
// grow like rho(phi)^k and overflow 64-bit quickly; everything exposed by
// the library is exact, and fixed-width fast paths narrow only after a
// proven bound.
using BigInt = boost::multiprecision::cpp_int;

inline std::int64_t to_i64_checked(const BigInt& x) {
  if (x < std::numeric_limits<std::int64_t>::min() ||
      x > std::numeric_limits<std::int64_t>::max()) {
    throw OverflowError("integer does not fit in 64 bits: " + x.str());
  }
  return static_cast<std::int64_t>(x);
}

inline double to_double(const BigInt& x) { return x.convert_to<double>(); }

template <typename Int>
inline Int int_abs(const Int& x) {
  return x < 0 ? Int(-x) : x;
}

}  // namespace pnphi
