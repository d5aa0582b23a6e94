// Exact rational scalar type used throughout the symbolic layers.
//
// Floating point appears only in the quadrature / solver layers; everything
// that feeds an algebraic identity check stays in mpq.

#ifndef QTILDE_RATIONAL_HPP
#define QTILDE_RATIONAL_HPP

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace qtilde {

using Rational = mpq_class;

inline Rational rat(long num, long den = 1) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline double to_double(const Rational& q) { return q.get_d(); }

inline Rational rat_pow(const Rational& base, int e) {
  Rational out = 1;
  for (int i = 0; i < e; ++i) out *= base;
  return out;
}

inline std::string to_string(const Rational& q) { return q.get_str(); }

}  // namespace qtilde

#endif
