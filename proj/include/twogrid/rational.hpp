#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace twogrid {

using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline std::string to_string(const Rational& q) { return q.get_str(); }
inline double to_double(const Rational& q) { return q.get_d(); }

// Parses "p", "p/q" or a decimal literal such as "0.25".
Rational parse_rational(const std::string& s);

inline std::vector<double> to_double(const std::vector<Rational>& v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& q : v) out.push_back(q.get_d());
  return out;
}

}  // namespace twogrid
