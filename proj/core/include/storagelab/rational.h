#ifndef STORAGELAB_RATIONAL_H_
#define STORAGELAB_RATIONAL_H_

#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace storagelab {

// Exact arithmetic for similarity scores and their means.
using Rational = boost::multiprecision::cpp_rational;

inline Rational MakeRational(int64_t numerator, int64_t denominator) {
  return Rational(numerator, denominator);
}

inline double ToDouble(const Rational& value) {
  return value.convert_to<double>();
}

// "n/d", or "n" for integers.
inline std::string RationalToString(const Rational& value) {
  return value.str();
}

}  // namespace storagelab

#endif  // STORAGELAB_RATIONAL_H_
