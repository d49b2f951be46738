#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

#include <Eigen/Core>
#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/eigen.hpp>

namespace cgw {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

/// Nonnegative real stored as its natural logarithm.  Supports the +,*,/
/// ring operations used by the probability engines, so the whole recursion
/// can run in log space when mass values underflow double.
class LogDouble {
 public:
  LogDouble() : log_(-std::numeric_limits<double>::infinity()) {}
  explicit LogDouble(double value)
      : log_(value > 0 ? std::log(value)
                       : -std::numeric_limits<double>::infinity()) {
    if (value < 0) throw std::domain_error("LogDouble: negative value");
  }
  static LogDouble from_log(double log_value) {
    LogDouble x;
    x.log_ = log_value;
    return x;
  }

  double log() const { return log_; }
  double value() const { return std::exp(log_); }
  bool is_zero() const { return std::isinf(log_) && log_ < 0; }

  LogDouble& operator*=(const LogDouble& o) {
    log_ += o.log_;
    return *this;
  }
  LogDouble& operator/=(const LogDouble& o) {
    log_ -= o.log_;
    return *this;
  }
  LogDouble& operator+=(const LogDouble& o) {
    // log(a+b) = max + log1p(exp(min-max))
    if (o.is_zero()) return *this;
    if (is_zero()) {
      log_ = o.log_;
      return *this;
    }
    double hi = log_, lo = o.log_;
    if (hi < lo) std::swap(hi, lo);
    log_ = hi + std::log1p(std::exp(lo - hi));
    return *this;
  }
  friend LogDouble operator*(LogDouble a, const LogDouble& b) { return a *= b; }
  friend LogDouble operator/(LogDouble a, const LogDouble& b) { return a /= b; }
  friend LogDouble operator+(LogDouble a, const LogDouble& b) { return a += b; }
  friend bool operator==(const LogDouble& a, const LogDouble& b) {
    return a.log_ == b.log_ || (a.is_zero() && b.is_zero());
  }
  friend bool operator!=(const LogDouble& a, const LogDouble& b) {
    return !(a == b);
  }
  friend bool operator<(const LogDouble& a, const LogDouble& b) {
    return a.log_ < b.log_;
  }
  friend bool operator>(const LogDouble& a, const LogDouble& b) { return b < a; }
  friend bool operator<=(const LogDouble& a, const LogDouble& b) {
    return !(b < a);
  }
  friend bool operator>=(const LogDouble& a, const LogDouble& b) {
    return !(a < b);
  }

 private:
  double log_;
};

inline double to_double(double x) { return x; }
inline double to_double(const LogDouble& x) { return x.value(); }
inline double to_double(const BigRational& x) { return x.convert_to<double>(); }

template <class Scalar>
inline bool is_zero(const Scalar& x) {
  return x == Scalar(0);
}
inline bool is_zero(const LogDouble& x) { return x.is_zero(); }

/// Scalar from an exact integer ratio; exact for BigRational.
template <class Scalar>
Scalar scalar_ratio(const BigInt& num, const BigInt& den);

template <>
inline double scalar_ratio<double>(const BigInt& num, const BigInt& den) {
  return BigRational(num, den).convert_to<double>();
}
template <>
inline BigRational scalar_ratio<BigRational>(const BigInt& num,
                                             const BigInt& den) {
  return BigRational(num, den);
}
template <>
inline LogDouble scalar_ratio<LogDouble>(const BigInt& num,
                                         const BigInt& den) {
  return LogDouble(BigRational(num, den).convert_to<double>());
}

/// Integer power by repeated multiplication (exact for rational scalars).
template <class Scalar>
Scalar scalar_pow(const Scalar& base, long long e) {
  Scalar out(1);
  Scalar b = base;
  long long n = e;
  while (n > 0) {
    if (n & 1) out = out * b;
    b = b * b;
    n >>= 1;
  }
  return out;
}

}  // namespace cgw

namespace Eigen {

/// Minimal traits so Matrix<cgw::LogDouble, ...> can be used for storage and
/// coefficient-wise access.  (Boost.Multiprecision ships its own NumTraits.)
template <>
struct NumTraits<cgw::LogDouble> {
  using Real = cgw::LogDouble;
  using NonInteger = cgw::LogDouble;
  using Nested = cgw::LogDouble;
  using Literal = cgw::LogDouble;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 0,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 3,
    MulCost = 1,
  };
  static inline Real epsilon() {
    return cgw::LogDouble(std::numeric_limits<double>::epsilon());
  }
  static inline Real dummy_precision() { return cgw::LogDouble(1e-12); }
  static inline int digits10() { return std::numeric_limits<double>::digits10; }
};

}  // namespace Eigen
