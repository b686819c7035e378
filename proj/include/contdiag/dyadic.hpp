#ifndef CONTDIAG_DYADIC_HPP
#define CONTDIAG_DYADIC_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <compare>
#include <cstdint>
#include <string>

#include "contdiag/errors.hpp"

namespace contdiag {

using BigInt = boost::multiprecision::cpp_int;

/// Global bound on dyadic exponents.  Exceeding it raises PrecisionError;
/// nothing in the library rounds silently.
inline unsigned& dyadic_exponent_cap() {
  static unsigned cap = 1u << 16;
  return cap;
}

/// Exact binary rational m / 2^e.
///
/// Canonical form: the mantissa is odd, or the exponent is zero.  Every
/// constructor and operation re-normalizes, so values compare by fields.
/// Truth values additionally satisfy 0 <= value <= 1; operations that
/// require this check it explicitly.
class Dyadic {
 public:
  Dyadic() : man_(0), exp_(0) {}
  Dyadic(long long integer) : man_(integer), exp_(0) {}  // NOLINT(google-explicit-constructor)

  /// m / 2^e, normalized.
  static Dyadic from_mantissa_exponent(BigInt m, unsigned e) {
    Dyadic d;
    d.man_ = std::move(m);
    d.exp_ = e;
    d.normalize();
    return d;
  }

  /// Rejects non-canonical representations instead of normalizing them.
  static Dyadic from_canonical(BigInt m, unsigned e) {
    if (e > 0 && (m == 0 || (m & 1) == 0))
      throw DomainError("non-canonical dyadic representation");
    check_cap(e);
    Dyadic d;
    d.man_ = std::move(m);
    d.exp_ = e;
    return d;
  }

  /// num / den where den must be a power of two.
  static Dyadic from_fraction(BigInt num, const BigInt& den) {
    if (den <= 0) throw DomainError("dyadic denominator must be positive");
    BigInt d = den;
    unsigned e = 0;
    while ((d & 1) == 0) {
      d >>= 1;
      ++e;
    }
    if (d != 1) throw DomainError("dyadic denominator must be a power of two");
    return from_mantissa_exponent(std::move(num), e);
  }

  static Dyadic pow2(int e) {  // 2^e, e may be negative
    if (e >= 0) return from_mantissa_exponent(BigInt(1) << e, 0);
    return from_mantissa_exponent(1, static_cast<unsigned>(-e));
  }

  const BigInt& mantissa() const { return man_; }
  unsigned exponent() const { return exp_; }

  bool is_zero() const { return man_ == 0; }
  bool in_unit_interval() const { return man_ >= 0 && man_ <= (BigInt(1) << exp_); }

  friend Dyadic operator+(const Dyadic& a, const Dyadic& b) {
    unsigned e = std::max(a.exp_, b.exp_);
    return from_mantissa_exponent(
        (a.man_ << (e - a.exp_)) + (b.man_ << (e - b.exp_)), e);
  }
  friend Dyadic operator-(const Dyadic& a, const Dyadic& b) {
    unsigned e = std::max(a.exp_, b.exp_);
    return from_mantissa_exponent(
        (a.man_ << (e - a.exp_)) - (b.man_ << (e - b.exp_)), e);
  }
  friend Dyadic operator*(const Dyadic& a, const Dyadic& b) {
    return from_mantissa_exponent(a.man_ * b.man_, a.exp_ + b.exp_);
  }

  friend bool operator==(const Dyadic& a, const Dyadic& b) {
    return a.exp_ == b.exp_ && a.man_ == b.man_;
  }
  friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
    unsigned e = std::max(a.exp_, b.exp_);
    BigInt l = a.man_ << (e - a.exp_);
    BigInt r = b.man_ << (e - b.exp_);
    if (l < r) return std::strong_ordering::less;
    if (l > r) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  /// "m/d" with d = 2^e written out, or plain "m" when e = 0.
  std::string to_plain_fraction_string() const {
    if (exp_ == 0) return man_.str();
    return man_.str() + "/" + (BigInt(1) << exp_).str();
  }

  /// "m/2^e" (or plain "m" when e = 0).
  std::string to_fraction_string() const {
    if (exp_ == 0) return man_.str();
    return man_.str() + "/2^" + std::to_string(exp_);
  }

  /// Exact decimal rendering (dyadics always terminate in base 10).
  std::string to_decimal_string() const {
    if (exp_ == 0) return man_.str();
    BigInt m = man_;
    bool neg = m < 0;
    if (neg) m = -m;
    // m / 2^e = m * 5^e / 10^e
    BigInt scaled = m;
    for (unsigned i = 0; i < exp_; ++i) scaled *= 5;
    std::string digits = scaled.str();
    if (digits.size() <= exp_)
      digits.insert(0, exp_ + 1 - digits.size(), '0');
    digits.insert(digits.size() - exp_, ".");
    return (neg ? "-" : "") + digits;
  }

  double to_double() const {  // diagnostics only, never on the trusted path
    return static_cast<double>(man_) / std::pow(2.0, exp_);
  }

 private:
  void normalize() {
    while (exp_ > 0 && (man_ & 1) == 0 && man_ != 0) {
      man_ >>= 1;
      --exp_;
    }
    if (man_ == 0) exp_ = 0;
    check_cap(exp_);
  }
  static void check_cap(unsigned e) {
    if (e > dyadic_exponent_cap())
      throw PrecisionError("dyadic exponent " + std::to_string(e) +
                           " exceeds cap " +
                           std::to_string(dyadic_exponent_cap()));
  }

  BigInt man_;
  unsigned exp_;
};

namespace detail {
inline void require_truth_value(const Dyadic& a, const char* op) {
  if (!a.in_unit_interval())
    throw DomainError(std::string(op) + ": operand outside [0,1]");
}
}  // namespace detail

inline Dyadic d_add(const Dyadic& a, const Dyadic& b) { return a + b; }

inline Dyadic d_half(const Dyadic& a) {
  return Dyadic::from_mantissa_exponent(a.mantissa(), a.exponent() + 1);
}

/// 1 - a, the continuous-logic negation.
inline Dyadic d_neg(const Dyadic& a) {
  detail::require_truth_value(a, "d_neg");
  return Dyadic(1) - a;
}

/// a -. b = max(a - b, 0), truncated subtraction.
inline Dyadic d_tsub(const Dyadic& a, const Dyadic& b) {
  if (a <= b) return Dyadic(0);
  return a - b;
}

inline Dyadic d_min(const Dyadic& a, const Dyadic& b) { return a < b ? a : b; }
inline Dyadic d_max(const Dyadic& a, const Dyadic& b) { return a > b ? a : b; }

/// 2^-(K+1), the tail of the geometric series past position K.
inline Dyadic tail_weight(unsigned K) { return Dyadic::pow2(-static_cast<int>(K + 1)); }

/// Parse "m", "m/d" (d a power of two) or "m/2^e".
inline Dyadic parse_dyadic(const std::string& text) {
  auto slash = text.find('/');
  try {
    if (slash == std::string::npos)
      return Dyadic::from_mantissa_exponent(BigInt(text), 0);
    BigInt num(text.substr(0, slash));
    std::string den = text.substr(slash + 1);
    auto caret = den.find('^');
    if (caret != std::string::npos) {
      if (den.substr(0, caret) != "2")
        throw ParseError("dyadic denominator base must be 2");
      unsigned e = static_cast<unsigned>(std::stoul(den.substr(caret + 1)));
      return Dyadic::from_mantissa_exponent(num, e);
    }
    return Dyadic::from_fraction(num, BigInt(den));
  } catch (const std::exception& e) {
    throw ParseError(std::string("bad dyadic literal '") + text + "': " + e.what());
  }
}

/// Closed interval with dyadic endpoints; encloses a truth value.
class Enclosure {
 public:
  Enclosure(Dyadic lo, Dyadic hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
    if (lo_ > hi_) throw DomainError("enclosure with lo > hi");
  }
  explicit Enclosure(const Dyadic& point) : lo_(point), hi_(point) {}

  const Dyadic& lo() const { return lo_; }
  const Dyadic& hi() const { return hi_; }
  Dyadic width() const { return hi_ - lo_; }
  bool is_point() const { return lo_ == hi_; }
  bool contains(const Dyadic& v) const { return lo_ <= v && v <= hi_; }
  bool contains(const Enclosure& e) const { return lo_ <= e.lo_ && e.hi_ <= hi_; }

  friend bool operator==(const Enclosure& a, const Enclosure& b) {
    return a.lo_ == b.lo_ && a.hi_ == b.hi_;
  }

 private:
  Dyadic lo_, hi_;
};

inline Enclosure enclose(Dyadic lo, Dyadic hi) {
  return Enclosure(std::move(lo), std::move(hi));
}

inline Enclosure intersect(const Enclosure& a, const Enclosure& b) {
  Dyadic lo = d_max(a.lo(), b.lo());
  Dyadic hi = d_min(a.hi(), b.hi());
  if (lo > hi)
    throw InconsistencyError("empty enclosure intersection: [" +
                             a.lo().to_fraction_string() + "," + a.hi().to_fraction_string() +
                             "] vs [" + b.lo().to_fraction_string() + "," +
                             b.hi().to_fraction_string() + "]");
  return Enclosure(std::move(lo), std::move(hi));
}

// Interval arithmetic for the three primitive connectives.  All are
// monotone, so endpoint propagation is exact.
inline Enclosure e_neg(const Enclosure& a) {
  return Enclosure(d_neg(a.hi()), d_neg(a.lo()));
}
inline Enclosure e_half(const Enclosure& a) {
  return Enclosure(d_half(a.lo()), d_half(a.hi()));
}
inline Enclosure e_tsub(const Enclosure& a, const Enclosure& b) {
  return Enclosure(d_tsub(a.lo(), b.hi()), d_tsub(a.hi(), b.lo()));
}

}  // namespace contdiag

#endif
