#pragma once

// Arbitrary-precision signed integers and exact rationals.
//
// State-sum normalisations divide coloring counts by #E^(number of
// vertices), which leaves 64-bit range long before diagrams get
// interesting, so counts are kept unbounded end to end.

#include <algorithm>
#include <cstdint>
#include <compare>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace xmk {

class BigInt {
 public:
  BigInt() = default;
  BigInt(std::int64_t v) {
    if (v < 0) {
      neg_ = true;
      // avoid overflow on INT64_MIN
      std::uint64_t m = static_cast<std::uint64_t>(-(v + 1)) + 1u;
      push_u64(m);
    } else {
      push_u64(static_cast<std::uint64_t>(v));
    }
  }

  static BigInt from_string(const std::string& s) {
    BigInt r;
    std::size_t i = 0;
    bool neg = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) neg = s[i++] == '-';
    if (i == s.size()) throw std::invalid_argument("BigInt: empty literal");
    for (; i < s.size(); ++i) {
      if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("BigInt: bad digit");
      r = r.mul_small(10);
      r = add_mag(r, BigInt(s[i] - '0'));
    }
    r.neg_ = neg && !r.is_zero();
    return r;
  }

  bool is_zero() const { return limbs_.empty(); }
  bool negative() const { return neg_; }

  friend BigInt operator+(const BigInt& a, const BigInt& b) {
    if (a.neg_ == b.neg_) {
      BigInt r = add_mag(a, b);
      r.neg_ = a.neg_ && !r.is_zero();
      return r;
    }
    int c = cmp_mag(a, b);
    if (c == 0) return BigInt();
    if (c > 0) {
      BigInt r = sub_mag(a, b);
      r.neg_ = a.neg_ && !r.is_zero();
      return r;
    }
    BigInt r = sub_mag(b, a);
    r.neg_ = b.neg_ && !r.is_zero();
    return r;
  }

  friend BigInt operator-(const BigInt& a) {
    BigInt r = a;
    if (!r.is_zero()) r.neg_ = !r.neg_;
    return r;
  }

  friend BigInt operator-(const BigInt& a, const BigInt& b) { return a + (-b); }

  friend BigInt operator*(const BigInt& a, const BigInt& b) {
    if (a.is_zero() || b.is_zero()) return BigInt();
    BigInt r;
    r.limbs_.assign(a.limbs_.size() + b.limbs_.size(), 0);
    for (std::size_t i = 0; i < a.limbs_.size(); ++i) {
      std::uint64_t carry = 0;
      for (std::size_t j = 0; j < b.limbs_.size(); ++j) {
        std::uint64_t cur = static_cast<std::uint64_t>(a.limbs_[i]) * b.limbs_[j] +
                            r.limbs_[i + j] + carry;
        r.limbs_[i + j] = static_cast<std::uint32_t>(cur);
        carry = cur >> 32;
      }
      r.limbs_[i + b.limbs_.size()] += static_cast<std::uint32_t>(carry);
    }
    r.trim();
    r.neg_ = (a.neg_ != b.neg_) && !r.is_zero();
    return r;
  }

  // Quotient and remainder truncated toward zero; remainder carries the
  // dividend's sign.
  static void divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r) {
    if (b.is_zero()) throw std::domain_error("BigInt: division by zero");
    int c = cmp_mag(a, b);
    if (c < 0) {
      q = BigInt();
      r = a;
      return;
    }
    if (b.limbs_.size() == 1) {
      std::uint32_t rem = 0;
      q = a;
      for (std::size_t i = q.limbs_.size(); i-- > 0;) {
        std::uint64_t cur = (static_cast<std::uint64_t>(rem) << 32) | q.limbs_[i];
        q.limbs_[i] = static_cast<std::uint32_t>(cur / b.limbs_[0]);
        rem = static_cast<std::uint32_t>(cur % b.limbs_[0]);
      }
      q.trim();
      r = BigInt();
      if (rem) r.limbs_.push_back(rem);
    } else {
      // schoolbook long division, binary within the top limb
      BigInt rem;
      q.limbs_.assign(a.limbs_.size(), 0);
      q.neg_ = false;
      for (std::size_t i = a.limbs_.size(); i-- > 0;) {
        for (int bit = 31; bit >= 0; --bit) {
          rem = rem.shl1();
          if ((a.limbs_[i] >> bit) & 1u) {
            if (rem.limbs_.empty()) rem.limbs_.push_back(1);
            else rem.limbs_[0] |= 1u;
          }
          if (cmp_mag(rem, b) >= 0) {
            rem = sub_mag(rem, b);
            q.limbs_[i] |= (1u << bit);
          }
        }
      }
      q.trim();
      rem.trim();
      r = rem;
    }
    q.neg_ = (a.neg_ != b.neg_) && !q.is_zero();
    r.neg_ = a.neg_ && !r.is_zero();
  }

  friend BigInt operator/(const BigInt& a, const BigInt& b) {
    BigInt q, r;
    divmod(a, b, q, r);
    return q;
  }
  friend BigInt operator%(const BigInt& a, const BigInt& b) {
    BigInt q, r;
    divmod(a, b, q, r);
    return r;
  }

  friend bool operator==(const BigInt& a, const BigInt& b) {
    return a.neg_ == b.neg_ && a.limbs_ == b.limbs_;
  }
  friend std::strong_ordering operator<=>(const BigInt& a, const BigInt& b) {
    if (a.neg_ != b.neg_) return a.neg_ ? std::strong_ordering::less : std::strong_ordering::greater;
    int c = cmp_mag(a, b);
    if (a.neg_) c = -c;
    if (c < 0) return std::strong_ordering::less;
    if (c > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  static BigInt gcd(BigInt a, BigInt b) {
    a.neg_ = b.neg_ = false;
    while (!b.is_zero()) {
      BigInt q, r;
      divmod(a, b, q, r);
      a = b;
      b = r;
    }
    return a;
  }

  static BigInt pow(const BigInt& base, std::uint64_t exp) {
    BigInt r(1), b = base;
    while (exp) {
      if (exp & 1) r = r * b;
      b = b * b;
      exp >>= 1;
    }
    return r;
  }

  std::string to_string() const {
    if (is_zero()) return "0";
    std::string digits;
    BigInt cur = *this;
    cur.neg_ = false;
    BigInt ten(10);
    while (!cur.is_zero()) {
      BigInt q, r;
      divmod(cur, ten, q, r);
      digits.push_back(static_cast<char>('0' + (r.limbs_.empty() ? 0 : r.limbs_[0])));
      cur = q;
    }
    if (neg_) digits.push_back('-');
    std::reverse(digits.begin(), digits.end());
    return digits;
  }

  friend std::ostream& operator<<(std::ostream& os, const BigInt& v) {
    return os << v.to_string();
  }

 private:
  // little-endian base-2^32 magnitude; empty means zero
  std::vector<std::uint32_t> limbs_;
  bool neg_ = false;

  void push_u64(std::uint64_t v) {
    if (v) limbs_.push_back(static_cast<std::uint32_t>(v));
    if (v >> 32) limbs_.push_back(static_cast<std::uint32_t>(v >> 32));
  }
  void trim() {
    while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
    if (limbs_.empty()) neg_ = false;
  }
  BigInt mul_small(std::uint32_t m) const {
    BigInt r;
    std::uint64_t carry = 0;
    for (std::uint32_t limb : limbs_) {
      std::uint64_t cur = static_cast<std::uint64_t>(limb) * m + carry;
      r.limbs_.push_back(static_cast<std::uint32_t>(cur));
      carry = cur >> 32;
    }
    if (carry) r.limbs_.push_back(static_cast<std::uint32_t>(carry));
    r.trim();
    return r;
  }
  BigInt shl1() const {
    BigInt r;
    std::uint32_t carry = 0;
    for (std::uint32_t limb : limbs_) {
      r.limbs_.push_back((limb << 1) | carry);
      carry = limb >> 31;
    }
    if (carry) r.limbs_.push_back(carry);
    return r;
  }
  static int cmp_mag(const BigInt& a, const BigInt& b) {
    if (a.limbs_.size() != b.limbs_.size())
      return a.limbs_.size() < b.limbs_.size() ? -1 : 1;
    for (std::size_t i = a.limbs_.size(); i-- > 0;) {
      if (a.limbs_[i] != b.limbs_[i]) return a.limbs_[i] < b.limbs_[i] ? -1 : 1;
    }
    return 0;
  }
  static BigInt add_mag(const BigInt& a, const BigInt& b) {
    BigInt r;
    const auto &x = a.limbs_, &y = b.limbs_;
    std::size_t n = std::max(x.size(), y.size());
    std::uint64_t carry = 0;
    for (std::size_t i = 0; i < n; ++i) {
      std::uint64_t cur = carry;
      if (i < x.size()) cur += x[i];
      if (i < y.size()) cur += y[i];
      r.limbs_.push_back(static_cast<std::uint32_t>(cur));
      carry = cur >> 32;
    }
    if (carry) r.limbs_.push_back(static_cast<std::uint32_t>(carry));
    return r;
  }
  // requires |a| >= |b|
  static BigInt sub_mag(const BigInt& a, const BigInt& b) {
    BigInt r;
    std::int64_t borrow = 0;
    for (std::size_t i = 0; i < a.limbs_.size(); ++i) {
      std::int64_t cur = static_cast<std::int64_t>(a.limbs_[i]) - borrow -
                         (i < b.limbs_.size() ? b.limbs_[i] : 0);
      borrow = cur < 0;
      if (cur < 0) cur += (std::int64_t(1) << 32);
      r.limbs_.push_back(static_cast<std::uint32_t>(cur));
    }
    r.trim();
    return r;
  }
};

/// Exact rational, always stored reduced with a positive denominator.
class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  Rational(std::int64_t v) : num_(v), den_(1) {}
  Rational(BigInt num, BigInt den = BigInt(1)) : num_(std::move(num)), den_(std::move(den)) {
    normalize();
  }

  const BigInt& num() const { return num_; }
  const BigInt& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_integer() const { return den_ == BigInt(1); }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero()) throw std::domain_error("Rational: division by zero");
    return Rational(a.num_ * b.den_, a.den_ * b.num_);
  }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    return (a.num_ * b.den_) <=> (b.num_ * a.den_);
  }

  /// Prints "p" for integers and "p/q" otherwise.
  std::string to_string() const {
    if (is_integer()) return num_.to_string();
    return num_.to_string() + "/" + den_.to_string();
  }
  friend std::ostream& operator<<(std::ostream& os, const Rational& v) {
    return os << v.to_string();
  }

 private:
  BigInt num_, den_;

  void normalize() {
    if (den_.is_zero()) throw std::domain_error("Rational: zero denominator");
    if (den_.negative()) {
      den_ = -den_;
      num_ = -num_;
    }
    if (num_.is_zero()) {
      den_ = BigInt(1);
      return;
    }
    BigInt g = BigInt::gcd(num_, den_);
    if (!(g == BigInt(1))) {
      num_ = num_ / g;
      den_ = den_ / g;
    }
  }
};

}  // namespace xmk
