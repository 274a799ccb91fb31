#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace arel {

// Exact rational arithmetic on 64-bit numerator/denominator. Costs in this
// project are small sums and products of model constants and array lengths,
// so 64 bits is plenty; overflow throws rather than wrapping.
class Rat {
 public:
  Rat() : num_(0), den_(1) {}
  Rat(long long n) : num_(n), den_(1) {}
  Rat(long long n, long long d) : num_(n), den_(d) { normalize(); }

  static Rat fromString(const std::string& s) {
    auto slash = s.find('/');
    if (slash != std::string::npos)
      return Rat(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
    auto dot = s.find('.');
    if (dot == std::string::npos) return Rat(std::stoll(s));
    std::string intp = s.substr(0, dot), frac = s.substr(dot + 1);
    long long den = 1;
    for (size_t i = 0; i < frac.size(); ++i) den = mulChecked(den, 10);
    bool neg = !intp.empty() && intp[0] == '-';
    long long whole = intp.empty() || intp == "-" ? 0 : std::stoll(intp);
    long long numer = mulChecked(whole < 0 ? -whole : whole, den) +
                      (frac.empty() ? 0 : std::stoll(frac));
    return Rat(neg || whole < 0 ? -numer : numer, den);
  }

  long long num() const { return num_; }
  long long den() const { return den_; }
  bool isInteger() const { return den_ == 1; }
  bool isZero() const { return num_ == 0; }

  Rat operator+(const Rat& o) const {
    return Rat(addChecked(mulChecked(num_, o.den_), mulChecked(o.num_, den_)),
               mulChecked(den_, o.den_));
  }
  Rat operator-(const Rat& o) const { return *this + Rat(-o.num_, o.den_); }
  Rat operator-() const { return Rat(-num_, den_); }
  Rat operator*(const Rat& o) const {
    return Rat(mulChecked(num_, o.num_), mulChecked(den_, o.den_));
  }
  Rat operator/(const Rat& o) const {
    if (o.num_ == 0) throw std::domain_error("rational division by zero");
    return Rat(mulChecked(num_, o.den_), mulChecked(den_, o.num_));
  }
  Rat& operator+=(const Rat& o) { return *this = *this + o; }

  bool operator==(const Rat& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const Rat& o) const { return !(*this == o); }
  bool operator<(const Rat& o) const {
    return mulChecked(num_, o.den_) < mulChecked(o.num_, den_);
  }
  bool operator<=(const Rat& o) const { return *this < o || *this == o; }
  bool operator>(const Rat& o) const { return o < *this; }
  bool operator>=(const Rat& o) const { return o <= *this; }

  // Floor division for the index-level Euclidean semantics.
  long long floorToInt() const {
    long long q = num_ / den_;
    if (num_ % den_ != 0 && num_ < 0) --q;
    return q;
  }
  long long ceilToInt() const {
    long long q = num_ / den_;
    if (num_ % den_ != 0 && num_ > 0) ++q;
    return q;
  }

  std::string str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

 private:
  long long num_, den_;

  static long long addChecked(long long a, long long b) {
    long long r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("rational overflow");
    return r;
  }
  static long long mulChecked(long long a, long long b) {
    long long r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("rational overflow");
    return r;
  }

  void normalize() {
    if (den_ == 0) throw std::domain_error("rational with zero denominator");
    if (den_ < 0) { num_ = -num_; den_ = -den_; }
    long long g = std::gcd(num_ < 0 ? -num_ : num_, den_);
    if (g > 1) { num_ /= g; den_ /= g; }
  }
};

}  // namespace arel
