#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace giweyl {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// Safe rational construction for any sign of denominator.
inline Rat rat(long long num, long long den = 1) {
  return Rat(Int(num)) / Rat(Int(den));
}

inline Rat rat_int(const Int& num, const Int& den) { return Rat(num) / Rat(den); }

inline Rat binomial(int n, int k) {
  if (k < 0 || k > n) return Rat(0);
  Rat r(1);
  for (int t = 0; t < k; ++t) r *= rat_int(Int(n - t), Int(t + 1));
  return r;
}

// Generalized binomial coefficient C(alpha, j) for rational alpha.
inline Rat binomial_general(const Rat& alpha, int j) {
  Rat r(1);
  for (int t = 0; t < j; ++t) r *= (alpha - t) / Rat(Int(t + 1));
  return r;
}

inline Rat factorial(int n) {
  Rat r(1);
  for (int t = 2; t <= n; ++t) r *= Rat(Int(t));
  return r;
}

// Exact complex rational coefficient, value = re + im*i.
struct Coeff {
  Rat re{};
  Rat im{};

  Coeff() = default;
  Coeff(Rat r) : re(std::move(r)) {}  // NOLINT: implicit by design
  Coeff(Rat r, Rat i) : re(std::move(r)), im(std::move(i)) {}

  static Coeff one() { return Coeff(Rat(1)); }
  static Coeff i() { return Coeff(Rat(0), Rat(1)); }

  bool is_zero() const { return re == 0 && im == 0; }
  bool is_real() const { return im == 0; }

  // Multiplication by the imaginary unit.
  Coeff times_i() const { return Coeff(-im, re); }
  Coeff conj() const { return Coeff(re, -im); }

  Coeff& operator+=(const Coeff& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  Coeff& operator-=(const Coeff& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  Coeff& operator*=(const Coeff& o) {
    Rat r = re * o.re - im * o.im;
    Rat i = re * o.im + im * o.re;
    re = std::move(r);
    im = std::move(i);
    return *this;
  }
  Coeff& operator*=(const Rat& s) {
    re *= s;
    im *= s;
    return *this;
  }

  friend Coeff operator+(Coeff a, const Coeff& b) { return a += b; }
  friend Coeff operator-(Coeff a, const Coeff& b) { return a -= b; }
  friend Coeff operator*(Coeff a, const Coeff& b) { return a *= b; }
  friend Coeff operator*(Coeff a, const Rat& s) { return a *= s; }
  friend Coeff operator*(const Rat& s, Coeff a) { return a *= s; }
  friend Coeff operator-(const Coeff& a) { return Coeff(-a.re, -a.im); }
  friend bool operator==(const Coeff& a, const Coeff& b) { return a.re == b.re && a.im == b.im; }
  friend bool operator!=(const Coeff& a, const Coeff& b) { return !(a == b); }
};

// i^k for any integer k.
inline Coeff i_pow(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return Coeff(Rat(1));
    case 1: return Coeff(Rat(0), Rat(1));
    case 2: return Coeff(Rat(-1));
    default: return Coeff(Rat(0), Rat(-1));
  }
}

inline Coeff coeff_pow(Coeff base, int k) {
  Coeff r = Coeff::one();
  for (int t = 0; t < k; ++t) r *= base;
  return r;
}

inline std::string to_string(const Rat& r) {
  return r.str();
}

}  // namespace giweyl
