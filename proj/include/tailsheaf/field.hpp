#pragma once

// Exact scalar fields: arbitrary-precision rationals and a prime field.

#include <gmpxx.h>

#include <concepts>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <type_traits>

#include "errors.hpp"

namespace tailsheaf {

class Rational {
 public:
  Rational() = default;
  template <std::integral I>
  Rational(I v) : v_(static_cast<long>(v)) {}  // NOLINT(implicit)
  Rational(long num, long den) : v_(num, den) {
    if (den == 0) throw PreconditionError("rational with zero denominator");
    v_.canonicalize();
  }
  explicit Rational(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }
  explicit Rational(const mpz_class& z) : v_(z) {}

  static Rational parse(std::string_view text) {
    mpq_class q;
    if (text.empty() || q.set_str(std::string(text), 10) != 0) {
      throw PreconditionError("not a rational number: '" + std::string(text) + "'");
    }
    if (q.get_den() == 0) throw PreconditionError("rational with zero denominator");
    q.canonicalize();
    return Rational(std::move(q));
  }
  static std::string name() { return "QQ"; }
  static std::uint32_t characteristic() { return 0; }

  bool is_zero() const { return sgn(v_) == 0; }
  bool is_one() const { return v_ == 1; }
  int sign() const { return sgn(v_); }
  std::string to_string() const { return v_.get_str(); }
  const mpq_class& value() const { return v_; }
  mpz_class numerator() const { return v_.get_num(); }
  mpz_class denominator() const { return v_.get_den(); }
  bool is_integer() const { return v_.get_den() == 1; }

  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw PreconditionError("division by zero");
    v_ /= o.v_;
    return *this;
  }
  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.v_)); }
  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }

 private:
  mpq_class v_{0};
};

// Elements of F_p. The modulus is a per-thread computation context set by
// PrimeFieldScope; values carry no modulus of their own, so a Zp never meets a
// Rational (different types) and never outlives the scope that defined it.
class Zp {
 public:
  static constexpr std::uint32_t kDefaultPrime = 32003;

  Zp() = default;
  template <std::integral I>
  Zp(I v) : v_(reduce(static_cast<long long>(v))) {}  // NOLINT(implicit)

  static std::uint32_t modulus() { return modulus_ref(); }
  static std::string name() { return "fp:" + std::to_string(modulus()); }
  static std::uint32_t characteristic() { return modulus(); }

  static Zp parse(std::string_view text) {
    auto slash = text.find('/');
    if (slash != std::string_view::npos) {
      Zp num = parse(text.substr(0, slash));
      Zp den = parse(text.substr(slash + 1));
      if (den.is_zero()) throw PreconditionError("denominator vanishes mod p: '" + std::string(text) + "'");
      return num / den;
    }
    mpz_class z;
    if (text.empty() || z.set_str(std::string(text), 10) != 0) {
      throw PreconditionError("not an integer: '" + std::string(text) + "'");
    }
    mpz_class r = z % modulus();
    if (r < 0) r += modulus();
    Zp out;
    out.v_ = static_cast<std::uint32_t>(r.get_ui());
    return out;
  }

  bool is_zero() const { return v_ == 0; }
  bool is_one() const { return v_ == 1; }
  std::uint32_t value() const { return v_; }
  // Symmetric representative, so small negative integers print naturally.
  std::string to_string() const {
    long long p = modulus();
    long long s = v_ > p / 2 ? static_cast<long long>(v_) - p : v_;
    return std::to_string(s);
  }

  Zp& operator+=(const Zp& o) { v_ = static_cast<std::uint32_t>((std::uint64_t{v_} + o.v_) % modulus()); return *this; }
  Zp& operator-=(const Zp& o) { v_ = static_cast<std::uint32_t>((std::uint64_t{v_} + modulus() - o.v_) % modulus()); return *this; }
  Zp& operator*=(const Zp& o) { v_ = static_cast<std::uint32_t>((std::uint64_t{v_} * o.v_) % modulus()); return *this; }
  Zp& operator/=(const Zp& o) { return *this *= o.inverse(); }
  friend Zp operator+(Zp a, const Zp& b) { return a += b; }
  friend Zp operator-(Zp a, const Zp& b) { return a -= b; }
  friend Zp operator*(Zp a, const Zp& b) { return a *= b; }
  friend Zp operator/(Zp a, const Zp& b) { return a /= b; }
  friend Zp operator-(const Zp& a) { return Zp{} - a; }
  friend bool operator==(const Zp& a, const Zp& b) { return a.v_ == b.v_; }
  friend bool operator<(const Zp& a, const Zp& b) { return a.v_ < b.v_; }

  Zp inverse() const {
    if (is_zero()) throw PreconditionError("division by zero");
    std::uint64_t result = 1, base = v_, e = modulus() - 2;
    while (e) {
      if (e & 1) result = result * base % modulus();
      base = base * base % modulus();
      e >>= 1;
    }
    Zp out;
    out.v_ = static_cast<std::uint32_t>(result);
    return out;
  }

  static bool is_prime(std::uint32_t p) {
    if (p < 2) return false;
    for (std::uint32_t d = 2; std::uint64_t{d} * d <= p; ++d)
      if (p % d == 0) return false;
    return true;
  }

 private:
  friend class PrimeFieldScope;
  static std::uint32_t& modulus_ref() {
    thread_local std::uint32_t p = kDefaultPrime;
    return p;
  }
  static std::uint32_t reduce(long long v) {
    long long p = modulus();
    long long r = v % p;
    return static_cast<std::uint32_t>(r < 0 ? r + p : r);
  }

  std::uint32_t v_ = 0;
};

// Fixes the F_p modulus for the current thread; restores the previous one on exit.
class PrimeFieldScope {
 public:
  explicit PrimeFieldScope(std::uint32_t p) : previous_(Zp::modulus_ref()) {
    if (!Zp::is_prime(p) || p > (1u << 31)) throw PreconditionError("modulus " + std::to_string(p) + " is not a supported prime");
    Zp::modulus_ref() = p;
  }
  ~PrimeFieldScope() { Zp::modulus_ref() = previous_; }
  PrimeFieldScope(const PrimeFieldScope&) = delete;
  PrimeFieldScope& operator=(const PrimeFieldScope&) = delete;

 private:
  std::uint32_t previous_;
};

template <class F>
concept Field = requires(F a, const F b, std::string_view s) {
  { a + b } -> std::convertible_to<F>;
  { a - b } -> std::convertible_to<F>;
  { a * b } -> std::convertible_to<F>;
  { a / b } -> std::convertible_to<F>;
  { -b } -> std::convertible_to<F>;
  { b == b } -> std::convertible_to<bool>;
  { b.is_zero() } -> std::convertible_to<bool>;
  { b.to_string() } -> std::convertible_to<std::string>;
  { F::parse(s) } -> std::convertible_to<F>;
  { F::name() } -> std::convertible_to<std::string>;
  F(1);
};

template <class F>
inline constexpr bool is_rational_v = std::is_same_v<F, Rational>;

// Seeded generator with a portable integer mapping: std::uniform_int_distribution
// is implementation-defined, which would break byte-identical reruns.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}
  long long uniform(long long lo, long long hi) {
    auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<long long>(engine_() % span);
  }
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace tailsheaf
