#pragma once

// Exact arithmetic used by the state-sum engine:
//   Poly4      - polynomials in Z[x,y,z,w]
//   Laurent<T> - Laurent polynomials in one variable z
//   Dyadic     - rationals p / 2^k
//   SqrtGauss  - g * sqrt(2)^(-k) with g a Gaussian integer

#include <array>
#include <cstdint>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

namespace mgd {

namespace detail {

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("integer overflow in addition");
  return r;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("integer overflow in multiplication");
  return r;
}

inline std::int64_t checked_neg(std::int64_t a) { return checked_mul(a, -1); }

}  // namespace detail

// ---------------------------------------------------------------------------
// Dyadic rationals

class Dyadic {
 public:
  Dyadic() = default;
  Dyadic(std::int64_t n) : num_(n) {}  // NOLINT(google-explicit-constructor)
  Dyadic(std::int64_t n, int k) : num_(n), k_(k) { normalize(); }

  std::int64_t num() const { return num_; }
  int exp2() const { return k_; }  // value = num / 2^exp2
  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return k_ == 0; }

  friend Dyadic operator+(const Dyadic& a, const Dyadic& b) {
    int k = std::max(a.k_, b.k_);
    return Dyadic(detail::checked_add(scale(a.num_, k - a.k_), scale(b.num_, k - b.k_)), k);
  }
  friend Dyadic operator-(const Dyadic& a) { return Dyadic(detail::checked_neg(a.num_), a.k_); }
  friend Dyadic operator-(const Dyadic& a, const Dyadic& b) { return a + (-b); }
  friend Dyadic operator*(const Dyadic& a, const Dyadic& b) {
    return Dyadic(detail::checked_mul(a.num_, b.num_), a.k_ + b.k_);
  }
  Dyadic& operator+=(const Dyadic& o) { return *this = *this + o; }
  Dyadic& operator*=(const Dyadic& o) { return *this = *this * o; }
  friend bool operator==(const Dyadic& a, const Dyadic& b) = default;

  std::string str() const {
    if (k_ == 0) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(std::int64_t{1} << k_);
  }

 private:
  static std::int64_t scale(std::int64_t n, int by) {
    for (int i = 0; i < by; ++i) n = detail::checked_mul(n, 2);
    return n;
  }
  void normalize() {
    if (k_ < 0) {
      num_ = scale(num_, -k_);
      k_ = 0;
    }
    if (num_ == 0) {
      k_ = 0;
      return;
    }
    while (k_ > 0 && num_ % 2 == 0) {
      num_ /= 2;
      --k_;
    }
  }

  std::int64_t num_ = 0;
  int k_ = 0;
};

inline std::ostream& operator<<(std::ostream& os, const Dyadic& d) { return os << d.str(); }

// ---------------------------------------------------------------------------
// Laurent polynomials in z

namespace detail {
inline bool coeff_is_zero(std::int64_t c) { return c == 0; }
inline bool coeff_is_zero(const Dyadic& c) { return c.is_zero(); }
inline std::string coeff_str(std::int64_t c) { return std::to_string(c); }
inline std::string coeff_str(const Dyadic& c) { return c.str(); }
inline bool coeff_is_one(std::int64_t c) { return c == 1; }
inline bool coeff_is_one(const Dyadic& c) { return c == Dyadic(1); }
inline bool coeff_negative(std::int64_t c) { return c < 0; }
inline bool coeff_negative(const Dyadic& c) { return c.num() < 0; }
inline std::int64_t coeff_add(std::int64_t a, std::int64_t b) { return checked_add(a, b); }
inline Dyadic coeff_add(const Dyadic& a, const Dyadic& b) { return a + b; }
inline std::int64_t coeff_mul(std::int64_t a, std::int64_t b) { return checked_mul(a, b); }
inline Dyadic coeff_mul(const Dyadic& a, const Dyadic& b) { return a * b; }
}  // namespace detail

template <class Coeff>
class Laurent {
 public:
  using Terms = std::map<int, Coeff>;

  Laurent() = default;
  Laurent(Coeff c) { add_term(0, c); }  // NOLINT(google-explicit-constructor)

  static Laurent monomial(int exponent, Coeff c = Coeff(1)) {
    Laurent p;
    p.add_term(exponent, c);
    return p;
  }
  static Laurent z() { return monomial(1); }
  static Laurent z_inv() { return monomial(-1); }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  Coeff coeff(int exponent) const {
    auto it = terms_.find(exponent);
    return it == terms_.end() ? Coeff(0) : it->second;
  }

  void add_term(int exponent, const Coeff& c) {
    if (detail::coeff_is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(exponent, c);
    if (!inserted) {
      it->second = detail::coeff_add(it->second, c);
      if (detail::coeff_is_zero(it->second)) terms_.erase(it);
    }
  }

  friend Laurent operator+(Laurent a, const Laurent& b) {
    for (const auto& [e, c] : b.terms_) a.add_term(e, c);
    return a;
  }
  friend Laurent operator-(const Laurent& a) {
    Laurent r;
    for (const auto& [e, c] : a.terms_) r.add_term(e, detail::coeff_mul(c, Coeff(-1)));
    return r;
  }
  friend Laurent operator-(const Laurent& a, const Laurent& b) { return a + (-b); }
  friend Laurent operator*(const Laurent& a, const Laurent& b) {
    Laurent r;
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) r.add_term(ea + eb, detail::coeff_mul(ca, cb));
    return r;
  }
  Laurent& operator+=(const Laurent& o) { return *this = *this + o; }
  Laurent& operator*=(const Laurent& o) { return *this = *this * o; }
  friend bool operator==(const Laurent& a, const Laurent& b) = default;

  // Multiplication by z^k.
  Laurent shifted(int k) const {
    Laurent r;
    for (const auto& [e, c] : terms_) r.terms_.emplace(e + k, c);
    return r;
  }

  Laurent pow(unsigned n) const {
    Laurent r(Coeff(1));
    for (unsigned i = 0; i < n; ++i) r *= *this;
    return r;
  }

  // Ascending exponent order, e.g. "2z^-1 + 3 - z^2".
  std::string str() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [e, c] : terms_) {
      Coeff mag = detail::coeff_negative(c) ? detail::coeff_mul(c, Coeff(-1)) : c;
      if (first) {
        if (detail::coeff_negative(c)) out += "-";
      } else {
        out += detail::coeff_negative(c) ? " - " : " + ";
      }
      first = false;
      std::string cs = detail::coeff_str(mag);
      bool frac = cs.find('/') != std::string::npos;
      if (e == 0) {
        out += cs;
        continue;
      }
      if (!detail::coeff_is_one(mag)) out += frac ? "(" + cs + ")" : cs;
      out += "z";
      if (e != 1) out += "^" + std::to_string(e);
    }
    return out;
  }

 private:
  Terms terms_;
};

using LaurentInt = Laurent<std::int64_t>;
using LaurentRat = Laurent<Dyadic>;

template <class C>
std::ostream& operator<<(std::ostream& os, const Laurent<C>& p) {
  return os << p.str();
}

inline LaurentRat to_rat(const LaurentInt& p) {
  LaurentRat r;
  for (const auto& [e, c] : p.terms()) r.add_term(e, Dyadic(c));
  return r;
}

// ---------------------------------------------------------------------------
// Gaussian integers and Z[i][1/sqrt2]

struct Gaussian {
  std::int64_t re = 0;
  std::int64_t im = 0;

  friend Gaussian operator+(Gaussian a, Gaussian b) {
    return {detail::checked_add(a.re, b.re), detail::checked_add(a.im, b.im)};
  }
  friend Gaussian operator-(Gaussian a) { return {detail::checked_neg(a.re), detail::checked_neg(a.im)}; }
  friend Gaussian operator-(Gaussian a, Gaussian b) { return a + (-b); }
  friend Gaussian operator*(Gaussian a, Gaussian b) {
    using detail::checked_add;
    using detail::checked_mul;
    return {checked_add(checked_mul(a.re, b.re), checked_mul(-b.im, a.im)),
            checked_add(checked_mul(a.re, b.im), checked_mul(a.im, b.re))};
  }
  friend bool operator==(Gaussian, Gaussian) = default;
  bool is_zero() const { return re == 0 && im == 0; }

  // "0", "2", "-i", "1+i", "3-2i"
  std::string str() const {
    auto imag = [](std::int64_t v) {
      if (v == 1) return std::string("i");
      if (v == -1) return std::string("-i");
      return std::to_string(v) + "i";
    };
    if (im == 0) return std::to_string(re);
    if (re == 0) return imag(im);
    std::string s = std::to_string(re);
    s += im > 0 ? "+" : "-";
    std::int64_t m = im > 0 ? im : -im;
    s += m == 1 ? "i" : std::to_string(m) + "i";
    return s;
  }
};

// Value g * sqrt(2)^(-k). Canonical: g == 0 implies k == 0, otherwise 2 does not divide g.
// Sums are only representable when both summands have exponents of equal parity.
class SqrtGauss {
 public:
  SqrtGauss() = default;
  SqrtGauss(Gaussian g, int k) : g_(g), k_(k) { normalize(); }
  explicit SqrtGauss(std::int64_t n) : SqrtGauss(Gaussian{n, 0}, 0) {}

  static SqrtGauss one() { return SqrtGauss(Gaussian{1, 0}, 0); }
  static SqrtGauss inv_sqrt2() { return SqrtGauss(Gaussian{1, 0}, 1); }
  // (1+i)/sqrt2
  static SqrtGauss eighth_root() { return SqrtGauss(Gaussian{1, 1}, 1); }

  Gaussian g() const { return g_; }
  int k() const { return k_; }
  bool is_zero() const { return g_.is_zero(); }

  friend SqrtGauss operator+(const SqrtGauss& a, const SqrtGauss& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if ((a.k_ - b.k_) % 2 != 0)
      throw std::domain_error("SqrtGauss sum of odd and even sqrt2 powers is not representable");
    int k = std::max(a.k_, b.k_);
    return SqrtGauss(lift(a.g_, (k - a.k_) / 2) + lift(b.g_, (k - b.k_) / 2), k);
  }
  friend SqrtGauss operator-(const SqrtGauss& a) { return SqrtGauss(-a.g_, a.k_); }
  friend SqrtGauss operator-(const SqrtGauss& a, const SqrtGauss& b) { return a + (-b); }
  friend SqrtGauss operator*(const SqrtGauss& a, const SqrtGauss& b) {
    return SqrtGauss(a.g_ * b.g_, a.k_ + b.k_);
  }
  SqrtGauss& operator+=(const SqrtGauss& o) { return *this = *this + o; }
  SqrtGauss& operator*=(const SqrtGauss& o) { return *this = *this * o; }
  friend bool operator==(const SqrtGauss&, const SqrtGauss&) = default;

  SqrtGauss pow(int n) const {
    if (n < 0) throw std::domain_error("negative power of SqrtGauss");
    SqrtGauss r = one();
    for (int i = 0; i < n; ++i) r *= *this;
    return r;
  }

  // "a+bi / sqrt2^k"
  std::string str() const { return g_.str() + " / sqrt2^" + std::to_string(k_); }

 private:
  static Gaussian lift(Gaussian g, int halves) {
    for (int i = 0; i < halves; ++i) g = g * Gaussian{2, 0};
    return g;
  }
  void normalize() {
    if (g_.is_zero()) {
      k_ = 0;
      return;
    }
    // canonical: k >= 0, and g not divisible by 2 unless k < 2
    while (k_ < 0) {
      g_ = g_ * Gaussian{2, 0};
      k_ += 2;
    }
    while (k_ >= 2 && g_.re % 2 == 0 && g_.im % 2 == 0) {
      g_.re /= 2;
      g_.im /= 2;
      k_ -= 2;
    }
  }

  Gaussian g_{};
  int k_ = 0;
};

inline std::ostream& operator<<(std::ostream& os, const SqrtGauss& v) { return os << v.str(); }

// ((1+i)/sqrt2)^t for any integer t; the inverse of (1+i)/sqrt2 is (1-i)/sqrt2.
inline SqrtGauss eighth_root_power(int t) {
  if (t >= 0) return SqrtGauss::eighth_root().pow(t);
  return SqrtGauss(Gaussian{1, -1}, 1).pow(-t);
}

inline SqrtGauss sqrtgauss_scale(const SqrtGauss& v, int t) { return v * eighth_root_power(t); }

// ---------------------------------------------------------------------------
// Z[x,y,z,w]

enum class Var : int { x = 0, y = 1, z = 2, w = 3 };

class Poly4 {
 public:
  using Exponent = std::array<unsigned, 4>;
  using Terms = std::map<Exponent, std::int64_t>;

  Poly4() = default;
  Poly4(std::int64_t c) { add_term({0, 0, 0, 0}, c); }  // NOLINT(google-explicit-constructor)

  static Poly4 var(Var v) {
    Exponent e{0, 0, 0, 0};
    e[static_cast<int>(v)] = 1;
    Poly4 p;
    p.add_term(e, 1);
    return p;
  }
  static Poly4 monomial(Exponent e, std::int64_t c = 1) {
    Poly4 p;
    p.add_term(e, c);
    return p;
  }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const Exponent& e, std::int64_t c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second = detail::checked_add(it->second, c);
      if (it->second == 0) terms_.erase(it);
    }
  }

  friend Poly4 operator+(Poly4 a, const Poly4& b) {
    for (const auto& [e, c] : b.terms_) a.add_term(e, c);
    return a;
  }
  friend Poly4 operator-(const Poly4& a) {
    Poly4 r;
    for (const auto& [e, c] : a.terms_) r.add_term(e, detail::checked_neg(c));
    return r;
  }
  friend Poly4 operator-(const Poly4& a, const Poly4& b) { return a + (-b); }
  friend Poly4 operator*(const Poly4& a, const Poly4& b) {
    Poly4 r;
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_)
        r.add_term({ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2], ea[3] + eb[3]}, detail::checked_mul(ca, cb));
    return r;
  }
  Poly4& operator+=(const Poly4& o) { return *this = *this + o; }
  Poly4& operator*=(const Poly4& o) { return *this = *this * o; }
  friend bool operator==(const Poly4&, const Poly4&) = default;

  // Generic evaluation into any commutative ring R given images of x, y, z, w.
  template <class R>
  R eval(const std::array<R, 4>& point, R zero, R one) const {
    R sum = zero;
    for (const auto& [e, c] : terms_) {
      R term = one;
      for (int v = 0; v < 4; ++v)
        for (unsigned i = 0; i < e[v]; ++i) term = term * point[v];
      sum = sum + R(c) * term;
    }
    return sum;
  }

  // Terms in descending lexicographic order of (a,b,c,d), e.g. "2x^2 + 2xz".
  std::string str() const {
    if (terms_.empty()) return "0";
    static constexpr char names[4] = {'x', 'y', 'z', 'w'};
    std::string out;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      const auto& [e, c] = *it;
      if (first) {
        if (c < 0) out += "-";
      } else {
        out += c < 0 ? " - " : " + ";
      }
      first = false;
      std::int64_t mag = c < 0 ? -c : c;
      bool constant = e[0] + e[1] + e[2] + e[3] == 0;
      if (mag != 1 || constant) out += std::to_string(mag);
      for (int v = 0; v < 4; ++v) {
        if (e[v] == 0) continue;
        out += names[v];
        if (e[v] > 1) out += "^" + std::to_string(e[v]);
      }
    }
    return out;
  }

 private:
  Terms terms_;
};

inline std::ostream& operator<<(std::ostream& os, const Poly4& p) { return os << p.str(); }

// x, y -> 0; z -> z; w -> z^-1.
inline LaurentInt poly4_eval_laurent(const Poly4& p) {
  LaurentInt r;
  for (const auto& [e, c] : p.terms()) {
    if (e[0] != 0 || e[1] != 0) continue;
    r.add_term(static_cast<int>(e[2]) - static_cast<int>(e[3]), c);
  }
  return r;
}

// x, y -> 1; z, w -> 0.
inline std::int64_t poly4_eval_int(const Poly4& p) {
  std::int64_t s = 0;
  for (const auto& [e, c] : p.terms())
    if (e[2] == 0 && e[3] == 0) s = detail::checked_add(s, c);
  return s;
}

// x, y -> 1/sqrt2; z -> i/sqrt2; w -> -i/sqrt2.
inline SqrtGauss poly4_eval_sqrtgauss(const Poly4& p) {
  SqrtGauss sum;
  for (const auto& [e, c] : p.terms()) {
    // i^c * (-i)^d = i^(c + 3d)
    static constexpr Gaussian i_pow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    Gaussian unit = i_pow[(e[2] + 3 * e[3]) % 4];
    int degree = static_cast<int>(e[0] + e[1] + e[2] + e[3]);
    sum += SqrtGauss(unit * Gaussian{c, 0}, degree);
  }
  return sum;
}

// General Laurent evaluation x, y, z, w -> given Laurent polynomials over Dyadic.
inline LaurentRat poly4_eval(const Poly4& p, const std::array<LaurentRat, 4>& point) {
  return p.eval<LaurentRat>(point, LaurentRat(), LaurentRat(Dyadic(1)));
}

}  // namespace mgd
