#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace spin2d {

using Complex = std::complex<double>;

enum class Axis { X = 0, Y = 1 };

// Truncated bivariate Taylor expansion around a base point.
//
// Coefficient (i, j) holds d^i/dx^i d^j/dy^j f / (i! j!) evaluated at the
// base point, for every i + j <= order. Storage is a dense triangle laid out
// by total degree, so the Cauchy product is a plain convolution.
class Jet {
 public:
  Jet() : Jet(0) {}
  explicit Jet(int order);

  static Jet constant(Complex value, int order);
  // The coordinate function itself, expanded at `base`.
  static Jet variable(Axis axis, Complex base, int order);

  int order() const noexcept { return order_; }
  Complex value() const noexcept { return coeffs_[0]; }

  Complex coeff(int i, int j) const;
  void set_coeff(int i, int j, Complex c);

  // Raw triangular storage, ordered by total degree then by j.
  std::span<const Complex> coeffs() const noexcept { return coeffs_; }

  // Drop every term of total degree > order. `order` must not exceed the
  // current order.
  Jet truncated(int order) const;

  // Partial derivative d^i_x d^j_y at the base point (factorials restored).
  Complex derivative(int i, int j) const;

  // Largest coefficient magnitude.
  double max_abs() const;

  Jet& operator+=(const Jet& rhs);
  Jet& operator-=(const Jet& rhs);
  Jet& operator*=(const Jet& rhs);
  Jet& operator*=(Complex s);

  static std::size_t size_for(int order) {
    return static_cast<std::size_t>(order + 1) * static_cast<std::size_t>(order + 2) / 2;
  }
  static std::size_t index(int i, int j) {
    const int d = i + j;
    return static_cast<std::size_t>(d) * static_cast<std::size_t>(d + 1) / 2 +
           static_cast<std::size_t>(j);
  }

 private:
  int order_;
  std::vector<Complex> coeffs_;
};

Jet operator+(Jet a, const Jet& b);
Jet operator-(Jet a, const Jet& b);
Jet operator-(Jet a);
Jet operator*(const Jet& a, const Jet& b);
Jet operator*(Jet a, Complex s);
Jet operator*(Complex s, Jet a);
Jet operator+(Jet a, Complex s);
Jet operator-(Jet a, Complex s);

// Truncate to `order` (<= a.order()), skipping the copy-free case.
Jet fit(const Jet& a, int order);

// Multiplicative inverse; throws SingularError if |a(0,0)| <= 1e-12.
Jet reciprocal(const Jet& a);
Jet operator/(const Jet& a, const Jet& b);

// f(a) given derivs[n] = f^(n)(a.value()) for n = 0..a.order().
Jet compose(std::span<const Complex> derivs, const Jet& a);

// d/dx or d/dy; result has order a.order() - 1. Throws OrderError on order 0.
Jet partial(const Jet& a, Axis axis);

// Formal antiderivative pair: the jet g of order dx.order() + 1 with
// g(0,0) = value, dg/dx = dx and dg/dy = dy. Only the y-derivative along the
// line x = 0 is read from `dy`; the pair is assumed closed.
Jet integrate_gradient(const Jet& dx, const Jet& dy, Complex value);

// Analytic primitives. Branch points raise DomainError.
Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet sqrt(const Jet& a);
Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet sinh(const Jet& a);
Jet cosh(const Jet& a);
Jet pow(const Jet& a, int n);
// a^b through exp(b log a), except integer-valued constant b.
Jet pow(const Jet& a, const Jet& b);

}  // namespace spin2d
