#include "spin2d/jet.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spin2d/error.hpp"

namespace spin2d {

namespace {

constexpr double kSingularTol = 1e-12;

void require_same_order(const Jet& a, const Jet& b, const char* op) {
  if (a.order() != b.order()) {
    throw OrderError(std::string("jet ") + op + ": order mismatch (" +
                     std::to_string(a.order()) + " vs " + std::to_string(b.order()) + ")");
  }
}

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

}  // namespace

Jet::Jet(int order) : order_(order) {
  if (order < 0) throw OrderError("jet order must be >= 0");
  coeffs_.assign(size_for(order), Complex{});
}

Jet Jet::constant(Complex value, int order) {
  Jet j(order);
  j.coeffs_[0] = value;
  return j;
}

Jet Jet::variable(Axis axis, Complex base, int order) {
  Jet j(order);
  j.coeffs_[0] = base;
  if (order >= 1) {
    if (axis == Axis::X)
      j.set_coeff(1, 0, 1.0);
    else
      j.set_coeff(0, 1, 1.0);
  }
  return j;
}

Complex Jet::coeff(int i, int j) const {
  if (i < 0 || j < 0 || i + j > order_) return Complex{};
  return coeffs_[index(i, j)];
}

void Jet::set_coeff(int i, int j, Complex c) {
  if (i < 0 || j < 0 || i + j > order_)
    throw OrderError("jet coefficient (" + std::to_string(i) + "," + std::to_string(j) +
                     ") outside order " + std::to_string(order_));
  coeffs_[index(i, j)] = c;
}

Jet Jet::truncated(int order) const {
  if (order > order_)
    throw OrderError("cannot raise jet order from " + std::to_string(order_) + " to " +
                     std::to_string(order));
  Jet r(order);
  std::copy_n(coeffs_.begin(), r.coeffs_.size(), r.coeffs_.begin());
  return r;
}

Complex Jet::derivative(int i, int j) const { return coeff(i, j) * factorial(i) * factorial(j); }

double Jet::max_abs() const {
  double m = 0.0;
  for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

Jet& Jet::operator+=(const Jet& rhs) {
  require_same_order(*this, rhs, "add");
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += rhs.coeffs_[k];
  return *this;
}

Jet& Jet::operator-=(const Jet& rhs) {
  require_same_order(*this, rhs, "sub");
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] -= rhs.coeffs_[k];
  return *this;
}

Jet& Jet::operator*=(const Jet& rhs) {
  *this = *this * rhs;
  return *this;
}

Jet& Jet::operator*=(Complex s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

Jet operator+(Jet a, const Jet& b) { return a += b; }
Jet operator-(Jet a, const Jet& b) { return a -= b; }
Jet operator-(Jet a) { return a *= -1.0; }
Jet operator*(Jet a, Complex s) { return a *= s; }
Jet operator*(Complex s, Jet a) { return a *= s; }

Jet operator+(Jet a, Complex s) {
  a.set_coeff(0, 0, a.value() + s);
  return a;
}

Jet operator-(Jet a, Complex s) { return std::move(a) + (-s); }

Jet operator*(const Jet& a, const Jet& b) {
  require_same_order(a, b, "mul");
  const int n = a.order();
  Jet r(n);
  for (int d = 0; d <= n; ++d) {
    for (int j = 0; j <= d; ++j) {
      const int i = d - j;
      Complex acc{};
      for (int p = 0; p <= i; ++p)
        for (int q = 0; q <= j; ++q) acc += a.coeff(p, q) * b.coeff(i - p, j - q);
      r.set_coeff(i, j, acc);
    }
  }
  return r;
}

Jet fit(const Jet& a, int order) { return a.order() == order ? a : a.truncated(order); }

Jet reciprocal(const Jet& a) {
  const Complex a0 = a.value();
  if (std::abs(a0) <= kSingularTol) throw SingularError("reciprocal of jet with vanishing constant term");
  // Solve (a * b)(i,j) = delta by forward substitution in total degree.
  const int n = a.order();
  Jet b(n);
  b.set_coeff(0, 0, 1.0 / a0);
  for (int d = 1; d <= n; ++d) {
    for (int j = 0; j <= d; ++j) {
      const int i = d - j;
      Complex acc{};
      for (int p = 0; p <= i; ++p)
        for (int q = 0; q <= j; ++q) {
          if (p == 0 && q == 0) continue;
          acc += a.coeff(p, q) * b.coeff(i - p, j - q);
        }
      b.set_coeff(i, j, -acc / a0);
    }
  }
  return b;
}

Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }

Jet compose(std::span<const Complex> derivs, const Jet& a) {
  const int n = a.order();
  if (derivs.size() < static_cast<std::size_t>(n + 1))
    throw OrderError("compose: need " + std::to_string(n + 1) + " derivatives");
  Jet h = a - a.value();
  Jet result = Jet::constant(derivs[0], n);
  Jet hp = Jet::constant(1.0, n);
  double fact = 1.0;
  for (int k = 1; k <= n; ++k) {
    hp = hp * h;
    fact *= k;
    result += hp * (derivs[static_cast<std::size_t>(k)] / fact);
  }
  return result;
}

Jet partial(const Jet& a, Axis axis) {
  if (a.order() < 1) throw OrderError("partial derivative of an order-0 jet");
  const int n = a.order() - 1;
  Jet r(n);
  for (int d = 0; d <= n; ++d) {
    for (int j = 0; j <= d; ++j) {
      const int i = d - j;
      if (axis == Axis::X)
        r.set_coeff(i, j, static_cast<double>(i + 1) * a.coeff(i + 1, j));
      else
        r.set_coeff(i, j, static_cast<double>(j + 1) * a.coeff(i, j + 1));
    }
  }
  return r;
}

Jet integrate_gradient(const Jet& dx, const Jet& dy, Complex value) {
  if (dx.order() != dy.order()) throw OrderError("integrate_gradient: order mismatch");
  const int n = dx.order() + 1;
  Jet g(n);
  g.set_coeff(0, 0, value);
  for (int d = 0; d < n; ++d) {
    for (int j = 0; j <= d; ++j) {
      const int i = d - j;
      g.set_coeff(i + 1, j, dx.coeff(i, j) / static_cast<double>(i + 1));
    }
    g.set_coeff(0, d + 1, dy.coeff(0, d) / static_cast<double>(d + 1));
  }
  return g;
}

namespace {

std::vector<Complex> cyclic_derivs(int n, Complex f0, Complex f1, Complex f2, Complex f3) {
  const Complex cycle[4] = {f0, f1, f2, f3};
  std::vector<Complex> d(static_cast<std::size_t>(n + 1));
  for (int k = 0; k <= n; ++k) d[static_cast<std::size_t>(k)] = cycle[k % 4];
  return d;
}

}  // namespace

Jet exp(const Jet& a) {
  const Complex e = std::exp(a.value());
  std::vector<Complex> d(static_cast<std::size_t>(a.order() + 1), e);
  return compose(d, a);
}

Jet log(const Jet& a) {
  const Complex z = a.value();
  if (std::abs(z) <= kSingularTol) throw DomainError("ln evaluated at its branch point 0");
  std::vector<Complex> d(static_cast<std::size_t>(a.order() + 1));
  d[0] = std::log(z);
  // d^k/dz^k ln z = (-1)^(k-1) (k-1)! / z^k
  Complex zpow = z;
  double fact = 1.0;
  for (int k = 1; k <= a.order(); ++k) {
    d[static_cast<std::size_t>(k)] = ((k % 2 == 1) ? 1.0 : -1.0) * fact / zpow;
    fact *= k;
    zpow *= z;
  }
  return compose(d, a);
}

Jet sqrt(const Jet& a) {
  const Complex z = a.value();
  if (std::abs(z) <= kSingularTol) throw DomainError("sqrt evaluated at its branch point 0");
  std::vector<Complex> d(static_cast<std::size_t>(a.order() + 1));
  // d^k/dz^k z^(1/2) = (1/2)(1/2 - 1)...(1/2 - k + 1) z^(1/2 - k)
  const Complex s = std::sqrt(z);
  Complex coef = 1.0;
  Complex zinv_pow = 1.0;
  for (int k = 0; k <= a.order(); ++k) {
    d[static_cast<std::size_t>(k)] = coef * s * zinv_pow;
    coef *= (0.5 - k);
    zinv_pow /= z;
  }
  return compose(d, a);
}

Jet sin(const Jet& a) {
  const Complex s = std::sin(a.value()), c = std::cos(a.value());
  return compose(cyclic_derivs(a.order(), s, c, -s, -c), a);
}

Jet cos(const Jet& a) {
  const Complex s = std::sin(a.value()), c = std::cos(a.value());
  return compose(cyclic_derivs(a.order(), c, -s, -c, s), a);
}

Jet sinh(const Jet& a) {
  const Complex s = std::sinh(a.value()), c = std::cosh(a.value());
  return compose(cyclic_derivs(a.order(), s, c, s, c), a);
}

Jet cosh(const Jet& a) {
  const Complex s = std::sinh(a.value()), c = std::cosh(a.value());
  return compose(cyclic_derivs(a.order(), c, s, c, s), a);
}

Jet pow(const Jet& a, int n) {
  if (n < 0) return reciprocal(pow(a, -n));
  Jet result = Jet::constant(1.0, a.order());
  Jet base = a;
  while (n > 0) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return result;
}

Jet pow(const Jet& a, const Jet& b) {
  bool constant_exponent = true;
  for (std::size_t k = 1; k < b.coeffs().size(); ++k)
    if (b.coeffs()[k] != Complex{}) constant_exponent = false;
  const Complex e = b.value();
  if (constant_exponent && e.imag() == 0.0 && std::abs(e.real()) <= 64.0 &&
      e.real() == std::round(e.real()))
    return pow(a, static_cast<int>(e.real()));
  return exp(b * log(a));
}

}  // namespace spin2d
