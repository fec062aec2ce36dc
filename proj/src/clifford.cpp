#include "spin2d/clifford.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spin2d/error.hpp"

namespace spin2d {

Signature Signature::from_sign(int sign) {
  if (sign != 1 && sign != -1) throw Error("signature sign must be +1 or -1, got " + std::to_string(sign));
  return Signature(sign);
}

Mat2 Mat2::inverse() const {
  const Complex d = det();
  if (std::abs(d) < 1e-300) throw SingularError("inverse of singular 2x2 matrix");
  return Mat2{{m[3] / d, -m[1] / d, -m[2] / d, m[0] / d}};
}

double Mat2::max_abs() const {
  double r = 0.0;
  for (const auto& c : m) r = std::max(r, std::abs(c));
  return r;
}

Mat2 operator+(const Mat2& a, const Mat2& b) {
  Mat2 r;
  for (std::size_t k = 0; k < 4; ++k) r.m[k] = a.m[k] + b.m[k];
  return r;
}

Mat2 operator-(const Mat2& a, const Mat2& b) {
  Mat2 r;
  for (std::size_t k = 0; k < 4; ++k) r.m[k] = a.m[k] - b.m[k];
  return r;
}

Mat2 operator*(const Mat2& a, const Mat2& b) {
  Mat2 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j);
  return r;
}

Mat2 operator*(Complex s, const Mat2& a) {
  Mat2 r = a;
  for (auto& c : r.m) c *= s;
  return r;
}

Mat2 commutator(const Mat2& a, const Mat2& b) { return a * b - b * a; }
Mat2 anticommutator(const Mat2& a, const Mat2& b) { return a * b + b * a; }

GammaSet GammaSet::make(Signature sig) {
  GammaSet g{sig, Mat2::identity(), {}, {}, {}};
  const Complex k = sig.k();
  g.up[0] = Mat2{{1.0, 0.0, 0.0, -1.0}};
  g.up[1] = Mat2{{0.0, -k, k, 0.0}};
  for (int a = 0; a < 2; ++a) g.down[static_cast<std::size_t>(a)] = sig.eta(a, a) * g.up[static_cast<std::size_t>(a)];
  g.chiral = g.down[0] * g.down[1];
  if (g.dirac_condition_residual() != 0.0) throw Error("gamma matrices violate the Dirac condition");
  return g;
}

double GammaSet::dirac_condition_residual() const {
  double r = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const Mat2 lhs = anticommutator(up[static_cast<std::size_t>(a)], up[static_cast<std::size_t>(b)]);
      r = std::max(r, (lhs - (2.0 * signature.eta(a, b)) * identity).max_abs());
    }
  return r;
}

BasisCoefficients basis_decompose(const Mat2& m, const GammaSet& g) {
  // tr(gamma^a gamma^b) = 2 eta^ab, tr(gamma gamma) = -2 eta, all cross traces vanish.
  BasisCoefficients c{};
  c.scalar = 0.5 * m.trace();
  for (int a = 0; a < 2; ++a)
    c.vec[static_cast<std::size_t>(a)] =
        0.5 * g.signature.eta(a, a) * (m * g.up[static_cast<std::size_t>(a)]).trace();
  c.pseudo = -(m * g.chiral).trace() / (2.0 * g.signature.sign());
  return c;
}

Mat2 basis_compose(const BasisCoefficients& c, const GammaSet& g) {
  return c.scalar * g.identity + c.vec[0] * g.up[0] + c.vec[1] * g.up[1] + c.pseudo * g.chiral;
}

SpinElement::SpinElement(Signature sig, Complex a, Complex b, double tol) : sig_(sig), a_(a), b_(b) {
  const double err = std::abs(a * a + static_cast<double>(sig.sign()) * b * b - 1.0);
  if (err > tol)
    throw ConstraintError("spin element violates a^2 + eta b^2 = 1 (residual " + std::to_string(err) + ")");
}

Mat2 covering_map(const SpinElement& s) {
  const double eta = s.signature().sign();
  const Complex a = s.a(), b = s.b();
  // S gamma_b S^-1 = gamma_a l^a_b; the lower-left entry carries no eta
  const Complex diag = a * a - eta * b * b;
  return Mat2{{diag, 2.0 * eta * a * b, -2.0 * a * b, diag}};
}

SpinElement spin_product(const SpinElement& s1, const SpinElement& s2) {
  // gamma^2 = -eta I
  const double eta = s1.signature().sign();
  const Complex a = s1.a() * s2.a() - eta * s1.b() * s2.b();
  const Complex b = s1.a() * s2.b() + s1.b() * s2.a();
  return SpinElement(s1.signature(), a, b, 1e-9);
}

double orthogonality_residual(const Mat2& l, Signature sig) {
  const Mat2 eta{{1.0, 0.0, 0.0, static_cast<double>(sig.sign())}};
  return (l.transpose() * eta * l - eta).max_abs();
}

double connection_forms_residual(Complex w, const GammaSet& g) {
  const Complex G[2][2] = {{0.0, w}, {-w, 0.0}};
  Mat2 lhs = Mat2::zero(), rhs = Mat2::zero();
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      lhs = lhs + (0.125 * G[a][b]) * commutator(g.down[a], g.down[b]);
      rhs = rhs + (0.25 * G[a][b] * Signature::epsilon(a, b)) * g.chiral;
    }
  return (lhs - rhs).max_abs();
}

SpinorJet apply(const Mat2& m, const SpinorJet& psi) {
  return {psi[0] * m(0, 0) + psi[1] * m(0, 1), psi[0] * m(1, 0) + psi[1] * m(1, 1)};
}

SpinorJet operator+(const SpinorJet& a, const SpinorJet& b) { return {a[0] + b[0], a[1] + b[1]}; }
SpinorJet operator-(const SpinorJet& a, const SpinorJet& b) { return {a[0] - b[0], a[1] - b[1]}; }
SpinorJet operator*(const Jet& f, const SpinorJet& psi) { return {f * psi[0], f * psi[1]}; }
SpinorJet operator*(Complex s, const SpinorJet& psi) { return {psi[0] * s, psi[1] * s}; }

SpinorJet truncated(const SpinorJet& psi, int order) {
  return {psi[0].truncated(order), psi[1].truncated(order)};
}

SpinorJet zero_spinor(int order) { return {Jet(order), Jet(order)}; }

int order_of(const SpinorJet& psi) {
  if (psi[0].order() != psi[1].order()) throw OrderError("spinor components have different orders");
  return psi[0].order();
}

double value_norm(const SpinorJet& psi) { return std::max(std::abs(psi[0].value()), std::abs(psi[1].value())); }

SpinorJet random_spinor(int order, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  SpinorJet psi = zero_spinor(order);
  for (auto& c : psi)
    for (int d = 0; d <= order; ++d)
      for (int j = 0; j <= d; ++j) {
        const double re = u(rng);
        const double im = u(rng);
        c.set_coeff(d - j, j, Complex(re, im));
      }
  return psi;
}

CliffordJet CliffordJet::zero(int order) { return {Jet(order), {Jet(order), Jet(order)}, Jet(order)}; }

CliffordJet CliffordJet::scalar_only(const Jet& s) {
  return {s, {Jet(s.order()), Jet(s.order())}, Jet(s.order())};
}

CliffordJet CliffordJet::truncated(int order) const {
  if (order == this->order()) return *this;
  return {scalar.truncated(order), {vec[0].truncated(order), vec[1].truncated(order)}, pseudo.truncated(order)};
}

Mat2 CliffordJet::value(const GammaSet& g) const {
  return basis_compose({scalar.value(), {vec[0].value(), vec[1].value()}, pseudo.value()}, g);
}

SpinorJet CliffordJet::apply(const SpinorJet& psi, const GammaSet& g) const {
  const int n = std::min(order(), order_of(psi));
  const CliffordJet c = truncated(n);
  const SpinorJet p = spin2d::truncated(psi, n);
  SpinorJet out = c.scalar * p;
  out = out + c.vec[0] * spin2d::apply(g.up[0], p);
  out = out + c.vec[1] * spin2d::apply(g.up[1], p);
  out = out + c.pseudo * spin2d::apply(g.chiral, p);
  return out;
}

CliffordJet operator+(const CliffordJet& a, const CliffordJet& b) {
  return {a.scalar + b.scalar, {a.vec[0] + b.vec[0], a.vec[1] + b.vec[1]}, a.pseudo + b.pseudo};
}

}  // namespace spin2d
