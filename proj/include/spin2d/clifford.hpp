#pragma once

#include <array>
#include <random>

#include "spin2d/jet.hpp"

namespace spin2d {

// Signature of the 2D metric: +1 Euclidean (2,0), -1 Lorentzian (1,1).
// eta_ab = diag(1, eta); eps_12 = +1 with both indices down.
class Signature {
 public:
  static Signature euclidean() { return Signature(1); }
  static Signature lorentzian() { return Signature(-1); }
  static Signature from_sign(int sign);

  int sign() const noexcept { return sign_; }
  bool is_euclidean() const noexcept { return sign_ == 1; }

  // eta_ab and eta^ab coincide for a diagonal +-1 form; a, b in {0, 1}.
  double eta(int a, int b) const noexcept { return a != b ? 0.0 : (a == 0 ? 1.0 : sign_); }
  // eps_ab, both indices down.
  static double epsilon(int a, int b) noexcept { return a == b ? 0.0 : (a == 0 ? 1.0 : -1.0); }
  // eps^a_b = eta^{ac} eps_cb.
  double epsilon_up_down(int a, int b) const noexcept { return eta(a, a) * epsilon(a, b); }
  // i for Euclidean, 1 for Lorentzian.
  Complex k() const noexcept { return sign_ == 1 ? Complex(0.0, 1.0) : Complex(1.0, 0.0); }

  const char* name() const noexcept { return sign_ == 1 ? "euclidean" : "lorentzian"; }

  friend bool operator==(Signature, Signature) = default;

 private:
  explicit Signature(int sign) : sign_(sign) {}
  int sign_;
};

// 2x2 complex matrix, row-major.
struct Mat2 {
  std::array<Complex, 4> m{};

  static Mat2 identity() { return Mat2{{1.0, 0.0, 0.0, 1.0}}; }
  static Mat2 zero() { return Mat2{}; }

  Complex& operator()(int r, int c) { return m[static_cast<std::size_t>(2 * r + c)]; }
  Complex operator()(int r, int c) const { return m[static_cast<std::size_t>(2 * r + c)]; }

  Complex trace() const { return m[0] + m[3]; }
  Complex det() const { return m[0] * m[3] - m[1] * m[2]; }
  Mat2 inverse() const;
  Mat2 transpose() const { return Mat2{{m[0], m[2], m[1], m[3]}}; }
  double max_abs() const;
};

Mat2 operator+(const Mat2& a, const Mat2& b);
Mat2 operator-(const Mat2& a, const Mat2& b);
Mat2 operator*(const Mat2& a, const Mat2& b);
Mat2 operator*(Complex s, const Mat2& a);
Mat2 commutator(const Mat2& a, const Mat2& b);
Mat2 anticommutator(const Mat2& a, const Mat2& b);

// gamma^1 = diag(1, -1), gamma^2 = [[0, -k], [k, 0]], gamma = gamma_1 gamma_2.
struct GammaSet {
  Signature signature;
  Mat2 identity;
  std::array<Mat2, 2> up;    // gamma^a
  std::array<Mat2, 2> down;  // gamma_a = eta_ab gamma^b
  Mat2 chiral;               // gamma

  // Builds the set and checks the Dirac condition; throws Error on failure.
  static GammaSet make(Signature sig);

  // Largest entry of gamma^a gamma^b + gamma^b gamma^a - 2 eta^{ab} I.
  double dirac_condition_residual() const;
};

// M = scalar I + vec_a gamma^a + pseudo gamma.
struct BasisCoefficients {
  Complex scalar;
  std::array<Complex, 2> vec;
  Complex pseudo;
};

BasisCoefficients basis_decompose(const Mat2& m, const GammaSet& g);
Mat2 basis_compose(const BasisCoefficients& c, const GammaSet& g);

// S = a I + b gamma with a^2 + eta b^2 = 1.
class SpinElement {
 public:
  // Throws ConstraintError if |a^2 + eta b^2 - 1| > tol.
  SpinElement(Signature sig, Complex a, Complex b, double tol = 1e-12);

  Complex a() const noexcept { return a_; }
  Complex b() const noexcept { return b_; }
  Signature signature() const noexcept { return sig_; }
  Mat2 matrix(const GammaSet& g) const { return a_ * g.identity + b_ * g.chiral; }
  SpinElement inverse() const { return SpinElement(sig_, a_, -b_, 1e-9); }

 private:
  Signature sig_;
  Complex a_, b_;
};

// l(S) = [[a^2 - eta b^2, 2 eta a b], [-2 a b, a^2 - eta b^2]], defined by
// S gamma_b S^-1 = gamma_a l^a_b. Row index up, column index down.
Mat2 covering_map(const SpinElement& s);
// Group product S1 S2 expressed back in (a, b) form.
SpinElement spin_product(const SpinElement& s1, const SpinElement& s2);
// Largest entry of l^T eta l - eta.
double orthogonality_residual(const Mat2& l, Signature sig);

// Gamma^{ab} antisymmetric with Gamma^{12} = w: largest entry of
// 1/8 Gamma^{ab} [gamma_a, gamma_b] - 1/4 Gamma^{ab} eps_ab gamma.
double connection_forms_residual(Complex w, const GammaSet& g);

// Two-component spinor field as jets.
using SpinorJet = std::array<Jet, 2>;

SpinorJet apply(const Mat2& m, const SpinorJet& psi);
SpinorJet operator+(const SpinorJet& a, const SpinorJet& b);
SpinorJet operator-(const SpinorJet& a, const SpinorJet& b);
SpinorJet operator*(const Jet& f, const SpinorJet& psi);
SpinorJet operator*(Complex s, const SpinorJet& psi);
SpinorJet truncated(const SpinorJet& psi, int order);
SpinorJet zero_spinor(int order);
int order_of(const SpinorJet& psi);
// Max |component| over the order-0 coefficient only.
double value_norm(const SpinorJet& psi);
// Every coefficient uniform in the complex unit square [-1, 1] x [-1, 1] i.
SpinorJet random_spinor(int order, std::mt19937_64& rng);

// Matrix-valued field expanded in {I, gamma^a, gamma}, coefficients as jets.
struct CliffordJet {
  Jet scalar;
  std::array<Jet, 2> vec;
  Jet pseudo;

  static CliffordJet zero(int order);
  static CliffordJet scalar_only(const Jet& s);
  int order() const { return scalar.order(); }
  CliffordJet truncated(int order) const;
  // Matrix at the base point.
  Mat2 value(const GammaSet& g) const;
  SpinorJet apply(const SpinorJet& psi, const GammaSet& g) const;
};

CliffordJet operator+(const CliffordJet& a, const CliffordJet& b);

}  // namespace spin2d
