#include <gtest/gtest.h>

#include "oracles.hpp"
#include "spin2d/clifford.hpp"
#include "spin2d/error.hpp"

using namespace spin2d;

namespace {

// gammas written out by hand, independent of GammaSet::make
struct HandGammas {
  oracle::M2 up[2], down[2], chiral;
  explicit HandGammas(int sign) {
    const oracle::C k = sign == 1 ? oracle::C(0, 1) : oracle::C(1, 0);
    up[0] = {{{1, 0}, {0, -1}}};
    up[1] = {{{0, -k}, {k, 0}}};
    down[0] = up[0];
    down[1] = {{{0, -double(sign) * k}, {double(sign) * k, 0}}};
    chiral = mul(down[0], down[1]);
  }
  static oracle::M2 mul(const oracle::M2& a, const oracle::M2& b) {
    oracle::M2 r{};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int l = 0; l < 2; ++l) r[i][j] += a[i][l] * b[l][j];
    return r;
  }
};

oracle::M2 to_m2(const Mat2& m) { return {{{m(0, 0), m(0, 1)}, {m(1, 0), m(1, 1)}}}; }

double diff(const Mat2& a, const oracle::M2& b) {
  double e = 0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) e = std::max(e, std::abs(a(i, j) - b[i][j]));
  return e;
}

// l^a_b = 1/2 tr(gamma^a S gamma_b S^-1)
oracle::M2 covering_oracle(int sign, oracle::C a, oracle::C b) {
  const HandGammas h(sign);
  const oracle::M2 I{{{1, 0}, {0, 1}}};
  oracle::M2 S{}, Si{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      S[i][j] = a * I[i][j] + b * h.chiral[i][j];
      Si[i][j] = a * I[i][j] - b * h.chiral[i][j];
    }
  oracle::M2 l{};
  for (int bb = 0; bb < 2; ++bb) {
    const oracle::M2 M = HandGammas::mul(HandGammas::mul(S, h.down[bb]), Si);
    for (int aa = 0; aa < 2; ++aa) {
      const oracle::M2 P = HandGammas::mul(h.up[aa], M);
      l[aa][bb] = 0.5 * (P[0][0] + P[1][1]);
    }
  }
  return l;
}

SpinElement random_element(Signature sig, std::mt19937_64& rng) {
  const Complex t = oracle::random_c(rng);
  return sig.is_euclidean() ? SpinElement(sig, std::cos(t), std::sin(t)) : SpinElement(sig, std::cosh(t), std::sinh(t));
}

}  // namespace

class Signatures : public ::testing::TestWithParam<int> {};
INSTANTIATE_TEST_SUITE_P(Both, Signatures, ::testing::Values(1, -1));

TEST_P(Signatures, GammasMatchTheHandWrittenSet) {
  const GammaSet g = GammaSet::make(Signature::from_sign(GetParam()));
  const HandGammas h(GetParam());
  for (int a = 0; a < 2; ++a) {
    EXPECT_EQ(diff(g.up[a], h.up[a]), 0.0);
    EXPECT_EQ(diff(g.down[a], h.down[a]), 0.0);
  }
  EXPECT_EQ(diff(g.chiral, h.chiral), 0.0);
}

TEST_P(Signatures, DiracConditionIsExact) {
  const Signature sig = Signature::from_sign(GetParam());
  const GammaSet g = GammaSet::make(sig);
  EXPECT_EQ(g.dirac_condition_residual(), 0.0);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const Mat2 ac = anticommutator(g.up[a], g.up[b]);
      EXPECT_EQ((ac - Complex(2.0 * sig.eta(a, b)) * g.identity).max_abs(), 0.0);
    }
  // gamma^2 = -eta I
  EXPECT_EQ((g.chiral * g.chiral + Complex(sig.sign()) * g.identity).max_abs(), 0.0);
}

TEST_P(Signatures, BasisRoundTrip) {
  const GammaSet g = GammaSet::make(Signature::from_sign(GetParam()));
  std::mt19937_64 rng(7);
  for (int t = 0; t < 100; ++t) {
    Mat2 m;
    for (auto& c : m.m) c = oracle::random_c(rng);
    EXPECT_LT((basis_compose(basis_decompose(m, g), g) - m).max_abs(), 1e-15);
  }
  const BasisCoefficients c = basis_decompose(g.chiral, g);
  EXPECT_EQ(c.pseudo, Complex(1));
  EXPECT_EQ(c.scalar, Complex(0));
}

TEST_P(Signatures, CoveringMapMatchesTraceOracle) {
  const Signature sig = Signature::from_sign(GetParam());
  std::mt19937_64 rng(8);
  for (int t = 0; t < 100; ++t) {
    const SpinElement s = random_element(sig, rng);
    EXPECT_LT(diff(covering_map(s), covering_oracle(sig.sign(), s.a(), s.b())), 1e-12);
  }
}

TEST(Clifford, CoveringMapIsDoubleAngleRotationOrBoost) {
  const double th = 0.37;
  const Mat2 r = covering_map(SpinElement(Signature::euclidean(), std::cos(th), std::sin(th)));
  EXPECT_NEAR(std::abs(r(0, 0) - std::cos(2 * th)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(r(0, 1) - std::sin(2 * th)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(r(1, 0) + std::sin(2 * th)), 0.0, 1e-15);
  const Mat2 b = covering_map(SpinElement(Signature::lorentzian(), std::cosh(th), std::sinh(th)));
  EXPECT_NEAR(std::abs(b(0, 0) - std::cosh(2 * th)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(b(0, 1) + std::sinh(2 * th)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(b(1, 0) + std::sinh(2 * th)), 0.0, 1e-14);
}

TEST_P(Signatures, ConjugationActsThroughTheCoveringMap) {
  const Signature sig = Signature::from_sign(GetParam());
  const GammaSet g = GammaSet::make(sig);
  std::mt19937_64 rng(9);
  for (int t = 0; t < 100; ++t) {
    const SpinElement s = random_element(sig, rng);
    const Mat2 S = s.matrix(g), Si = S.inverse(), l = covering_map(s);
    for (int b = 0; b < 2; ++b) {
      const Mat2 lhs = S * g.down[b] * Si;
      const Mat2 rhs = l(0, b) * g.down[0] + l(1, b) * g.down[1];
      EXPECT_LT((lhs - rhs).max_abs(), 1e-12);
    }
  }
}

TEST_P(Signatures, HomomorphismIntoSO) {
  const Signature sig = Signature::from_sign(GetParam());
  std::mt19937_64 rng(10);
  double worst_hom = 0, worst_orth = 0;
  for (int t = 0; t < 100; ++t) {
    const SpinElement s1 = random_element(sig, rng), s2 = random_element(sig, rng);
    const Mat2 l12 = covering_map(spin_product(s1, s2));
    worst_hom = std::max(worst_hom, (l12 - covering_map(s1) * covering_map(s2)).max_abs());
    worst_orth = std::max(worst_orth, orthogonality_residual(covering_map(s1), sig));
    EXPECT_NEAR(std::abs(covering_map(s1).det() - 1.0), 0.0, 1e-12);
  }
  EXPECT_LT(worst_hom, 1e-12);
  EXPECT_LT(worst_orth, 1e-12);
}

TEST_P(Signatures, ProductMatchesMatrixProduct) {
  const Signature sig = Signature::from_sign(GetParam());
  const GammaSet g = GammaSet::make(sig);
  std::mt19937_64 rng(11);
  const SpinElement s1 = random_element(sig, rng), s2 = random_element(sig, rng);
  EXPECT_LT((spin_product(s1, s2).matrix(g) - s1.matrix(g) * s2.matrix(g)).max_abs(), 1e-13);
  EXPECT_LT((s1.inverse().matrix(g) * s1.matrix(g) - g.identity).max_abs(), 1e-13);
}

TEST(Clifford, ConstraintViolationThrows) {
  EXPECT_THROW(SpinElement(Signature::euclidean(), 1.0, 0.5), ConstraintError);
  EXPECT_THROW(SpinElement(Signature::lorentzian(), 0.5, 0.0), ConstraintError);
  EXPECT_NO_THROW(SpinElement(Signature::lorentzian(), std::sqrt(2.0), 1.0));
  EXPECT_THROW(Signature::from_sign(0), Error);
}

TEST_P(Signatures, ConnectionFormsAgree) {
  const GammaSet g = GammaSet::make(Signature::from_sign(GetParam()));
  std::mt19937_64 rng(12);
  double worst = 0;
  for (int t = 0; t < 200; ++t) worst = std::max(worst, connection_forms_residual(oracle::random_c(rng) * 10.0, g));
  EXPECT_LT(worst, 1e-13);
}

TEST(Clifford, SpinorHelpers) {
  std::mt19937_64 rng(13);
  const SpinorJet psi = random_spinor(3, rng);
  EXPECT_EQ(order_of(psi), 3);
  EXPECT_EQ(order_of(truncated(psi, 1)), 1);
  const GammaSet g = GammaSet::make(Signature::euclidean());
  const SpinorJet twice = spin2d::apply(Complex(2) * g.identity, psi);
  EXPECT_LT(value_norm(twice - Complex(2) * psi), 1e-15);
  EXPECT_THROW(order_of({Jet(1), Jet(2)}), OrderError);
}
