#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "spin2d/error.hpp"
#include "spin2d/jet.hpp"

using namespace spin2d;

namespace {

Jet random_jet(int order, std::mt19937_64& rng) {
  Jet j(order);
  for (int d = 0; d <= order; ++d)
    for (int i = 0; i <= d; ++i) j.set_coeff(i, d - i, oracle::random_c(rng));
  return j;
}

oracle::Poly to_poly(const Jet& j) {
  const int n = j.order();
  oracle::Poly p(static_cast<std::size_t>(n) + 1, std::vector<oracle::C>(static_cast<std::size_t>(n) + 1, 0.0));
  for (int i = 0; i <= n; ++i)
    for (int k = 0; i + k <= n; ++k) p[i][k] = j.coeff(i, k);
  return p;
}

// value of the truncated polynomial at (x, y) relative to the base point
Complex eval_poly(const Jet& j, Complex x, Complex y) {
  Complex s = 0.0;
  for (int i = 0; i <= j.order(); ++i)
    for (int k = 0; i + k <= j.order(); ++k) s += j.coeff(i, k) * std::pow(x, i) * std::pow(y, k);
  return s;
}

Jet poly(int order, std::initializer_list<std::tuple<int, int, double>> terms) {
  Jet j(order);
  for (auto [i, k, c] : terms) j.set_coeff(i, k, c);
  return j;
}

}  // namespace

TEST(Jets, ProductOfLinearFactors) {
  const Jet a = poly(3, {{0, 0, 1}, {1, 0, 1}}), b = poly(3, {{0, 0, 1}, {0, 1, 1}});
  const Jet p = a * b;
  EXPECT_EQ(p.coeff(0, 0), Complex(1));
  EXPECT_EQ(p.coeff(1, 0), Complex(1));
  EXPECT_EQ(p.coeff(0, 1), Complex(1));
  EXPECT_EQ(p.coeff(1, 1), Complex(1));
  EXPECT_EQ(p.coeff(2, 0), Complex(0));
}

TEST(Jets, ProductTruncatesAboveOrder) {
  const Jet x2 = poly(3, {{2, 0, 1}});
  EXPECT_EQ((x2 * x2).max_abs(), 0.0);
}

TEST(Jets, ProductMatchesDenseMultiply) {
  std::mt19937_64 rng(1);
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const Jet a = random_jet(4, rng), b = random_jet(4, rng);
    const Jet p = a * b;
    const oracle::Poly ref = oracle::dense_mul(to_poly(a), to_poly(b));
    for (int i = 0; i <= 4; ++i)
      for (int k = 0; i + k <= 4; ++k)
        worst = std::max(worst, std::abs(p.coeff(i, k) - ref[i][k]) / std::max(1.0, std::abs(ref[i][k])));
  }
  EXPECT_LT(worst, 1e-13);
}

TEST(Jets, RingAxioms) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 50; ++t) {
    const Jet a = random_jet(4, rng), b = random_jet(4, rng), c = random_jet(4, rng);
    EXPECT_LT(((a * b) * c - a * (b * c)).max_abs(), 1e-13);
    EXPECT_LT((a * (b + c) - (a * b + a * c)).max_abs(), 1e-13);
    EXPECT_LT((a * b - b * a).max_abs(), 1e-14);
  }
}

TEST(Jets, OrderMismatchThrows) {
  EXPECT_THROW(Jet(3) * Jet(4), OrderError);
  EXPECT_THROW(Jet(3) + Jet(2), OrderError);
}

TEST(Jets, GeometricSeries) {
  const Jet r = reciprocal(poly(3, {{0, 0, 1}, {1, 0, -1}}));
  for (int i = 0; i <= 3; ++i) EXPECT_NEAR(std::abs(r.coeff(i, 0) - 1.0), 0.0, 1e-15);
  EXPECT_EQ(reciprocal(Jet::constant(1.0, 0)).value(), Complex(1));
}

TEST(Jets, ReciprocalRoundTrip) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 200; ++t) {
    Jet a = random_jet(4, rng);
    a.set_coeff(0, 0, a.value() + 2.0);
    Jet one = a * reciprocal(a);
    one.set_coeff(0, 0, one.value() - 1.0);
    EXPECT_LT(one.max_abs(), 1e-13);
  }
}

TEST(Jets, ReciprocalOfVanishingConstantIsSingular) {
  EXPECT_THROW(reciprocal(poly(3, {{1, 0, 1}})), SingularError);
}

TEST(Jets, BinomialAndExponentialSeries) {
  const Jet x = Jet::variable(Axis::X, 0.0, 3);
  const Jet s = sqrt(x + 1.0);
  const double ref[] = {1, 0.5, -0.125, 0.0625};
  for (int i = 0; i <= 3; ++i) EXPECT_NEAR(std::abs(s.coeff(i, 0) - ref[i]), 0.0, 1e-15);
  const Jet e = exp(x);
  const double eref[] = {1, 1, 0.5, 1.0 / 6};
  for (int i = 0; i <= 3; ++i) EXPECT_NEAR(std::abs(e.coeff(i, 0) - eref[i]), 0.0, 1e-15);
}

TEST(Jets, PrimitivesMatchFiniteDifferences) {
  std::mt19937_64 rng(4);
  const Jet base = random_jet(4, rng) * 0.5;
  struct Case {
    const char* name;
    Jet (*jet)(const Jet&);
    Complex (*fn)(Complex);
  };
  const Case cases[] = {
      {"sin", [](const Jet& a) { return sin(a); }, [](Complex z) { return std::sin(z); }},
      {"cos", [](const Jet& a) { return cos(a); }, [](Complex z) { return std::cos(z); }},
      {"sinh", [](const Jet& a) { return sinh(a); }, [](Complex z) { return std::sinh(z); }},
      {"cosh", [](const Jet& a) { return cosh(a); }, [](Complex z) { return std::cosh(z); }},
      {"exp", [](const Jet& a) { return exp(a); }, [](Complex z) { return std::exp(z); }},
      {"log", [](const Jet& a) { return log(a + 2.0); }, [](Complex z) { return std::log(z + 2.0); }},
      {"sqrt", [](const Jet& a) { return sqrt(a + 2.0); }, [](Complex z) { return std::sqrt(z + 2.0); }},
  };
  for (const Case& c : cases) {
    const Jet j = c.jet(base);
    const oracle::Fn f = [&](double x, double y) { return c.fn(eval_poly(base, x, y)); };
    EXPECT_NEAR(std::abs(j.value() - f(0, 0)), 0.0, 1e-13) << c.name;
    EXPECT_NEAR(std::abs(j.derivative(1, 0) - oracle::dx(f, 0, 0)), 0.0, 1e-7) << c.name;
    EXPECT_NEAR(std::abs(j.derivative(0, 1) - oracle::dy(f, 0, 0)), 0.0, 1e-7) << c.name;
    EXPECT_NEAR(std::abs(j.derivative(2, 0) - oracle::dxx(f, 0, 0, 1e-2)), 0.0, 1e-6) << c.name;
    EXPECT_NEAR(std::abs(j.derivative(0, 2) - oracle::dyy(f, 0, 0, 1e-2)), 0.0, 1e-6) << c.name;
  }
}

TEST(Jets, SinOfRandomJetAgainstCentralDifferences) {
  std::mt19937_64 rng(5);
  const Jet base = random_jet(4, rng);
  const Jet j = sin(base);
  const oracle::Fn f = [&](double x, double y) { return std::sin(eval_poly(base, x, y)); };
  const double h = 1e-5;
  const Complex fd = (f(h, 0) - f(-h, 0)) / (2 * h);
  EXPECT_LT(std::abs(j.derivative(1, 0) - fd), 1e-8);
}

TEST(Jets, BranchPointsRaiseDomainError) {
  EXPECT_THROW(sqrt(Jet::variable(Axis::X, 0.0, 2)), DomainError);
  EXPECT_THROW(log(Jet::variable(Axis::Y, 0.0, 2)), DomainError);
}

TEST(Jets, PartialDerivatives) {
  const Jet x2y = poly(4, {{2, 1, 1}});
  const Jet d = partial(x2y, Axis::X);
  EXPECT_EQ(d.order(), 3);
  EXPECT_EQ(d.coeff(1, 1), Complex(2));
  EXPECT_EQ(d.max_abs(), 2.0);
  EXPECT_EQ(partial(Jet::constant(3.0, 2), Axis::Y).max_abs(), 0.0);
  EXPECT_THROW(partial(Jet(0), Axis::X), OrderError);
}

TEST(Jets, MixedPartialsCommute) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 20; ++t) {
    const Jet a = random_jet(4, rng);
    const Jet xy = partial(partial(a, Axis::X), Axis::Y), yx = partial(partial(a, Axis::Y), Axis::X);
    for (std::size_t k = 0; k < xy.coeffs().size(); ++k) EXPECT_EQ(xy.coeffs()[k], yx.coeffs()[k]);
  }
}

TEST(Jets, StorageIsExactlyTheTriangle) {
  for (int n = 0; n <= 6; ++n) EXPECT_EQ(Jet(n).coeffs().size(), Jet::size_for(n));
  // reads past the order are zero, writes are errors
  EXPECT_EQ(Jet(2).coeff(2, 1), Complex(0));
  EXPECT_THROW(Jet(2).set_coeff(2, 1, 1.0), OrderError);
}

TEST(Jets, IntegrateGradientRecoversPotential) {
  // f = x^2 y + 3 y^2 at base (0.2, -0.1), as jets
  const Jet x = Jet::variable(Axis::X, 0.2, 4), y = Jet::variable(Axis::Y, -0.1, 4);
  const Jet f = x * x * y + y * y * 3.0;
  const Jet g = integrate_gradient(partial(f, Axis::X), partial(f, Axis::Y), f.value());
  for (std::size_t k = 0; k < f.coeffs().size(); ++k) EXPECT_NEAR(std::abs(g.coeffs()[k] - f.coeffs()[k]), 0.0, 1e-15);
}
