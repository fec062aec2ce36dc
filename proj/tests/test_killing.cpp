#include <gtest/gtest.h>

#include <functional>

#include "oracles.hpp"
#include "spin2d/error.hpp"
#include "spin2d/killing.hpp"
#include "spin2d/separation.hpp"

using namespace spin2d;

namespace {

FrameField frame_of(Signature sig, const char* e11, const char* e12, const char* e21, const char* e22) {
  return FrameField(sig, {{{Expr::parse(e11), Expr::parse(e12)}, {Expr::parse(e21), Expr::parse(e22)}}});
}

oracle::FrameOracle oracle_of(const FrameField& f) {
  return {[f](double x, double y) {
            oracle::M2 m;
            for (int mu = 0; mu < 2; ++mu)
              for (int a = 0; a < 2; ++a) m[mu][a] = f.components()[mu][a].eval(x, y);
            return m;
          },
          f.signature().sign()};
}

std::array<Expr, 2> pair_of(const char* a, const char* b) { return {Expr::parse(a), Expr::parse(b)}; }

// coordinate components K^{mu nu} = e^mu_a e^nu_b t^ab
oracle::M2 coordinate_tensor(const FrameField& f, const Index2<Expr>& t, double x, double y) {
  oracle::M2 K{};
  for (int m = 0; m < 2; ++m)
    for (int n = 0; n < 2; ++n)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          K[m][n] += f.components()[m][a].eval(x, y) * f.components()[n][b].eval(x, y) * t[a][b].eval(x, y);
  return K;
}

// Poisson bracket {H, K} with H = g^{mu nu} p p / 2, K = K^{mu nu} p p, by finite differences.
double poisson_bracket(const FrameField& f, const Index2<Expr>& t, double x, double y, double px, double py) {
  const oracle::FrameOracle o = oracle_of(f);
  auto quad = [&](const oracle::M2& m, double a, double b) { return m[0][0] * a * a + 2.0 * m[0][1] * a * b + m[1][1] * b * b; };
  auto H = [&](double u, double v, double a, double b) { return 0.5 * quad(oracle::inverse(o.metric(u, v)), a, b); };
  auto K = [&](double u, double v, double a, double b) { return quad(coordinate_tensor(f, t, u, v), a, b); };
  const double h = 1e-4;
  auto d = [&](auto F, int which) {
    double s[4] = {x, y, px, py};
    auto at = [&](double off) {
      double q[4] = {s[0], s[1], s[2], s[3]};
      q[which] += off;
      return F(q[0], q[1], q[2], q[3]);
    };
    return (at(-2 * h) - 8.0 * at(-h) + 8.0 * at(h) - at(2 * h)) / (12 * h);
  };
  const oracle::C b = d(H, 0) * d(K, 2) + d(H, 1) * d(K, 3) - d(H, 2) * d(K, 0) - d(H, 3) * d(K, 1);
  return std::abs(b);
}

struct LiouvilleCase {
  Signature sig;
  const char* A;
  const char* B;
};

const LiouvilleCase kLiouville[] = {
    {Signature::euclidean(), "x^2 + 1", "y^2 + 2"},
    {Signature::euclidean(), "cosh(x)", "2 + sin(y)"},
    {Signature::euclidean(), "0", "y^2 + 2"},
    {Signature::lorentzian(), "x^2 + 1", "y^2 + 3"},
    {Signature::lorentzian(), "cosh(x)", "3 + sin(y)"},
    {Signature::lorentzian(), "0", "y^2 + 2"},
};

}  // namespace

TEST(Killing, RotationIsKillingOnFlatAndSphere) {
  const FrameField flat = frame_of(Signature::euclidean(), "1", "0", "0", "1");
  const FrameField sphere = frame_of(Signature::euclidean(), "(1 + x^2 + y^2)/2", "0", "0", "(1 + x^2 + y^2)/2");
  for (auto [x, y] : {std::pair{0.3, -0.2}, {-0.5, 0.7}}) {
    const GeometryJet gf = geometry_at(flat, x, y, 4);
    EXPECT_LT(max_norm(killing_vector_residual(eval_pair(pair_of("-y", "x"), x, y, 3), gf)), 1e-14);
    // frame components of the coordinate rotation on the sphere: e^a_mu v^mu
    const GeometryJet gs = geometry_at(sphere, x, y, 4);
    const auto v = eval_pair(pair_of("-2*y/(1 + x^2 + y^2)", "2*x/(1 + x^2 + y^2)"), x, y, 3);
    EXPECT_LT(max_norm(killing_vector_residual(v, gs)), 1e-13);
  }
}

TEST(Killing, RotationLieDerivativeOracle) {
  // L_v g = 0 for v = (-y, x) on the sphere metric, from finite differences only
  const oracle::FrameOracle o =
      oracle_of(frame_of(Signature::euclidean(), "(1 + x^2 + y^2)/2", "0", "0", "(1 + x^2 + y^2)/2"));
  const double x = 0.3, y = -0.4;
  const std::array<oracle::Fn, 2> v = {[](double, double b) { return oracle::C(-b); },
                                       [](double a, double) { return oracle::C(a); }};
  for (int m = 0; m < 2; ++m)
    for (int n = 0; n < 2; ++n) {
      oracle::C L = 0.0;
      for (int l = 0; l < 2; ++l) {
        L += v[l](x, y) * oracle::d([&](double a, double b) { return o.metric(a, b)[m][n]; }, l, x, y);
        L += o.metric(x, y)[l][n] * oracle::d(v[l], m, x, y) + o.metric(x, y)[m][l] * oracle::d(v[l], n, x, y);
      }
      EXPECT_LT(std::abs(L), 1e-9);
    }
}

TEST(Killing, DilationIsNotKilling) {
  const FrameField flat = frame_of(Signature::euclidean(), "1", "0", "0", "1");
  const GeometryJet g = geometry_at(flat, 0.1, 0.2, 4);
  EXPECT_NEAR(max_norm(killing_vector_residual(eval_pair(pair_of("x", "y"), 0.1, 0.2, 3), g)), 1.0, 1e-14);
}

TEST(Killing, BoostIsKillingInMinkowski) {
  const FrameField flat = frame_of(Signature::lorentzian(), "1", "0", "0", "1");
  const GeometryJet g = geometry_at(flat, 0.4, -0.1, 4);
  EXPECT_LT(max_norm(killing_vector_residual(eval_pair(pair_of("y", "x"), 0.4, -0.1, 3), g)), 1e-14);
  EXPECT_GT(max_norm(killing_vector_residual(eval_pair(pair_of("-y", "x"), 0.4, -0.1, 3), g)), 0.5);
}

TEST(Killing, MetricIsAKillingTensor) {
  for (int sign : {1, -1}) {
    const Signature sig = Signature::from_sign(sign);
    const FrameField f = frame_of(sig, "1 + 0.1*x^2", "0.3*y", "0.2*sin(x)", "1.5 + 0.1*y^2");
    const Index2<Expr> eta = {{{Expr::parse("1"), Expr::parse("0")}, {Expr::parse("0"), Expr::constant(double(sign))}}};
    for (auto [x, y] : {std::pair{0.2, 0.3}, {-0.4, 0.1}}) {
      const GeometryJet g = geometry_at(f, x, y, 4);
      EXPECT_LT(max_norm(killing_tensor_residual(eval_tensor(eta, x, y, 3), g)), 1e-12);
    }
  }
}

TEST(Killing, LiouvilleTensorsInBothFrames) {
  for (const LiouvilleCase& c : kLiouville)
    for (LiouvilleFrameKind kind : {LiouvilleFrameKind::D5, LiouvilleFrameKind::Diagonal}) {
      const LiouvilleMetric m{c.sig, Expr::parse(c.A), Expr::parse(c.B)};
      const FrameField f = liouville_frame(m, kind);
      const Index2<Expr> t = liouville_killing_tensor(m, kind);
      Index2<Expr> bent = t;
      bent[0][0] = Expr::parse("(" + t[0][0].to_string() + ") + 0.1*x");
      for (auto [x, y] : {std::pair{0.2, 0.3}, {-0.6, -0.5}, {0.9, 0.0}}) {
        const GeometryJet g = geometry_at(f, x, y, 4);
        EXPECT_LT(max_norm(killing_tensor_residual(eval_tensor(t, x, y, 3), g)), 1e-9) << c.A << " " << c.B;
        EXPECT_GT(max_norm(killing_tensor_residual(eval_tensor(bent, x, y, 3), g)), 1e-3);
        // independent: the quadratic integral Poisson-commutes with the geodesic Hamiltonian
        EXPECT_LT(poisson_bracket(f, t, x, y, 0.7, -0.4), 1e-8) << c.A << " " << c.B;
      }
    }
}

TEST(Killing, PoissonOracleSeesThePerturbation) {
  const LiouvilleMetric m{Signature::euclidean(), Expr::parse("x^2 + 1"), Expr::parse("y^2 + 2")};
  const FrameField f = liouville_frame(m, LiouvilleFrameKind::Diagonal);
  Index2<Expr> t = liouville_killing_tensor(m, LiouvilleFrameKind::Diagonal);
  t[0][0] = Expr::parse("(" + t[0][0].to_string() + ") + 0.1*x");
  EXPECT_GT(poisson_bracket(f, t, 0.2, 0.3, 0.7, -0.4), 1e-3);
}

namespace {

// w_mu = -1/4 g_{mu al} nabla_b (R K^{al b}) with R from the conformal formula
std::array<oracle::C, 2> integrability_oracle(const FrameField& f, const Index2<Expr>& t, const char* B, double x,
                                              double y) {
  const oracle::FrameOracle o = oracle_of(f);
  const Expr Bx = Expr::parse(B);
  auto R = [&](double u, double v) {
    const oracle::M2 g = o.metric(u, v);
    const oracle::C cf = Bx.eval(u, v);
    const double s1 = std::real(g[0][0] / cf), s2 = std::real(g[1][1] / cf);
    const oracle::Fn phi = [&](double a, double b) { return 0.5 * std::log(Bx.eval(a, b)); };
    return -2.0 / cf * (s1 * oracle::dxx(phi, u, v, 1e-3) + s2 * oracle::dyy(phi, u, v, 1e-3));
  };
  auto RK = [&](double u, double v) {
    oracle::M2 k = coordinate_tensor(f, t, u, v);
    const oracle::C r = R(u, v);
    for (auto& row : k)
      for (auto& e : row) e *= r;
    return k;
  };
  const auto G = o.christoffel(x, y);
  const oracle::M2 rk = RK(x, y);
  std::array<oracle::C, 2> div{};
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      div[a] += oracle::d([&](double u, double v) { return RK(u, v)[a][b]; }, b, x, y, 1e-2);
      for (int l = 0; l < 2; ++l) div[a] += G[a][b][l] * rk[l][b] + G[b][b][l] * rk[a][l];
    }
  }
  const oracle::M2 g = o.metric(x, y);
  return {-0.25 * (g[0][0] * div[0] + g[0][1] * div[1]), -0.25 * (g[1][0] * div[0] + g[1][1] * div[1])};
}

}  // namespace

TEST(Killing, IntegrabilityFormAgainstOracle) {
  for (Signature sig : {Signature::euclidean(), Signature::lorentzian()})
    for (LiouvilleFrameKind kind : {LiouvilleFrameKind::D5, LiouvilleFrameKind::Diagonal}) {
      const LiouvilleMetric m{sig, Expr::parse("0"), Expr::parse("y^2 + 2")};
      const FrameField f = liouville_frame(m, kind);
      const Index2<Expr> t = liouville_killing_tensor(m, kind);
      for (auto [x, y] : {std::pair{0.2, 0.3}, {-0.4, -0.7}}) {
        const auto w = integrability_form(eval_tensor(t, x, y, 6), geometry_at(f, x, y, 7));
        const auto ref = integrability_oracle(f, t, "y^2 + 2", x, y);
        EXPECT_LT(closedness_residual(w), 1e-12);
        EXPECT_NEAR(std::abs(w[0].value() - ref[0]), 0.0, 1e-6) << sig.name();
        EXPECT_NEAR(std::abs(w[1].value() - ref[1]), 0.0, 1e-6) << sig.name();
        EXPECT_GT(std::abs(w[1].value()), 1e-2);  // not trivially zero
      }
    }
}

TEST(Killing, IntegrabilityOnGrids) {
  const Region region{-1, 1, -1, 1};
  for (Signature sig : {Signature::euclidean(), Signature::lorentzian()}) {
    const LiouvilleMetric m{sig, Expr::parse("0"), Expr::parse("y^2 + 2")};
    for (LiouvilleFrameKind kind : {LiouvilleFrameKind::D5, LiouvilleFrameKind::Diagonal}) {
      const IntegrabilityResult r =
          integrability_check(liouville_killing_tensor(m, kind), liouville_frame(m, kind), region, {9, 9});
      EXPECT_LT(r.closedness, 1e-6);
      EXPECT_LT(r.path_difference, 1e-6);
      EXPECT_LE(r.fd_residual, 10 * r.step * r.step);
      EXPECT_EQ(r.g.at(0, 0), Complex(0));
    }
  }
}

TEST(Killing, NonconstantAIsNotIntegrable) {
  const LiouvilleMetric m{Signature::euclidean(), Expr::parse("x^2"), Expr::parse("y^2 + 2")};
  const Region region{0.2, 1, 0.2, 1};
  EXPECT_THROW(integrability_check(liouville_killing_tensor(m, LiouvilleFrameKind::Diagonal),
                                   liouville_frame(m, LiouvilleFrameKind::Diagonal), region, {5, 5}),
               IntegrabilityError);
}

namespace {

oracle::C adaptive_simpson(const std::function<oracle::C(double)>& f, double a, double b, double tol, int depth = 0) {
  const double c = 0.5 * (a + b);
  auto simpson = [&](double l, double r) { return (r - l) / 6.0 * (f(l) + 4.0 * f(0.5 * (l + r)) + f(r)); };
  const oracle::C whole = simpson(a, b), left = simpson(a, c), right = simpson(c, b);
  if (depth > 20 || std::abs(left + right - whole) < 15 * tol) return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, a, c, tol / 2, depth + 1) + adaptive_simpson(f, c, b, tol / 2, depth + 1);
}

}  // namespace

TEST(Killing, QuadratureAgainstAdaptiveSimpson) {
  const LiouvilleMetric m{Signature::lorentzian(), Expr::parse("0"), Expr::parse("y^2 + 2")};
  const FrameField f = liouville_frame(m, LiouvilleFrameKind::D5);
  const Index2<Expr> t = liouville_killing_tensor(m, LiouvilleFrameKind::D5);
  const Region region{-1, 1, -1, 1};
  const IntegrabilityResult r = integrability_check(t, f, region, {5, 5});
  auto w = [&](int mu, double x, double y) {
    return integrability_form(eval_tensor(t, x, y, 3), geometry_at(f, x, y, 4))[mu].value();
  };
  // g(x, y) = int_{-1}^{x} w_x(s, -1) ds + int_{-1}^{y} w_y(x, s) ds
  for (auto [i, j] : {std::pair{4, 4}, {2, 3}, {0, 4}}) {
    const double x = r.g.x(i), y = r.g.y(j);
    const oracle::C ref = adaptive_simpson([&](double s) { return w(0, s, -1.0); }, -1.0, x, 1e-12) +
                          adaptive_simpson([&](double s) { return w(1, x, s); }, -1.0, y, 1e-12);
    EXPECT_NEAR(std::abs(r.g.at(i, j) - ref), 0.0, 1e-7);
  }
}

TEST(Killing, SynthesizedGJet) {
  const LiouvilleMetric m{Signature::euclidean(), Expr::parse("0"), Expr::parse("y^2 + 2")};
  const FrameField f = liouville_frame(m, LiouvilleFrameKind::Diagonal);
  const Index2<Expr> t = liouville_killing_tensor(m, LiouvilleFrameKind::Diagonal);
  const IntegrabilityResult r = integrability_check(t, f, {-1, 1, -1, 1}, {5, 5});
  const auto w = integrability_form(eval_tensor(t, 0.5, 0.0, 4), geometry_at(f, 0.5, 0.0, 5));
  const Jet g = synthesized_g(r.g, w, 0.5, 0.0);
  EXPECT_EQ(g.value(), r.g.at(3, 2));
  EXPECT_EQ(g.derivative(1, 0), w[0].value());
  EXPECT_EQ(g.derivative(0, 1), w[1].value());
  EXPECT_THROW(r.g.interpolate(1.5, 0.0), DomainError);
}

TEST(Killing, GridValidation) {
  EXPECT_THROW(ScalarGrid({0, 1, 0, 1}, {1, 3}), Error);
  EXPECT_THROW(ScalarGrid({1, 1, 0, 1}, {3, 3}), Error);
}
