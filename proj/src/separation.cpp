#include "spin2d/separation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "spin2d/error.hpp"

namespace spin2d {

namespace {

const Complex kI(0.0, 1.0);

Expr paren(const Expr& e) { return Expr::parse("(" + e.to_string() + ")"); }

Expr inv_sqrt_sum(const LiouvilleMetric& m) {
  return Expr::parse("1/sqrt(" + m.A.to_string() + " + " + m.B.to_string() + ")");
}

Expr minus_eta_A(const LiouvilleMetric& m) {
  return m.signature.is_euclidean() ? Expr::parse("-" + m.A.to_string()) : paren(m.A);
}

using Mat2x = std::array<std::array<Complex, 2>, 2>;

// y-system of the Type-I separation: b' = M(y) b.
struct YSystem {
  const LiouvilleMetric* metric;
  FrameField frame;
  Complex lambda, kappa;
  std::array<Complex, 2> c;
  double x;

  template <class T>
  std::array<std::array<T, 2>, 2> matrix(const CoefficientSet<T>& k) const {
    const T offset = k.C2 - k.A2 * kappa;
    return {{{(k.C1 * Complex(-1.0) + lambda) / k.B1, offset * (c[1] / c[0]) / k.B1},
             {offset * (c[0] / c[1]) / k.B1, (k.C1 + lambda) * Complex(-1.0) / k.B1}}};
  }

  CoefficientSet<Jet> jets(double y, int order) const {
    return separation_coefficient_jets(geometry_at(frame, x, y, order));
  }

  Mat2x at(double y) const {
    const CoefficientSet<Jet> j = jets(y, 2);
    CoefficientSet<Complex> v{j.A1.value(), j.A2.value(), j.B1.value(), j.B2.value(), j.C1.value(), j.C2.value()};
    return matrix(v);
  }
};

std::array<Complex, 2> mul(const Mat2x& m, const std::array<Complex, 2>& b) {
  return {m[0][0] * b[0] + m[0][1] * b[1], m[1][0] * b[0] + m[1][1] * b[1]};
}

std::array<Complex, 2> axpy(const std::array<Complex, 2>& b, Complex s, const std::array<Complex, 2>& k) {
  return {b[0] + s * k[0], b[1] + s * k[1]};
}

double mat_norm(const Mat2x& m) {
  double r = 0.0;
  for (const auto& row : m)
    for (const auto& v : row) r = std::max(r, std::abs(v));
  return r;
}

// mu_1 = (kappa A2 - C2) c2 / (R c1), mu_2 = (C2 - kappa A2) c1 / (R c2), R = i B1
std::pair<Complex, Complex> separation_constants(const SeparationCoefficients& k, Complex kappa,
                                                 const std::array<Complex, 2>& c) {
  const Complex r = kI * k.B1;
  return {(kappa * k.A2 - k.C2) * c[1] / (r * c[0]), (k.C2 - kappa * k.A2) * c[0] / (r * c[1])};
}

SeparationCoefficients values(const CoefficientSet<Jet>& j) {
  return {j.A1.value(), j.A2.value(), j.B1.value(), j.B2.value(), j.C1.value(), j.C2.value()};
}

}  // namespace

void LiouvilleMetric::validate() const {
  if (A.empty() || B.empty()) throw Error("Liouville metric needs both A and B");
  if (A.depends_on(Axis::Y)) throw Error("Liouville A must depend on x (u) only: '" + A.to_string() + "'");
  if (B.depends_on(Axis::X)) throw Error("Liouville B must depend on y (v) only: '" + B.to_string() + "'");
}

void check_region(const LiouvilleMetric& m, Region region, GridSpec grid) {
  const ScalarGrid nodes(region, grid);
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i) {
      const Complex s = m.A.eval(nodes.x(i), 0.0) + m.B.eval(0.0, nodes.y(j));
      const bool ok = m.signature.is_euclidean() ? (s.real() > 0.0 && std::abs(s.imag()) < 1e-12)
                                                  : std::abs(s) > 1e-10;
      if (!ok)
        throw DomainError("Liouville factor A + B = " + std::to_string(s.real()) + " not admissible at (" +
                          std::to_string(nodes.x(i)) + ", " + std::to_string(nodes.y(j)) + ")");
    }
}

FrameField liouville_frame(const LiouvilleMetric& m, LiouvilleFrameKind kind) {
  m.validate();
  const Expr f = inv_sqrt_sum(m);
  const Expr zero = Expr::constant(0.0);
  if (kind == LiouvilleFrameKind::Diagonal) return FrameField(m.signature, {{{f, zero}, {zero, f}}});
  const Expr mf = Expr::parse("-" + f.to_string());
  return FrameField(m.signature, {{{zero, f}, {mf, zero}}});
}

Index2<Expr> liouville_killing_tensor(const LiouvilleMetric& m, LiouvilleFrameKind kind) {
  m.validate();
  const Expr zero = Expr::constant(0.0);
  const Expr b = paren(m.B);
  const Expr a = minus_eta_A(m);
  // D5 frame: e_1 ~ d_v, e_2 ~ d_u
  if (kind == LiouvilleFrameKind::D5) return {{{a, zero}, {zero, b}}};
  return {{{b, zero}, {zero, a}}};
}

CoefficientSet<Jet> separation_coefficient_jets(const GeometryJet& g) {
  const Complex k = g.signature.k();
  const double eta = g.signature.sign();
  const FrameJets& e = g.frame;
  const int n = g.spinor_connection[0].order();
  // Gamma_mu = c_mu gamma; i gamma^a e^mu_a c_mu gamma = i c_mu (eta e^mu_1 gamma^2 - e^mu_2 gamma^1)
  Jet s1(n), s2(n);
  for (int mu = 0; mu < 2; ++mu) {
    s1 += g.spinor_connection[mu] * fit(e[mu][0], n);
    s2 += g.spinor_connection[mu] * fit(e[mu][1], n);
  }
  CoefficientSet<Jet> c;
  c.A1 = e[0][0] * kI;
  c.A2 = e[0][1] * (-kI * k);
  c.B1 = e[1][0] * kI;
  c.B2 = e[1][1] * (-kI * k);
  c.C1 = s2 * (-kI);
  c.C2 = s1 * (kI * eta * k);
  return c;
}

SeparationCoefficients separation_coefficients(const FrameField& frame, Complex x, Complex y) {
  return values(separation_coefficient_jets(geometry_at(frame, x, y, 2)));
}

SpinorJet coefficient_form_apply(const CoefficientSet<Jet>& c, const SpinorJet& psi, Complex lambda) {
  const int n = std::min(order_of(psi) - 1, c.C1.order());
  if (n < 0) throw OrderError("coefficient form needs a spinor jet of order >= 1");
  const SpinorJet dx = truncated({partial(psi[0], Axis::X), partial(psi[1], Axis::X)}, n);
  const SpinorJet dy = truncated({partial(psi[0], Axis::Y), partial(psi[1], Axis::Y)}, n);
  const SpinorJet p = truncated(psi, n);
  const Jet A1 = fit(c.A1, n), A2 = fit(c.A2, n), B1 = fit(c.B1, n), B2 = fit(c.B2, n);
  const Jet C1 = fit(c.C1, n), C2 = fit(c.C2, n);
  Jet r0 = A1 * dx[0] + A2 * dx[1] + B1 * dy[0] + B2 * dy[1] + C1 * p[0] - C2 * p[1] - p[0] * lambda;
  Jet r1 = -(A2 * dx[0]) - A1 * dx[1] - B2 * dy[0] - B1 * dy[1] + C2 * p[0] - C1 * p[1] - p[1] * lambda;
  return {r0, r1};
}

D5FormResult d5_dirac_form_check(const LiouvilleMetric& m, const std::vector<std::pair<double, double>>& points,
                                 int jets_per_point, std::uint64_t seed) {
  const FrameField frame = liouville_frame(m, LiouvilleFrameKind::D5);
  const Complex k = m.signature.k();
  const int order = 3;
  std::mt19937_64 rng(seed);
  D5FormResult out;

  for (const auto& [x, y] : points) {
    const GeometryJet geo = geometry_at(frame, x, y, order);
    const Jet R1 = reciprocal(sqrt(m.B.eval_jet(x, y, order)));
    const Jet R1p = partial(R1, Axis::Y);

    auto display = [&](const SpinorJet& psi) {
      const int n = order_of(psi) - 1;
      const Jet r = fit(R1, n), rp = fit(R1p, n);
      const SpinorJet p = truncated(psi, n);
      const Jet dx0 = partial(psi[0], Axis::X), dx1 = partial(psi[1], Axis::X);
      const Jet dy0 = partial(psi[0], Axis::Y), dy1 = partial(psi[1], Axis::Y);
      Jet r0 = r * (dx1 * k + dy0 * kI) + rp * p[0] * (0.5 * kI);
      Jet r1 = r * (dx0 * (-k) - dy1 * kI) - rp * p[1] * (0.5 * kI);
      return SpinorJet{r0, r1};
    };
    auto gap = [&](const SpinorJet& psi) {
      return value_norm(add_fit(dirac_apply(psi, geo, 0.0), (-1.0) * display(psi)));
    };

    for (int t = 0; t < jets_per_point; ++t) {
      const SpinorJet psi = random_spinor(order, rng);
      out.total = std::max(out.total, gap(psi));

      SpinorJet c0 = zero_spinor(order), lx = zero_spinor(order), ly = zero_spinor(order);
      for (int s = 0; s < 2; ++s) {
        c0[s].set_coeff(0, 0, psi[s].coeff(0, 0));
        lx[s].set_coeff(1, 0, psi[s].coeff(1, 0));
        ly[s].set_coeff(0, 1, psi[s].coeff(0, 1));
      }
      out.zero_order = std::max(out.zero_order, gap(c0));
      out.x_derivative = std::max(out.x_derivative, gap(lx));
      out.y_derivative = std::max(out.y_derivative, gap(ly));
    }
  }
  return out;
}

SquareCheckResult d5_square_check(const LiouvilleMetric& m, Region region, GridSpec grid,
                                  const std::vector<std::pair<double, double>>& points, int jets_per_point,
                                  std::uint64_t seed) {
  m.validate();
  if (points.empty()) throw Error("d5_square_check needs at least one point");
  const FrameField frame = liouville_frame(m, LiouvilleFrameKind::D5);
  const Index2<Expr> T = liouville_killing_tensor(m, LiouvilleFrameKind::D5);
  const IntegrabilityResult ir = integrability_check(T, frame, region, grid);
  KillingData kd = KillingData::zero();
  kd.e11 = T[0][0];
  kd.e12 = T[0][1];
  kd.e22 = T[1][1];

  std::mt19937_64 rng(seed);
  SquareCheckResult out;
  bool have_gauge = false;
  for (const auto& [x, y] : points) {
    const GeometryJet geo = geometry_at(frame, x, y, 4);
    KillingJets kj = killing_jets_at(kd, x, y, 3);
    kj.g = synthesized_g(ir.g, integrability_form(eval_tensor(T, x, y, 4), geo), x, y);
    const SymmetryOperator K = build_second_order(kj, geo);
    auto gap = [&](const SpinorJet& psi) {
      const SpinorJet dxx{partial(partial(psi[0], Axis::X), Axis::X), partial(partial(psi[1], Axis::X), Axis::X)};
      return add_fit(operator_apply(K, psi, geo), (-1.0) * dxx);
    };
    if (!have_gauge) {
      SpinorJet one = zero_spinor(4);
      one[0] = one[0] + 1.0;
      out.gauge = gap(one)[0].value();
      have_gauge = true;
    }
    for (int t = 0; t < jets_per_point; ++t) {
      const SpinorJet psi = random_spinor(4, rng);
      const double r = value_norm(add_fit(gap(psi), (-out.gauge) * psi));
      if (r >= out.residual) {
        out.residual = r;
        out.worst_x = x;
        out.worst_y = y;
      }
    }
  }
  return out;
}

std::array<Complex, 2> SeparatedSolution::x_part(Complex x) const {
  const Complex e = std::exp(kappa * x);
  return {c[0] * e, c[1] * e};
}

SeparatedSolution separate_solve(const LiouvilleMetric& m, const SeparationParams& p) {
  m.validate();
  for (double u : {-1.0, 0.0, 0.5, 1.0})
    if (std::abs(m.A.eval(u, 0.0)) > 1e-14) throw ConstraintError("separated solutions need the D5 scheme with A = 0");
  if (std::abs(p.lambda) < 1e-14) throw ConstraintError("lambda must be nonzero");
  if (std::abs(p.c_ratio) < 1e-14) throw ConstraintError("c2 / c1 must be nonzero");
  if (!(p.h > 0.0) || !(p.y_end > p.y_start)) throw StepError("need h > 0 and y_end > y_start");

  const int steps = static_cast<int>(std::ceil((p.y_end - p.y_start) / p.h - 1e-9));
  const double h = (p.y_end - p.y_start) / steps;

  SeparatedSolution s;
  s.lambda = p.lambda;
  s.kappa = p.kappa;
  s.c = {1.0, p.c_ratio};
  s.h = h;

  const YSystem sys{&m, liouville_frame(m, LiouvilleFrameKind::D5), p.lambda, p.kappa, s.c, p.x};
  std::array<Complex, 2> b{1.0, 1.0};
  s.y.reserve(static_cast<std::size_t>(steps) + 1);
  s.b.reserve(static_cast<std::size_t>(steps) + 1);

  const auto [mu1, mu2] = separation_constants(separation_coefficients(sys.frame, p.x, p.y_start), p.kappa, s.c);
  s.mu1 = mu1;
  s.mu2 = mu2;

  for (int n = 0; n <= steps; ++n) {
    const double y = p.y_start + n * h;
    s.y.push_back(y);
    s.b.push_back(b);
    const auto [m1, m2] = separation_constants(separation_coefficients(sys.frame, p.x, y), p.kappa, s.c);
    s.mu_variation = std::max({s.mu_variation, std::abs(m1 - mu1), std::abs(m2 - mu2)});
    if (n == steps) break;

    const Mat2x M0 = sys.at(y), Mh = sys.at(y + 0.5 * h), M1 = sys.at(y + h);
    const double stiff = h * std::max({mat_norm(M0), mat_norm(Mh), mat_norm(M1)});
    if (stiff > 2.0)
      throw StepError("step h = " + std::to_string(h) + " too large near y = " + std::to_string(y) +
                      " (h |M| = " + std::to_string(stiff) + ")");
    const auto k1 = mul(M0, b);
    const auto k2 = mul(Mh, axpy(b, 0.5 * h, k1));
    const auto k3 = mul(Mh, axpy(b, 0.5 * h, k2));
    const auto k4 = mul(M1, axpy(b, h, k3));
    for (int i = 0; i < 2; ++i) b[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    if (std::max(std::abs(b[0]), std::abs(b[1])) > 1e12)
      throw StepError("separated solution blew up near y = " + std::to_string(y + h));
  }
  return s;
}

SeparationDiagnostics diagnose(const SeparatedSolution& s, const LiouvilleMetric& m, double x, int jet_order) {
  if (jet_order < 2) throw OrderError("diagnostics need jet order >= 2");
  const YSystem sys{&m, liouville_frame(m, LiouvilleFrameKind::D5), s.lambda, s.kappa, s.c, x};
  const int P = jet_order;
  const std::size_t nodes = s.y.size();
  SeparationDiagnostics d;
  d.node_discretization.assign(nodes, 0.0);
  const Complex k = m.signature.k();
  d.mu_product_gap = std::abs(s.mu1 * s.mu2 - k * k * s.kappa * s.kappa);

  const Jet xs = Jet::variable(Axis::X, x, P);
  const std::array<Jet, 2> a{exp(xs * s.kappa) * s.c[0], exp(xs * s.kappa) * s.c[1]};

  for (std::size_t n = 0; n < nodes; ++n) {
    const double y = s.y[n];
    const GeometryJet geo = geometry_at(sys.frame, x, y, P);
    const CoefficientSet<Jet> cj = separation_coefficient_jets(geo);
    const int q = P - 1;
    CoefficientSet<Jet> cq{fit(cj.A1, q), fit(cj.A2, q), fit(cj.B1, q), fit(cj.B2, q), fit(cj.C1, q), fit(cj.C2, q)};
    const auto M = sys.matrix(cq);

    // Taylor recursion in y: b_{r+1} = 1/(r+1) sum_j M_j b_{r-j}
    std::vector<std::array<Complex, 2>> bc(static_cast<std::size_t>(P) + 1);
    bc[0] = s.b[n];
    for (int r = 0; r < P; ++r) {
      std::array<Complex, 2> acc{0.0, 0.0};
      for (int j = 0; j <= r; ++j)
        for (int u = 0; u < 2; ++u)
          for (int v = 0; v < 2; ++v) acc[u] += M[u][v].coeff(0, j) * bc[static_cast<std::size_t>(r - j)][v];
      for (int u = 0; u < 2; ++u) bc[static_cast<std::size_t>(r) + 1][u] = acc[u] / static_cast<double>(r + 1);
    }
    SpinorJet bj = zero_spinor(P);
    for (int u = 0; u < 2; ++u)
      for (int r = 0; r <= P; ++r) bj[u].set_coeff(0, r, bc[static_cast<std::size_t>(r)][u]);
    const SpinorJet psi{a[0] * bj[0], a[1] * bj[1]};

    d.dirac_consistency = std::max(d.dirac_consistency, value_norm(dirac_apply(psi, geo, s.lambda)));
    const SpinorJet dxx{partial(partial(psi[0], Axis::X), Axis::X), partial(partial(psi[1], Axis::X), Axis::X)};
    d.k_eigen = std::max(d.k_eigen, value_norm(add_fit(dxx, (-(s.kappa * s.kappa)) * psi)));

    if (n >= 2 && n + 2 < nodes) {
      std::array<Complex, 2> db{};
      for (int u = 0; u < 2; ++u)
        db[u] = (s.b[n - 2][u] - 8.0 * s.b[n - 1][u] + 8.0 * s.b[n + 1][u] - s.b[n + 2][u]) / (12.0 * s.h);
      const SeparationCoefficients c = values(cj);
      const Complex a1 = a[0].value(), a2 = a[1].value();
      const Complex b1 = s.b[n][0], b2 = s.b[n][1];
      const Complex r0 = c.A2 * s.kappa * a2 * b2 + c.B1 * a1 * db[0] + c.C1 * a1 * b1 - c.C2 * a2 * b2 -
                         s.lambda * a1 * b1;
      const Complex r1 = -c.A2 * s.kappa * a1 * b1 - c.B1 * a2 * db[1] + c.C2 * a1 * b1 - c.C1 * a2 * b2 -
                         s.lambda * a2 * b2;
      d.node_discretization[n] = std::max(std::abs(r0), std::abs(r1));
      d.discretization = std::max(d.discretization, d.node_discretization[n]);
    }
  }
  return d;
}

double convergence_ratio(const SeparationDiagnostics& coarse, const SeparationDiagnostics& fine) {
  double c = 0.0, f = 0.0;
  for (std::size_t n = 0; n < coarse.node_discretization.size(); ++n) {
    const std::size_t m = 2 * n;
    if (m >= fine.node_discretization.size()) break;
    if (coarse.node_discretization[n] == 0.0 || fine.node_discretization[m] == 0.0) continue;
    c = std::max(c, coarse.node_discretization[n]);
    f = std::max(f, fine.node_discretization[m]);
  }
  if (f == 0.0) throw Error("no shared interior nodes for the convergence ratio");
  return c / f;
}

std::string solution_csv(const SeparatedSolution& s) {
  std::string out = "y,re_b1,im_b1,re_b2,im_b2\n";
  char buf[160];
  for (std::size_t n = 0; n < s.y.size(); ++n) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", s.y[n], s.b[n][0].real(), s.b[n][0].imag(),
                  s.b[n][1].real(), s.b[n][1].imag());
    out += buf;
  }
  return out;
}

FrameField minkowski_complex_frame() {
  return FrameField(Signature::lorentzian(),
                    {{{Expr::parse("i/2"), Expr::parse("1/2")}, {Expr::parse("-1/2"), Expr::parse("-i/2")}}},
                    true);
}

SpinorJet z_form_apply(const SpinorJet& psi) {
  auto dz = [](const Jet& f) { return (partial(f, Axis::X) - partial(f, Axis::Y) * kI) * 0.5; };
  auto dzb = [](const Jet& f) { return (partial(f, Axis::X) + partial(f, Axis::Y) * kI) * 0.5; };
  return {dzb(psi[0]) * kI - dz(psi[1]), dz(psi[0]) - dzb(psi[1]) * kI};
}

double minkowski_form_check(int jets, Complex mass, std::uint64_t seed) {
  const FrameField frame = minkowski_complex_frame();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double res = 0.0;
  for (int t = 0; t < jets; ++t) {
    const double x = u(rng), y = u(rng);
    const GeometryJet geo = geometry_at(frame, x, y, 3);
    const SpinorJet psi = random_spinor(3, rng);
    const SpinorJet general = dirac_apply(psi, geo, mass);
    const SpinorJet display = add_fit(kI * z_form_apply(psi), (-mass) * psi);
    res = std::max(res, value_norm(add_fit(general, (-1.0) * display)));
  }
  return res;
}

double minkowski_family_check(Complex p, Complex lambda, Complex x, Complex y, int order) {
  if (std::abs(p) < 1e-14) throw ConstraintError("p must be nonzero");
  const Complex q = std::sqrt(-lambda * lambda - p * p);
  const Complex c1 = 1.0, c2 = (kI * q - lambda) / p;
  const Jet X = Jet::variable(Axis::X, x, order), Y = Jet::variable(Axis::Y, y, order);
  const Jet e = exp((X + Y * kI) * p + (X - Y * kI) * q);
  const SpinorJet psi{e * c1, e * c2};
  return value_norm(add_fit(z_form_apply(psi), (-lambda) * psi));
}

double minkowski_commuting_check(int jets, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto dz2 = [](const SpinorJet& s) {
    auto dz = [](const Jet& f) { return (partial(f, Axis::X) - partial(f, Axis::Y) * kI) * 0.5; };
    return SpinorJet{dz(dz(s[0])), dz(dz(s[1]))};
  };
  auto dzb2 = [](const SpinorJet& s) {
    auto dzb = [](const Jet& f) { return (partial(f, Axis::X) + partial(f, Axis::Y) * kI) * 0.5; };
    return SpinorJet{dzb(dzb(s[0])), dzb(dzb(s[1]))};
  };
  double res = 0.0;
  for (int t = 0; t < jets; ++t) {
    const SpinorJet psi = random_spinor(4, rng);
    res = std::max(res, value_norm(add_fit(dz2(z_form_apply(psi)), (-1.0) * z_form_apply(dz2(psi)))));
    res = std::max(res, value_norm(add_fit(dzb2(z_form_apply(psi)), (-1.0) * z_form_apply(dzb2(psi)))));
  }
  return res;
}

std::pair<double, double> hj_momenta_identities(Complex px, Complex py) {
  const Complex H = 0.5 * (px * px - py * py);
  const Complex L = px * py;
  const Complex P = 0.5 * (px - kI * py), Pb = 0.5 * (px + kI * py);
  return {std::abs(H - (P * P + Pb * Pb)), std::abs(L - kI * (P * P - Pb * Pb))};
}

}  // namespace spin2d
