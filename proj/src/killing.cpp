#include "spin2d/killing.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spin2d/error.hpp"

namespace spin2d {

namespace {

Expr zero_expr() { return Expr::constant(0.0); }

// Two-point Hermite rule on Taylor coefficients a_k = f^(k)/k! at both ends:
// int_0^h f = sum_k w_k h^(k+1) (a_k(0) + (-1)^k a_k(h)), exact to degree 2n+1.
// n = 1 is the corrected trapezoid.
const std::array<std::vector<double>, 6> kHermite{{
    {0.5},
    {1.0 / 2, 1.0 / 12},
    {1.0 / 2, 1.0 / 10, 1.0 / 60},
    {1.0 / 2, 3.0 / 28, 1.0 / 42, 1.0 / 280},
    {1.0 / 2, 1.0 / 9, 1.0 / 36, 1.0 / 168, 1.0 / 1260},
    {1.0 / 2, 5.0 / 44, 1.0 / 33, 1.0 / 132, 1.0 / 660, 1.0 / 5544},
}};

using Taylor1 = std::vector<Complex>;

Complex leg(const Taylor1& f0, const Taylor1& f1, double h) {
  const std::vector<double>& w = kHermite[f0.size() - 1];
  Complex sum = 0.0;
  double hp = h;
  for (std::size_t k = 0; k < w.size(); ++k, hp *= h) sum += w[k] * hp * (f0[k] + (k % 2 ? -f1[k] : f1[k]));
  return sum;
}

}  // namespace

KillingData KillingData::zero() {
  KillingData kd;
  kd.e11 = kd.e12 = kd.e22 = zero_expr();
  kd.alpha = {zero_expr(), zero_expr()};
  kd.zeta = {zero_expr(), zero_expr()};
  kd.g = zero_expr();
  return kd;
}

std::array<Jet, 2> eval_pair(const std::array<Expr, 2>& v, Complex x, Complex y, int order) {
  return {v[0].eval_jet(x, y, order), v[1].eval_jet(x, y, order)};
}

Index2<Jet> eval_tensor(const Index2<Expr>& t, Complex x, Complex y, int order) {
  Index2<Jet> out;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) out[a][b] = t[a][b].eval_jet(x, y, order);
  return out;
}

KillingJets killing_jets_at(const KillingData& kd, Complex x, Complex y, int order) {
  KillingJets kj;
  kj.e = eval_tensor(kd.tensor(), x, y, order);
  kj.alpha = eval_pair(kd.alpha, x, y, order);
  kj.zeta = eval_pair(kd.zeta, x, y, order);
  kj.A = kd.A;
  if (kd.g) kj.g = kd.g->eval_jet(x, y, order);
  return kj;
}

Index2<Complex> killing_vector_residual(const std::array<Jet, 2>& v, const GeometryJet& g) {
  const Index2<Jet> grad = frame_gradient_vector(v, g);  // [b][c] = nabla_c v^b
  const Signature& s = g.signature;
  Index2<Complex> out{};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      out[a][b] = 0.5 * (s.eta(a, a) * grad[b][a].value() + s.eta(b, b) * grad[a][b].value());
  return out;
}

Index3<Complex> killing_tensor_residual(const Index2<Jet>& t, const GeometryJet& g) {
  const Index3<Jet> grad = frame_gradient_tensor(t, g);  // [c][a][b] = nabla_c t^ab
  const Signature& s = g.signature;
  auto up = [&](int a, int b, int c) { return s.eta(a, a) * grad[a][b][c].value(); };
  Index3<Complex> out{};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c) out[a][b][c] = (up(a, b, c) + up(b, c, a) + up(c, a, b)) / 3.0;
  return out;
}

double max_norm(const Index2<Complex>& t) {
  double r = 0.0;
  for (const auto& row : t)
    for (const auto& c : row) r = std::max(r, std::abs(c));
  return r;
}

double max_norm(const Index3<Complex>& t) {
  double r = 0.0;
  for (const auto& m : t) r = std::max(r, max_norm(m));
  return r;
}

std::array<Jet, 2> integrability_form(const Index2<Jet>& t, const GeometryJet& g) {
  const int m = std::min({t[0][0].order(), t[0][1].order(), t[1][1].order(), g.ricci_scalar.order()});
  Index2<Jet> rt;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) rt[a][b] = fit(g.ricci_scalar, m) * fit(t[a][b], m);
  const Index3<Jet> grad = frame_gradient_tensor(rt, g);
  const int n = grad[0][0][0].order();
  // nabla^a g = -1/4 nabla_b (R t^ab), then d_mu g = e^a_mu eta_ab nabla^b g
  std::array<Jet, 2> w_up;
  for (int a = 0; a < 2; ++a) w_up[a] = (grad[0][a][0] + grad[1][a][1]) * Complex(-0.25);
  std::array<Jet, 2> w{Jet(n), Jet(n)};
  for (int mu = 0; mu < 2; ++mu)
    for (int a = 0; a < 2; ++a) w[mu] += fit(g.coframe[a][mu], n) * w_up[a] * g.signature.eta(a, a);
  return w;
}

double closedness_residual(const std::array<Jet, 2>& w) {
  return std::abs(w[1].derivative(1, 0) - w[0].derivative(0, 1));
}

ScalarGrid::ScalarGrid(Region region, GridSpec grid) : region_(region), grid_(grid) {
  if (grid.nx < 2 || grid.ny < 2) throw Error("grid must be at least 2x2");
  if (!(region.x_max > region.x_min) || !(region.y_max > region.y_min)) throw Error("degenerate region");
  hx_ = (region.x_max - region.x_min) / (grid.nx - 1);
  hy_ = (region.y_max - region.y_min) / (grid.ny - 1);
  values_.assign(static_cast<std::size_t>(grid.nx) * static_cast<std::size_t>(grid.ny), Complex(0.0));
}

Complex ScalarGrid::interpolate(double x, double y) const {
  const double slack = 1e-12 * std::max(1.0, std::max(std::abs(region_.x_max), std::abs(region_.y_max)));
  if (x < region_.x_min - slack || x > region_.x_max + slack || y < region_.y_min - slack ||
      y > region_.y_max + slack)
    throw DomainError("point (" + std::to_string(x) + ", " + std::to_string(y) + ") lies outside the grid region");
  const double fx = std::clamp((x - region_.x_min) / hx_, 0.0, static_cast<double>(grid_.nx - 1));
  const double fy = std::clamp((y - region_.y_min) / hy_, 0.0, static_cast<double>(grid_.ny - 1));
  const int i = std::min(static_cast<int>(fx), grid_.nx - 2);
  const int j = std::min(static_cast<int>(fy), grid_.ny - 2);
  const double tx = fx - i, ty = fy - j;
  return (1 - tx) * (1 - ty) * at(i, j) + tx * (1 - ty) * at(i + 1, j) + (1 - tx) * ty * at(i, j + 1) +
         tx * ty * at(i + 1, j + 1);
}

IntegrabilityResult integrability_check(const Index2<Expr>& t, const FrameField& frame, Region region, GridSpec grid,
                                        int order, double closed_tol) {
  if (order < 4) throw OrderError("integrability needs frame order >= 4");
  IntegrabilityResult res;
  res.g = ScalarGrid(region, grid);
  ScalarGrid& G = res.g;
  const int nx = grid.nx, ny = grid.ny;
  const std::size_t nodes = static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny);
  std::vector<Taylor1> tx(nodes), ty(nodes);  // Taylor coefficients of w_x along x, w_y along y
  auto node = [nx](int i, int j) { return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx) + i; };

  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const double x = G.x(i), y = G.y(j);
      const GeometryJet geo = geometry_at(frame, x, y, order);
      const auto w = integrability_form(eval_tensor(t, x, y, order - 1), geo);
      const double c = closedness_residual(w);
      if (c > res.closedness || (i == 0 && j == 0)) {
        res.closedness = c;
        res.worst_x = x;
        res.worst_y = y;
      }
      const int n = std::min({w[0].order(), w[1].order(), 5});
      for (int k = 0; k <= n; ++k) {
        tx[node(i, j)].push_back(w[0].coeff(k, 0));
        ty[node(i, j)].push_back(w[1].coeff(0, k));
      }
    }
  if (res.closedness > closed_tol)
    throw IntegrabilityError("integrability one-form is not closed: residual " + std::to_string(res.closedness) +
                                 " at (" + std::to_string(res.worst_x) + ", " + std::to_string(res.worst_y) + ")",
                             res.closedness);

  const double hx = G.hx(), hy = G.hy();
  res.step = std::max(hx, hy);
  auto xleg = [&](int i, int j) { return leg(tx[node(i - 1, j)], tx[node(i, j)], hx); };
  auto yleg = [&](int i, int j) { return leg(ty[node(i, j - 1)], ty[node(i, j)], hy); };

  // leg order x then y
  for (int i = 1; i < nx; ++i) G.at(i, 0) = G.at(i - 1, 0) + xleg(i, 0);
  for (int i = 0; i < nx; ++i)
    for (int j = 1; j < ny; ++j) G.at(i, j) = G.at(i, j - 1) + yleg(i, j);

  // y then x
  ScalarGrid other(region, grid);
  for (int j = 1; j < ny; ++j) other.at(0, j) = other.at(0, j - 1) + yleg(0, j);
  for (int j = 0; j < ny; ++j)
    for (int i = 1; i < nx; ++i) other.at(i, j) = other.at(i - 1, j) + xleg(i, j);

  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) res.path_difference = std::max(res.path_difference, std::abs(G.at(i, j) - other.at(i, j)));

  for (int j = 1; j + 1 < ny; ++j)
    for (int i = 1; i + 1 < nx; ++i) {
      const Complex gx = (G.at(i + 1, j) - G.at(i - 1, j)) / (2 * hx);
      const Complex gy = (G.at(i, j + 1) - G.at(i, j - 1)) / (2 * hy);
      res.fd_residual = std::max({res.fd_residual, std::abs(gx - tx[node(i, j)][0]), std::abs(gy - ty[node(i, j)][0])});
    }
  return res;
}

Jet synthesized_g(const ScalarGrid& g, const std::array<Jet, 2>& w, double x, double y) {
  const int n = std::min(w[0].order(), w[1].order());
  return integrate_gradient(fit(w[0], n), fit(w[1], n), g.interpolate(x, y));
}

}  // namespace spin2d
