// Independent reference computations for the unit tests: dense polynomial
// algebra and finite differences on plain complex-valued functions. Nothing
// here uses jets.
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

using C = std::complex<double>;
using Fn = std::function<C(double, double)>;

// p[i][j] = coefficient of x^i y^j
using Poly = std::vector<std::vector<C>>;

inline Poly dense_mul(const Poly& a, const Poly& b) {
  const std::size_t n = a.size() + b.size() - 1;
  Poly out(n, std::vector<C>(n, 0.0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j)
      for (std::size_t k = 0; k < b.size(); ++k)
        for (std::size_t l = 0; l < b[k].size(); ++l) out[i + k][j + l] += a[i][j] * b[k][l];
  return out;
}

// fourth-order central differences
inline C dx(const Fn& f, double x, double y, double h = 1e-3) {
  return (f(x - 2 * h, y) - 8.0 * f(x - h, y) + 8.0 * f(x + h, y) - f(x + 2 * h, y)) / (12 * h);
}
inline C dy(const Fn& f, double x, double y, double h = 1e-3) {
  return (f(x, y - 2 * h) - 8.0 * f(x, y - h) + 8.0 * f(x, y + h) - f(x, y + 2 * h)) / (12 * h);
}
inline C d(const Fn& f, int axis, double x, double y, double h = 1e-3) {
  return axis == 0 ? dx(f, x, y, h) : dy(f, x, y, h);
}
inline C dxx(const Fn& f, double x, double y, double h = 1e-3) {
  return (-f(x - 2 * h, y) + 16.0 * f(x - h, y) - 30.0 * f(x, y) + 16.0 * f(x + h, y) - f(x + 2 * h, y)) /
         (12 * h * h);
}
inline C dyy(const Fn& f, double x, double y, double h = 1e-3) {
  return (-f(x, y - 2 * h) + 16.0 * f(x, y - h) - 30.0 * f(x, y) + 16.0 * f(x, y + h) - f(x, y + 2 * h)) /
         (12 * h * h);
}

using M2 = std::array<std::array<C, 2>, 2>;

inline M2 inverse(const M2& m) {
  const C det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
  return {{{m[1][1] / det, -m[0][1] / det}, {-m[1][0] / det, m[0][0] / det}}};
}

// Frame given as E(x, y)[mu][a] = e^mu_a; eta = diag(1, sign).
struct FrameOracle {
  std::function<M2(double, double)> E;
  int sign = 1;

  double eta(int a) const { return a == 0 ? 1.0 : sign; }

  M2 coframe(double x, double y) const { return inverse(E(x, y)); }  // [a][mu]

  M2 metric(double x, double y) const {
    const M2 e = coframe(x, y);
    M2 g{};
    for (int m = 0; m < 2; ++m)
      for (int n = 0; n < 2; ++n)
        for (int a = 0; a < 2; ++a) g[m][n] += e[a][m] * eta(a) * e[a][n];
    return g;
  }

  // Gamma^al_{be mu} from finite differences of the metric
  std::array<M2, 2> christoffel(double x, double y) const {
    std::array<M2, 2> dg{};  // dg[l][m][n] = d_l g_mn
    for (int l = 0; l < 2; ++l)
      for (int m = 0; m < 2; ++m)
        for (int n = 0; n < 2; ++n)
          dg[l][m][n] = d([&](double u, double v) { return metric(u, v)[m][n]; }, l, x, y);
    const M2 gi = inverse(metric(x, y));
    std::array<M2, 2> G{};
    for (int al = 0; al < 2; ++al)
      for (int be = 0; be < 2; ++be)
        for (int mu = 0; mu < 2; ++mu)
          for (int la = 0; la < 2; ++la)
            G[al][be][mu] += 0.5 * gi[al][la] * (dg[be][la][mu] + dg[mu][la][be] - dg[la][be][mu]);
    return G;
  }

  // Gamma^{12}_mu = e^1_al (Gamma^al_{be mu} e^{2 be} + d_mu e^al_c eta^{c2})
  std::array<C, 2> spin_connection_12(double x, double y) const {
    const M2 e = E(x, y), co = coframe(x, y);
    const auto G = christoffel(x, y);
    std::array<C, 2> out{};
    for (int mu = 0; mu < 2; ++mu)
      for (int al = 0; al < 2; ++al) {
        C inner = 0.0;
        for (int be = 0; be < 2; ++be) inner += G[al][be][mu] * eta(1) * e[be][1];
        inner += eta(1) * d([&](double u, double v) { return E(u, v)[al][1]; }, mu, x, y);
        out[mu] += co[0][al] * inner;
      }
    return out;
  }
};

inline C random_c(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double re = u(rng);
  return {re, u(rng)};
}

}  // namespace oracle
