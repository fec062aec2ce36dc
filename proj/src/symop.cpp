#include "spin2d/symop.hpp"

#include <algorithm>

#include "spin2d/error.hpp"

namespace spin2d {

namespace {

int min_order(std::initializer_list<int> orders) { return std::min(orders); }

CliffordJet zero_clifford(int order) { return CliffordJet::zero(order); }

}  // namespace

SpinorJet add_fit(const SpinorJet& a, const SpinorJet& b) {
  const int n = std::min(order_of(a), order_of(b));
  return truncated(a, n) + truncated(b, n);
}

SymmetryOperator build_second_order(const KillingJets& kd, const GeometryJet& g) {
  const Signature& s = g.signature;
  if (kd.g.order() < 1) throw OrderError("scalar g needs a jet of order >= 1");

  const Index3<Jet> de = frame_gradient_tensor(kd.e, g);  // [c][a][b] = nabla_c e^ab
  const Index2<Jet> dal = frame_gradient_vector(kd.alpha, g);  // [a][c] = nabla_c alpha^a
  const Index2<Jet> dze = frame_gradient_vector(kd.zeta, g);

  SymmetryOperator K;
  K.order = 2;

  const int ne = min_order({kd.e[0][0].order(), kd.alpha[0].order(), g.order});
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      CliffordJet c = zero_clifford(ne);
      c.scalar = fit(kd.e[a][b], ne);
      c.vec[b] += fit(kd.alpha[a], ne);
      c.vec[a] += fit(kd.alpha[b], ne);
      K.E[a][b] = c;
    }

  const int nf = min_order({de[0][0][0].order(), dal[0][0].order(), kd.zeta[0].order()});
  for (int a = 0; a < 2; ++a) {
    CliffordJet c = zero_clifford(nf);
    c.scalar = fit(kd.zeta[a], nf) + fit(de[0][a][0], nf) + fit(de[1][a][1], nf);
    for (int cc = 0; cc < 2; ++cc) {
      c.vec[cc] = fit(dal[a][cc], nf);
      if (cc == a) c.vec[cc] = c.vec[cc] + kd.A;
    }
    for (int b = 0; b < 2; ++b)
      for (int cc = 0; cc < 2; ++cc) {
        const double w = Signature::epsilon(b, cc) * s.eta(b, b) / 3.0;
        if (w != 0.0) c.pseudo += fit(de[b][a][cc], nf) * w;
      }
    K.F[a] = c;
  }

  const int ng = min_order({kd.g.order(), g.ricci_scalar.order(), dze[0][0].order(), kd.alpha[0].order()});
  CliffordJet G = zero_clifford(ng);
  G.scalar = fit(kd.g, ng);
  for (int b = 0; b < 2; ++b) G.vec[b] = fit(g.ricci_scalar, ng) * fit(kd.alpha[b], ng) * (-0.25 * s.eta(b, b));
  for (int b = 0; b < 2; ++b)
    for (int a = 0; a < 2; ++a) {
      const double w = 0.25 * Signature::epsilon(b, a) * s.eta(b, b);
      if (w != 0.0) G.pseudo += fit(dze[a][b], ng) * w;
    }
  K.G = G;
  return K;
}

SymmetryOperator build_first_order(const std::array<Jet, 2>& zeta, Complex A, const Jet& g_scalar,
                                   const GeometryJet& g) {
  const int n = std::min(zeta[0].order(), zeta[1].order());
  KillingJets kd;
  kd.e = {{{Jet(n), Jet(n)}, {Jet(n), Jet(n)}}};
  kd.alpha = {Jet(n), Jet(n)};
  kd.zeta = zeta;
  kd.A = A;
  kd.g = g_scalar;
  SymmetryOperator K = build_second_order(kd, g);
  K.order = 1;
  for (auto& row : K.E)
    for (auto& c : row) c = zero_clifford(c.order());
  return K;
}

SpinorJet dirac_apply(const SpinorJet& psi, const GeometryJet& g, Complex mass) {
  const auto d = frame_derivative(psi, g);
  const Complex i(0.0, 1.0);
  SpinorJet out = i * spin2d::apply(g.gammas.up[0], d[0]);
  out = add_fit(out, i * spin2d::apply(g.gammas.up[1], d[1]));
  return add_fit(out, (-mass) * psi);
}

SpinorJet operator_apply(const SymmetryOperator& K, const SpinorJet& psi, const GeometryJet& g) {
  if (order_of(psi) < K.order) throw OrderError("spinor jet order below operator order");
  SpinorJet out = K.G.apply(psi, g.gammas);
  const auto d1 = frame_derivative(psi, g);
  for (int a = 0; a < 2; ++a) out = add_fit(out, K.F[a].apply(d1[a], g.gammas));
  if (K.order == 2) {
    const auto d2 = second_sym_derivative(psi, g);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) out = add_fit(out, K.E[a][b].apply(d2[a][b], g.gammas));
  }
  return out;
}

double commutator_residual(const SymmetryOperator& K, const SpinorJet& psi, const GeometryJet& g, Complex mass) {
  const SpinorJet kd = operator_apply(K, dirac_apply(psi, g, mass), g);
  const SpinorJet dk = dirac_apply(operator_apply(K, psi, g), g, mass);
  return value_norm(add_fit(kd, (-1.0) * dk));
}

}  // namespace spin2d
