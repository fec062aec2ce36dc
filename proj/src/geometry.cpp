#include "spin2d/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spin2d/error.hpp"

namespace spin2d {

namespace {

constexpr double kDegenerateTol = 1e-10;
constexpr double kRealTol = 1e-12;

constexpr Axis kAxes[2] = {Axis::X, Axis::Y};

Index2<Jet> zeros2(int order) {
  return {{{Jet(order), Jet(order)}, {Jet(order), Jet(order)}}};
}

Index3<Jet> zeros3(int order) { return {zeros2(order), zeros2(order)}; }

SpinorJet scaled(const Jet& f, const SpinorJet& psi) {
  const int n = std::min(f.order(), order_of(psi));
  return fit(f, n) * truncated(psi, n);
}

std::size_t flat_index(std::initializer_list<int> idx) {
  std::size_t k = 0;
  for (int i : idx) k = 2 * k + static_cast<std::size_t>(i);
  return k;
}

}  // namespace

FrameField::FrameField(Signature sig, Index2<Expr> e, bool allow_complex)
    : sig_(sig), e_(std::move(e)), allow_complex_(allow_complex) {
  for (const auto& row : e_)
    for (const auto& c : row)
      if (c.empty()) throw Error("frame component expression is empty");
}

FrameJets FrameField::jets_at(Complex x, Complex y, int order) const {
  FrameJets jets;
  for (int mu = 0; mu < 2; ++mu)
    for (int a = 0; a < 2; ++a) {
      Jet j = e_[mu][a].eval_jet(x, y, order);
      if (!allow_complex_) {
        for (const auto& c : j.coeffs())
          if (std::abs(c.imag()) > kRealTol * std::max(1.0, std::abs(c.real())))
            throw DomainError("frame component e^" + std::to_string(mu + 1) + "_" + std::to_string(a + 1) +
                              " = '" + e_[mu][a].to_string() + "' is not real at the evaluation point");
      }
      jets[mu][a] = std::move(j);
    }
  return jets;
}

GeometryJet geometry_at(const FrameField& frame, Complex x, Complex y, int order) {
  return geometry_from_jets(frame.signature(), frame.jets_at(x, y, order), order);
}

GeometryJet geometry_from_jets(Signature sig, const FrameJets& frame, int order) {
  if (order < 2) throw OrderError("geometry needs frame jets of order >= 2");
  GeometryJet g{sig, GammaSet::make(sig), order, {}, {}, {}, {}, {}, {}, {}, Jet(0)};
  const int n = order;
  for (int mu = 0; mu < 2; ++mu)
    for (int a = 0; a < 2; ++a) g.frame[mu][a] = fit(frame[mu][a], n);

  const Jet det = g.frame[0][0] * g.frame[1][1] - g.frame[0][1] * g.frame[1][0];
  if (std::abs(det.value()) <= kDegenerateTol)
    throw SingularError("degenerate spin frame: |det e| = " + std::to_string(std::abs(det.value())));
  const Jet inv_det = reciprocal(det);
  g.coframe[0][0] = g.frame[1][1] * inv_det;
  g.coframe[0][1] = -(g.frame[0][1] * inv_det);
  g.coframe[1][0] = -(g.frame[1][0] * inv_det);
  g.coframe[1][1] = g.frame[0][0] * inv_det;

  for (int mu = 0; mu < 2; ++mu)
    for (int nu = 0; nu < 2; ++nu) {
      Jet gm(n), gi(n);
      for (int a = 0; a < 2; ++a) {
        gm += g.coframe[a][mu] * g.coframe[a][nu] * sig.eta(a, a);
        gi += g.frame[mu][a] * g.frame[nu][a] * sig.eta(a, a);
      }
      g.metric[mu][nu] = std::move(gm);
      g.inv_metric[mu][nu] = std::move(gi);
    }

  // Levi-Civita connection.
  const int n1 = n - 1;
  Index3<Jet> dmetric;  // dmetric[l][mu][nu] = d_l g_mu nu
  for (int l = 0; l < 2; ++l)
    for (int mu = 0; mu < 2; ++mu)
      for (int nu = 0; nu < 2; ++nu) dmetric[l][mu][nu] = partial(g.metric[mu][nu], kAxes[l]);
  g.christoffel = zeros3(n1);
  for (int al = 0; al < 2; ++al)
    for (int be = 0; be < 2; ++be)
      for (int mu = 0; mu < 2; ++mu) {
        Jet acc(n1);
        for (int la = 0; la < 2; ++la)
          acc += fit(g.inv_metric[al][la], n1) * (dmetric[be][la][mu] + dmetric[mu][la][be] - dmetric[la][be][mu]);
        g.christoffel[al][be][mu] = acc * 0.5;
      }

  // Gamma^{ab}_mu = e^a_alpha (Gamma^alpha_{beta mu} e^{b beta} + d_mu e^alpha_c eta^{cb})
  g.spin_connection = zeros3(n1);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int mu = 0; mu < 2; ++mu) {
        Jet acc(n1);
        for (int al = 0; al < 2; ++al) {
          Jet inner = partial(g.frame[al][b], kAxes[mu]);
          for (int be = 0; be < 2; ++be) inner += g.christoffel[al][be][mu] * fit(g.frame[be][b], n1);
          acc += fit(g.coframe[a][al], n1) * inner;
        }
        g.spin_connection[a][b][mu] = acc * sig.eta(b, b);
      }
  for (int mu = 0; mu < 2; ++mu) {
    Jet acc(n1);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) acc += g.spin_connection[a][b][mu] * Signature::epsilon(a, b);
    g.spinor_connection[mu] = acc * 0.25;
  }

  // R^al_{be mu nu} = d_mu Gamma^al_{be nu} - d_nu Gamma^al_{be mu}
  //                 + Gamma^al_{si mu} Gamma^si_{be nu} - Gamma^al_{si nu} Gamma^si_{be mu}
  // R = g^{be nu} R^mu_{be mu nu}
  const int n2 = n - 2;
  Jet ricci(n2);
  for (int be = 0; be < 2; ++be)
    for (int nu = 0; nu < 2; ++nu) {
      Jet ric(n2);  // R_{be nu} = R^mu_{be mu nu}
      for (int mu = 0; mu < 2; ++mu) {
        Jet r = partial(g.christoffel[mu][be][nu], kAxes[mu]) - partial(g.christoffel[mu][be][mu], kAxes[nu]);
        for (int si = 0; si < 2; ++si)
          r += fit(g.christoffel[mu][si][mu] * g.christoffel[si][be][nu] -
                       g.christoffel[mu][si][nu] * g.christoffel[si][be][mu],
                   n2);
        ric += r;
      }
      ricci += fit(g.inv_metric[be][nu], n2) * ric;
    }
  g.ricci_scalar = std::move(ricci);
  return g;
}

const SpinorJet& SpinorTensor::at(std::initializer_list<int> idx) const {
  if (static_cast<int>(idx.size()) != rank) throw Error("spinor tensor index rank mismatch");
  return comps[flat_index(idx)];
}

SpinorTensor covariant_gradient(const SpinorTensor& t, const GeometryJet& g) {
  const int p = t.order();
  if (p < 1) throw OrderError("covariant derivative of an order-0 spinor jet");
  const int n = p - 1;
  if (n > g.order - 1) throw OrderError("geometry order too low for this spinor jet");
  const std::size_t width = t.comps.size();
  SpinorTensor out{t.rank + 1, std::vector<SpinorJet>(2 * width)};
  for (int mu = 0; mu < 2; ++mu) {
    const Jet conn = fit(g.spinor_connection[mu], n);
    for (std::size_t idx = 0; idx < width; ++idx) {
      const SpinorJet& comp = t.comps[idx];
      SpinorJet d{partial(comp[0], kAxes[mu]), partial(comp[1], kAxes[mu])};
      d = d + conn * spin2d::apply(g.gammas.chiral, truncated(comp, n));
      // - Gamma^la_{mu nu_s} T_{.. la ..} for every slot s
      for (int s = 0; s < t.rank; ++s) {
        const int shift = t.rank - 1 - s;
        const int nu = static_cast<int>((idx >> shift) & 1U);
        for (int la = 0; la < 2; ++la) {
          const std::size_t src = (idx & ~(std::size_t{1} << shift)) | (static_cast<std::size_t>(la) << shift);
          d = d - fit(g.christoffel[la][mu][nu], n) * truncated(t.comps[src], n);
        }
      }
      out.comps[static_cast<std::size_t>(mu) * width + idx] = std::move(d);
    }
  }
  return out;
}

SpinorTensor project_to_frame(const SpinorTensor& t, const GeometryJet& g) {
  const int n = t.order();
  if (n > g.order) throw OrderError("geometry order too low for frame projection");
  const std::size_t width = t.comps.size();
  SpinorTensor out{t.rank, std::vector<SpinorJet>(width, zero_spinor(n))};
  for (std::size_t fidx = 0; fidx < width; ++fidx)
    for (std::size_t cidx = 0; cidx < width; ++cidx) {
      Jet w = Jet::constant(1.0, n);
      for (int s = 0; s < t.rank; ++s) {
        const int shift = t.rank - 1 - s;
        const int a = static_cast<int>((fidx >> shift) & 1U);
        const int mu = static_cast<int>((cidx >> shift) & 1U);
        w = w * fit(g.frame[mu][a], n);
      }
      out.comps[fidx] = out.comps[fidx] + w * t.comps[cidx];
    }
  return out;
}

std::array<SpinorJet, 2> covariant_derivative(const SpinorJet& psi, const GeometryJet& g) {
  const SpinorTensor d = covariant_gradient(SpinorTensor::scalar(psi), g);
  return {d.comps[0], d.comps[1]};
}

std::array<SpinorJet, 2> frame_derivative(const SpinorJet& psi, const GeometryJet& g) {
  const SpinorTensor d = project_to_frame(covariant_gradient(SpinorTensor::scalar(psi), g), g);
  return {d.comps[0], d.comps[1]};
}

Index2<SpinorJet> frame_second_derivative(const SpinorJet& psi, const GeometryJet& g) {
  if (order_of(psi) < 2) throw OrderError("second covariant derivative needs spinor order >= 2");
  const SpinorTensor d2 =
      project_to_frame(covariant_gradient(covariant_gradient(SpinorTensor::scalar(psi), g), g), g);
  return {{{d2.at({0, 0}), d2.at({0, 1})}, {d2.at({1, 0}), d2.at({1, 1})}}};
}

Index2<SpinorJet> second_sym_derivative(const SpinorJet& psi, const GeometryJet& g) {
  const Index2<SpinorJet> d = frame_second_derivative(psi, g);
  Index2<SpinorJet> s;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) s[a][b] = 0.5 * (d[a][b] + d[b][a]);
  return s;
}

namespace {

SpinorTensor third_frame(const SpinorJet& psi, const GeometryJet& g) {
  if (order_of(psi) < 3) throw OrderError("third covariant derivative needs spinor order >= 3");
  SpinorTensor t = SpinorTensor::scalar(psi);
  for (int k = 0; k < 3; ++k) t = covariant_gradient(t, g);
  return project_to_frame(t, g);
}

}  // namespace

Index3<SpinorJet> third_sym_derivative(const SpinorJet& psi, const GeometryJet& g) {
  const SpinorTensor d = third_frame(psi, g);
  Index3<SpinorJet> s;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c) {
        SpinorJet acc = d.at({a, b, c}) + d.at({a, c, b});
        acc = acc + d.at({b, a, c}) + d.at({b, c, a});
        acc = acc + d.at({c, a, b}) + d.at({c, b, a});
        s[a][b][c] = (1.0 / 6.0) * acc;
      }
  return s;
}

RicciResiduals ricci_identity_check(const SpinorJet& psi, const GeometryJet& g) {
  const Signature sig = g.signature;
  const Mat2& gam = g.gammas.chiral;
  const SpinorTensor d3 = third_frame(psi, g);
  const Index2<SpinorJet> d2 = frame_second_derivative(psi, g);
  const std::array<SpinorJet, 2> d1 = frame_derivative(psi, g);

  RicciResiduals r{0.0, 0.0};
  for (int c = 0; c < 2; ++c)
    for (int d = 0; d < 2; ++d) {
      const SpinorJet lhs = d2[c][d] - d2[d][c];
      const int n = order_of(lhs);
      const SpinorJet rhs = (0.25 * Signature::epsilon(c, d)) * scaled(g.ricci_scalar, spin2d::apply(gam, truncated(psi, n)));
      r.commutator = std::max(r.commutator, value_norm(lhs - rhs));
    }
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c) {
        const SpinorJet lhs = d3.at({a, b, c}) - d3.at({b, a, c});
        const int n = order_of(lhs);
        const Jet ricci = fit(g.ricci_scalar, n);
        SpinorJet rhs = (0.25 * Signature::epsilon(a, b)) * (ricci * spin2d::apply(gam, truncated(d1[c], n)));
        // R^d_cab = eta R/2 eps^d_c eps_ab; the eta drops out only for Euclidean
        for (int d = 0; d < 2; ++d)
          rhs = rhs - (0.5 * sig.sign() * sig.epsilon_up_down(d, c) * Signature::epsilon(a, b)) *
                          (ricci * truncated(d1[d], n));
        r.commutator_on_grad = std::max(r.commutator_on_grad, value_norm(lhs - rhs));
      }
  return r;
}

double appendix_second_order_check(const SpinorJet& psi, const GeometryJet& g) {
  const Index2<SpinorJet> d2 = frame_second_derivative(psi, g);
  double res = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int c = 0; c < 2; ++c) {
      const SpinorJet sym = 0.5 * (d2[a][c] + d2[c][a]);
      const int n = order_of(sym);
      const SpinorJet curv =
          (Signature::epsilon(a, c) / 8.0) * scaled(g.ricci_scalar, spin2d::apply(g.gammas.chiral, truncated(psi, n)));
      res = std::max(res, value_norm(d2[a][c] - sym - curv));
    }
  return res;
}

double appendix_third_order_check(const SpinorJet& psi, const GeometryJet& g) {
  const Signature sig = g.signature;
  const Mat2& gam = g.gammas.chiral;
  const SpinorTensor d3 = third_frame(psi, g);
  const Index3<SpinorJet> s3 = third_sym_derivative(psi, g);
  const std::array<SpinorJet, 2> d1 = frame_derivative(psi, g);
  const int n = order_of(s3[0][0][0]);
  const Jet ricci = fit(g.ricci_scalar, n);
  const std::array<Jet, 2> grad_r = frame_gradient_scalar(g.ricci_scalar, g);
  const SpinorJet gpsi = spin2d::apply(gam, truncated(psi, n));

  double res = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c) {
        const SpinorJet lhs = 0.5 * (d3.at({a, b, c}) + d3.at({b, a, c}));
        SpinorJet rhs = s3[a][b][c];
        rhs = rhs + (1.0 / 12.0) * (fit(grad_r[a], n) * Signature::epsilon(b, c) +
                                    fit(grad_r[b], n) * Signature::epsilon(a, c)) *
                        gpsi;
        rhs = rhs + (Signature::epsilon(a, c) / 8.0) * (ricci * spin2d::apply(gam, truncated(d1[b], n)));
        rhs = rhs + (Signature::epsilon(b, c) / 8.0) * (ricci * spin2d::apply(gam, truncated(d1[a], n)));
        const SpinorJet eta_terms = (-sig.eta(a, c)) * truncated(d1[b], n) + (-sig.eta(b, c)) * truncated(d1[a], n) +
                                    (2.0 * sig.eta(a, b)) * truncated(d1[c], n);
        rhs = rhs + (1.0 / 12.0) * (ricci * eta_terms);
        res = std::max(res, value_norm(lhs - rhs));
      }
  return res;
}

double spin_covariance_check(const FrameField& frame, const SpinorJet& psi, const Expr& a_expr, const Expr& b_expr,
                             Complex x, Complex y, int order) {
  const Signature sig = frame.signature();
  const double eta = sig.sign();
  const Jet a = a_expr.eval_jet(x, y, order);
  const Jet b = b_expr.eval_jet(x, y, order);
  const double constraint = std::abs(a.value() * a.value() + eta * b.value() * b.value() - 1.0);
  if (constraint > 1e-10)
    throw ConstraintError("spin transformation violates a^2 + eta b^2 = 1 at the point (residual " +
                          std::to_string(constraint) + ")");

  // lbar = l(phi^{-1}) = [[a^2 - eta b^2, -2 eta a b], [2 a b, a^2 - eta b^2]]
  const Jet diag = a * a - b * b * eta;
  const Jet ab = a * b;
  const Index2<Jet> lbar{{{diag, ab * (-2.0 * eta)}, {ab * 2.0, diag}}};

  const FrameJets e = frame.jets_at(x, y, order);
  FrameJets e_rot;
  for (int mu = 0; mu < 2; ++mu)
    for (int c = 0; c < 2; ++c) e_rot[mu][c] = e[mu][0] * lbar[0][c] + e[mu][1] * lbar[1][c];

  const GeometryJet g = geometry_from_jets(sig, e, order);
  const GeometryJet g_rot = geometry_from_jets(sig, e_rot, order);
  const int p = order_of(psi);
  const CliffordJet phi{a, {Jet(order), Jet(order)}, b};
  const SpinorJet psi_rot = phi.truncated(std::min(order, p)).apply(truncated(psi, std::min(order, p)), g.gammas);

  const auto lhs = covariant_derivative(psi_rot, g_rot);
  const auto rhs = covariant_derivative(psi, g);
  double res = 0.0;
  for (int mu = 0; mu < 2; ++mu) {
    const int n = std::min(order_of(lhs[mu]), order_of(rhs[mu]));
    const SpinorJet rot = phi.truncated(n).apply(truncated(rhs[mu], n), g.gammas);
    res = std::max(res, value_norm(truncated(lhs[mu], n) - rot));
  }
  return res;
}

std::array<Jet, 2> frame_to_coordinates(const std::array<Jet, 2>& v, const GeometryJet& g) {
  const int n = std::min(v[0].order(), g.order);
  std::array<Jet, 2> out;
  for (int mu = 0; mu < 2; ++mu) out[mu] = fit(g.frame[mu][0], n) * fit(v[0], n) + fit(g.frame[mu][1], n) * fit(v[1], n);
  return out;
}

std::array<Jet, 2> frame_gradient_scalar(const Jet& f, const GeometryJet& g) {
  if (f.order() < 1) throw OrderError("gradient of an order-0 jet");
  const int n = std::min(f.order() - 1, g.order);
  const std::array<Jet, 2> d{fit(partial(f, Axis::X), n), fit(partial(f, Axis::Y), n)};
  std::array<Jet, 2> out;
  for (int a = 0; a < 2; ++a) out[a] = fit(g.frame[0][a], n) * d[0] + fit(g.frame[1][a], n) * d[1];
  return out;
}

Index2<Jet> frame_gradient_vector(const std::array<Jet, 2>& v, const GeometryJet& g) {
  const std::array<Jet, 2> V = frame_to_coordinates(v, g);
  const int n = V[0].order() - 1;
  if (n < 0) throw OrderError("gradient of an order-0 vector field");
  Index2<Jet> cov;  // cov[la][mu] = nabla_la V^mu
  for (int la = 0; la < 2; ++la)
    for (int mu = 0; mu < 2; ++mu) {
      Jet d = partial(V[mu], kAxes[la]);
      for (int si = 0; si < 2; ++si) d += fit(g.christoffel[mu][la][si], n) * fit(V[si], n);
      cov[la][mu] = std::move(d);
    }
  Index2<Jet> out = zeros2(n);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int la = 0; la < 2; ++la)
        for (int mu = 0; mu < 2; ++mu) out[a][b] += fit(g.coframe[a][mu], n) * fit(g.frame[la][b], n) * cov[la][mu];
  return out;
}

Index3<Jet> frame_gradient_tensor(const Index2<Jet>& t, const GeometryJet& g) {
  const int m = std::min(t[0][0].order(), g.order);
  Index2<Jet> T = zeros2(m);
  for (int mu = 0; mu < 2; ++mu)
    for (int nu = 0; nu < 2; ++nu)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) T[mu][nu] += fit(g.frame[mu][a], m) * fit(g.frame[nu][b], m) * fit(t[a][b], m);
  const int n = m - 1;
  if (n < 0) throw OrderError("gradient of an order-0 tensor field");
  Index3<Jet> cov;  // cov[la][mu][nu] = nabla_la T^{mu nu}
  for (int la = 0; la < 2; ++la)
    for (int mu = 0; mu < 2; ++mu)
      for (int nu = 0; nu < 2; ++nu) {
        Jet d = partial(T[mu][nu], kAxes[la]);
        for (int si = 0; si < 2; ++si) {
          d += fit(g.christoffel[mu][la][si], n) * fit(T[si][nu], n);
          d += fit(g.christoffel[nu][la][si], n) * fit(T[mu][si], n);
        }
        cov[la][mu][nu] = std::move(d);
      }
  Index3<Jet> out = zeros3(n);
  for (int c = 0; c < 2; ++c)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int la = 0; la < 2; ++la)
          for (int mu = 0; mu < 2; ++mu)
            for (int nu = 0; nu < 2; ++nu)
              out[c][a][b] += fit(g.frame[la][c], n) * fit(g.coframe[a][mu], n) * fit(g.coframe[b][nu], n) *
                              cov[la][mu][nu];
  return out;
}

}  // namespace spin2d
