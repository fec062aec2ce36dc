#pragma once

#include <array>
#include <vector>

#include "spin2d/clifford.hpp"
#include "spin2d/expr.hpp"
#include "spin2d/jet.hpp"

namespace spin2d {

template <class T>
using Index2 = std::array<std::array<T, 2>, 2>;
template <class T>
using Index3 = std::array<Index2<T>, 2>;

// Frame components e^mu_a as jets: e[mu][a].
using FrameJets = Index2<Jet>;

// Spin frame e^mu_a(x, y) given by expressions; e[mu][a] is the mu-th
// coordinate component of the frame vector e_a.
class FrameField {
 public:
  FrameField(Signature sig, Index2<Expr> e, bool allow_complex = false);

  Signature signature() const noexcept { return sig_; }
  bool allow_complex() const noexcept { return allow_complex_; }
  const Index2<Expr>& components() const noexcept { return e_; }

  // Jets of e^mu_a at the point. Throws SingularError if |det e| <= 1e-10 and
  // DomainError if a real frame evaluates to a complex value.
  FrameJets jets_at(Complex x, Complex y, int order) const;

 private:
  Signature sig_;
  Index2<Expr> e_;
  bool allow_complex_;
};

// Every geometric quantity induced by a spin frame, as jets at one point.
// Frame-derived fields carry the frame order N, connections N - 1 and
// curvature N - 2.
struct GeometryJet {
  Signature signature;
  GammaSet gammas;
  int order = 0;
  FrameJets frame;          // e^mu_a        [mu][a]
  Index2<Jet> coframe;      // e^a_mu        [a][mu]
  Index2<Jet> metric;       // g_mu nu
  Index2<Jet> inv_metric;   // g^mu nu
  Index3<Jet> christoffel;  // Gamma^alpha_{beta mu}   [alpha][beta][mu]
  Index3<Jet> spin_connection;           // Gamma^{ab}_mu   [a][b][mu]
  std::array<Jet, 2> spinor_connection;  // Gamma_mu = spinor_connection[mu] * gamma
  Jet ricci_scalar;
};

// Pipeline entry from expressions. Requires order >= 2.
GeometryJet geometry_at(const FrameField& frame, Complex x, Complex y, int order);
// Same pipeline from precomputed frame jets.
GeometryJet geometry_from_jets(Signature sig, const FrameJets& frame, int order);

// Spinor-valued covariant tensor of rank k with coordinate indices;
// component (mu_1 .. mu_k) sits at sum mu_i 2^(k - i).
struct SpinorTensor {
  int rank = 0;
  std::vector<SpinorJet> comps;

  static SpinorTensor scalar(const SpinorJet& psi) { return {0, {psi}}; }
  int order() const { return order_of(comps.front()); }
  const SpinorJet& at(std::initializer_list<int> idx) const;
};

// nabla_mu T_{nu...}: the new index comes first. Order drops by one.
SpinorTensor covariant_gradient(const SpinorTensor& t, const GeometryJet& g);
// Contract every coordinate index with e^mu_a.
SpinorTensor project_to_frame(const SpinorTensor& t, const GeometryJet& g);

// nabla_mu psi, coordinate index.
std::array<SpinorJet, 2> covariant_derivative(const SpinorJet& psi, const GeometryJet& g);
// nabla_a psi = e^mu_a nabla_mu psi.
std::array<SpinorJet, 2> frame_derivative(const SpinorJet& psi, const GeometryJet& g);
// nabla_a nabla_b psi, frame indices, not symmetrized.
Index2<SpinorJet> frame_second_derivative(const SpinorJet& psi, const GeometryJet& g);
// nabla_(ab) psi.
Index2<SpinorJet> second_sym_derivative(const SpinorJet& psi, const GeometryJet& g);
// nabla_(abc) psi.
Index3<SpinorJet> third_sym_derivative(const SpinorJet& psi, const GeometryJet& g);

struct RicciResiduals {
  double commutator;          // [nabla_c, nabla_d] psi - 1/4 gamma psi eps_cd R
  double commutator_on_grad;  // [nabla_a, nabla_b] nabla_c psi - R/4 eps_ab gamma nabla_c psi + eta R/2 eps^d_c eps_ab nabla_d psi
};
RicciResiduals ricci_identity_check(const SpinorJet& psi, const GeometryJet& g);

// nabla_a nabla_c psi - nabla_(ac) psi - R/8 eps_ac gamma psi
double appendix_second_order_check(const SpinorJet& psi, const GeometryJet& g);
// nabla_(ab) nabla_c psi against nabla_(abc) psi plus the curvature terms.
double appendix_third_order_check(const SpinorJet& psi, const GeometryJet& g);

// Max over mu of |nabla'_mu (phi psi) - phi nabla_mu psi| for the frame
// rotated by l(phi)^{-1}, with phi = a I + b gamma given by expressions.
double spin_covariance_check(const FrameField& frame, const SpinorJet& psi, const Expr& a, const Expr& b,
                             Complex x, Complex y, int order);

// Tensor calculus on frame-component fields, all through coordinate indices.
// e^mu_a v^a
std::array<Jet, 2> frame_to_coordinates(const std::array<Jet, 2>& v, const GeometryJet& g);
// grad[a] = e^mu_a d_mu f
std::array<Jet, 2> frame_gradient_scalar(const Jet& f, const GeometryJet& g);
// grad[a][b] = nabla_b v^a
Index2<Jet> frame_gradient_vector(const std::array<Jet, 2>& v, const GeometryJet& g);
// grad[c][a][b] = nabla_c t^{ab}
Index3<Jet> frame_gradient_tensor(const Index2<Jet>& t, const GeometryJet& g);

}  // namespace spin2d
