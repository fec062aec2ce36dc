#pragma once

#include <array>

#include "spin2d/geometry.hpp"
#include "spin2d/killing.hpp"

namespace spin2d {

// K = E^ab nabla_(ab) + F^a nabla_a + G, coefficients expanded at one point
// in the {I, gamma^a, gamma} basis. Frame indices throughout.
struct SymmetryOperator {
  int order = 2;
  Index2<CliffordJet> E;
  std::array<CliffordJet, 2> F;
  CliffordJet G;
};

// Dirac operator i gamma^a nabla_a - m on a fixed frame.
struct DiracOperator {
  FrameField frame;
  Complex mass = 0.0;
};

// E^ab = e^ab I + 2 alpha^(a gamma^b)
// F^a  = (zeta^a + nabla_c e^ac) I + gamma^c nabla_c alpha^a + A gamma^a + 1/3 eps_bc nabla^b e^ac gamma
// G    = g I - R/4 alpha_b gamma^b + 1/4 eps_ba nabla^b zeta^a gamma
// kd.g must already hold a jet of order >= 1.
SymmetryOperator build_second_order(const KillingJets& kd, const GeometryJet& g);
// F^a = zeta^a I + A gamma^a, G = g I + 1/4 eps_ba nabla^b zeta^a gamma.
SymmetryOperator build_first_order(const std::array<Jet, 2>& zeta, Complex A, const Jet& g_scalar,
                                   const GeometryJet& g);

// i gamma^a nabla_a psi - m psi. Order drops by one.
SpinorJet dirac_apply(const SpinorJet& psi, const GeometryJet& g, Complex mass);
// Order drops by K.order.
SpinorJet operator_apply(const SymmetryOperator& K, const SpinorJet& psi, const GeometryJet& g);
// max |K(D psi) - D(K psi)| over the order-0 part.
double commutator_residual(const SymmetryOperator& K, const SpinorJet& psi, const GeometryJet& g, Complex mass);

// Sum of spinor jets of possibly different order, kept at the smaller one.
SpinorJet add_fit(const SpinorJet& a, const SpinorJet& b);

}  // namespace spin2d
