#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "spin2d/killing.hpp"
#include "spin2d/symop.hpp"

namespace spin2d {

// g = (A(u) + B(v)) (du^2 + eta dv^2) with u = x, v = y.
struct LiouvilleMetric {
  Signature signature = Signature::euclidean();
  Expr A;  // x only
  Expr B;  // y only

  // Throws Error if A depends on y or B on x.
  void validate() const;
};

enum class LiouvilleFrameKind {
  D5,        // antidiagonal (1/sqrt(A+B), -1/sqrt(A+B))
  Diagonal,  // e_a = d_a / sqrt(A+B)
};

// A + B > 0 (Euclidean) or |A + B| > 1e-10 (Lorentzian) at every node.
void check_region(const LiouvilleMetric& m, Region region, GridSpec grid);

FrameField liouville_frame(const LiouvilleMetric& m, LiouvilleFrameKind kind = LiouvilleFrameKind::D5);
// Frame components of the Killing tensor with coordinate form
// (B d_u^2 - eta A d_v^2) / (A + B) in the chosen frame.
Index2<Expr> liouville_killing_tensor(const LiouvilleMetric& m, LiouvilleFrameKind kind);

// D psi = At d_x psi + Bt d_y psi + Ct psi - lambda psi with
// At = [[A1, A2], [-A2, -A1]], Bt = [[B1, B2], [-B2, -B1]], Ct = [[C1, -C2], [C2, -C1]].
struct SeparationCoefficients {
  Complex A1, A2, B1, B2, C1, C2;
};

template <class T>
struct CoefficientSet {
  T A1, A2, B1, B2, C1, C2;
};

// Read off i gamma^a nabla_a in the gamma basis above.
CoefficientSet<Jet> separation_coefficient_jets(const GeometryJet& g);
SeparationCoefficients separation_coefficients(const FrameField& frame, Complex x, Complex y);
// Apply the matrix form (m plays lambda).
SpinorJet coefficient_form_apply(const CoefficientSet<Jet>& c, const SpinorJet& psi, Complex lambda);

// Residuals of the explicit D5 operator
//   R1 [ (0 k; -k 0) d_x + i diag(1,-1) d_y ] + i/2 R1' diag(1,-1),  R1 = B^-1/2
// against the general massless Dirac operator on the D5 frame.
struct D5FormResult {
  double total = 0.0;         // random spinor jets
  double zero_order = 0.0;    // constant spinors: only the R1' term acts
  double x_derivative = 0.0;  // spinors linear in x
  double y_derivative = 0.0;  // spinors linear in y
};
D5FormResult d5_dirac_form_check(const LiouvilleMetric& m, const std::vector<std::pair<double, double>>& points,
                                 int jets_per_point, std::uint64_t seed);

// With A = 0 the D5 Killing tensor is d_x (x) d_x. The symmetry operator built
// from it (alpha = zeta = 0, g synthesized on region/grid) must equal
// diag(d_x^2, d_x^2) = L^2 with L = I d_x, up to the additive constant in g,
// which is fixed at the first point with a constant spinor.
struct SquareCheckResult {
  double residual = 0.0;
  Complex gauge = 0.0;
  double worst_x = 0.0, worst_y = 0.0;
};
SquareCheckResult d5_square_check(const LiouvilleMetric& m, Region region, GridSpec grid,
                                  const std::vector<std::pair<double, double>>& points, int jets_per_point,
                                  std::uint64_t seed);

struct SeparationParams {
  Complex lambda = 1.0;
  Complex kappa = Complex(0.0, 1.0);
  Complex c_ratio = 1.0;  // c2 / c1, with c1 = 1
  double y_start = 0.0;
  double y_end = 1.0;
  double h = 0.01;
  double x = 0.0;  // where the y-system coefficients are sampled
};

struct SeparatedSolution {
  Complex lambda, kappa;
  Complex mu1, mu2;                // E_i^x at the first node
  std::array<Complex, 2> c{};      // a_i(x) = c_i exp(kappa x)
  double h = 0.0;
  std::vector<double> y;
  std::vector<std::array<Complex, 2>> b;
  double mu_variation = 0.0;       // max |mu_i(y) - mu_i(y_start)| across nodes

  std::array<Complex, 2> x_part(Complex x) const;
};

// Type-I separated solution on the D5 frame of m (A = 0): closed-form
// exponentials in x, classical RK4 in y from b = (1, 1).
SeparatedSolution separate_solve(const LiouvilleMetric& m, const SeparationParams& p);

struct SeparationDiagnostics {
  double dirac_consistency = 0.0;  // general Dirac operator on jets built from the y-system, all nodes
  double discretization = 0.0;     // y-system with 5-point differences of the table, interior nodes
  std::vector<double> node_discretization;  // per node, 0 outside the stencil range
  double k_eigen = 0.0;            // |d_x^2 psi - kappa^2 psi|
  double mu_product_gap = 0.0;     // |mu1 mu2 - k^2 kappa^2|
};
SeparationDiagnostics diagnose(const SeparatedSolution& s, const LiouvilleMetric& m, double x, int jet_order = 3);

// max over nodes shared by both runs (fine step = coarse / 2) of the
// discretization residuals, as coarse / fine.
double convergence_ratio(const SeparationDiagnostics& coarse, const SeparationDiagnostics& fine);

std::string solution_csv(const SeparatedSolution& s);

// Two-dimensional Minkowski space in z = x + iy, zbar = x - iy.
FrameField minkowski_complex_frame();
// Z psi = (0 -1; 1 0) d_z psi + i diag(1, -1) d_zbar psi on (x, y) jets.
SpinorJet z_form_apply(const SpinorJet& psi);
// max |i gamma^a nabla_a psi - m psi - (i Z psi - m psi)| over random jets.
double minkowski_form_check(int jets, Complex mass, std::uint64_t seed);
// (c1, c2) exp(p z + q zbar) with p^2 + q^2 = -lambda^2: |Z psi - lambda psi|.
double minkowski_family_check(Complex p, Complex lambda, Complex x, Complex y, int order = 3);
// |[diag(d_z^2), Z] psi| + |[diag(d_zbar^2), Z] psi| on random jets.
double minkowski_commuting_check(int jets, std::uint64_t seed);

// H = (px^2 - py^2)/2, L = px py, P = (px - i py)/2.
std::pair<double, double> hj_momenta_identities(Complex px, Complex py);

}  // namespace spin2d
