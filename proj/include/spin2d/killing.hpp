#pragma once

#include <array>
#include <optional>
#include <vector>

#include "spin2d/geometry.hpp"

namespace spin2d {

// Free data of a second-order symmetry operator, all in frame components.
// An empty `g` means: synthesize it from the integrability condition.
struct KillingData {
  Expr e11, e12, e22;
  std::array<Expr, 2> alpha;
  std::array<Expr, 2> zeta;
  Complex A = 0.0;
  std::optional<Expr> g;

  // Everything zero, g = 0.
  static KillingData zero();
  Index2<Expr> tensor() const { return {{{e11, e12}, {e12, e22}}}; }
};

// KillingData expanded at one point. `g` is left at order 0 when the data
// asks for synthesis; the caller fills it in.
struct KillingJets {
  Index2<Jet> e;
  std::array<Jet, 2> alpha;
  std::array<Jet, 2> zeta;
  Complex A = 0.0;
  Jet g;
};

KillingJets killing_jets_at(const KillingData& kd, Complex x, Complex y, int order);
std::array<Jet, 2> eval_pair(const std::array<Expr, 2>& v, Complex x, Complex y, int order);
Index2<Jet> eval_tensor(const Index2<Expr>& t, Complex x, Complex y, int order);

// nabla^(a v^b), frame indices.
Index2<Complex> killing_vector_residual(const std::array<Jet, 2>& v, const GeometryJet& g);
// nabla^(a t^bc), frame indices, fully symmetrized.
Index3<Complex> killing_tensor_residual(const Index2<Jet>& t, const GeometryJet& g);

double max_norm(const Index2<Complex>& t);
double max_norm(const Index3<Complex>& t);

// Coordinate components w_mu = d_mu g of the one-form fixed by
// nabla^a g = -1/4 nabla_b (R t^ab). Order drops by 3 from the frame.
std::array<Jet, 2> integrability_form(const Index2<Jet>& t, const GeometryJet& g);
// |d_x w_y - d_y w_x| at the point.
double closedness_residual(const std::array<Jet, 2>& w);

struct Region {
  double x_min = 0.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;
};

struct GridSpec {
  int nx = 2, ny = 2;
};

// Samples on a uniform node grid, x fastest.
class ScalarGrid {
 public:
  ScalarGrid() = default;
  ScalarGrid(Region region, GridSpec grid);

  const Region& region() const noexcept { return region_; }
  const GridSpec& grid() const noexcept { return grid_; }
  double hx() const noexcept { return hx_; }
  double hy() const noexcept { return hy_; }
  double x(int i) const noexcept { return region_.x_min + i * hx_; }
  double y(int j) const noexcept { return region_.y_min + j * hy_; }
  Complex& at(int i, int j) { return values_[static_cast<std::size_t>(j * grid_.nx + i)]; }
  Complex at(int i, int j) const { return values_[static_cast<std::size_t>(j * grid_.nx + i)]; }
  // Bilinear between nodes; throws DomainError outside the region.
  Complex interpolate(double x, double y) const;

 private:
  Region region_;
  GridSpec grid_;
  double hx_ = 0.0, hy_ = 0.0;
  std::vector<Complex> values_;
};

struct IntegrabilityResult {
  double closedness = 0.0;     // max |dw| over nodes
  double worst_x = 0.0, worst_y = 0.0;
  double path_difference = 0.0;  // x-then-y leg vs y-then-x leg
  double fd_residual = 0.0;      // central differences of g against w, interior nodes
  double step = 0.0;             // max(hx, hy)
  ScalarGrid g;                  // g(corner) = 0
};

// Samples w on the grid, checks closedness, then integrates along
// axis-parallel legs from (x_min, y_min). Throws IntegrabilityError when
// the closedness residual exceeds closed_tol. Legs use a two-point Hermite
// rule on the Taylor coefficients of w, which has order - 3 of them (capped
// at 5): order 4 is the corrected trapezoid, order 7 is exact to degree 9.
IntegrabilityResult integrability_check(const Index2<Expr>& t, const FrameField& frame, Region region, GridSpec grid,
                                        int order = 7, double closed_tol = 1e-6);

// Jet of the synthesized g at (x, y): value from the grid, derivatives from
// the exact one-form jets w.
Jet synthesized_g(const ScalarGrid& g, const std::array<Jet, 2>& w, double x, double y);

}  // namespace spin2d
