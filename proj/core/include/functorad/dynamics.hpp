#pragma once

#include <cstddef>
#include <vector>

#include "functorad/smoothmap.hpp"
#include "functorad/tangent.hpp"

namespace functorad {

/// A dynamical system x' = field(x) on a manifold, seen as the coalgebra
/// x -> (x, field(x)) into the tangent bundle.
class VectorField {
 public:
  /// Throws ContractError unless field maps R^n -> R^n for the manifold's n.
  VectorField(BasicManifold manifold, SmoothMap field);

  const BasicManifold& manifold() const { return manifold_; }
  const SmoothMap& field() const { return field_; }
  Eigen::Index dim() const { return manifold_.dim(); }

  /// The cross-section x -> (x, field(x)). DomainError outside the region.
  TangentVector coalgebra(const Vector& x) const;
  /// field(x) after the region check.
  Vector velocity(const Vector& x) const;

 private:
  BasicManifold manifold_;
  SmoothMap field_;
};

/// The same system run backwards in time.
VectorField negated(const VectorField& x);

/// Unit-rate clock t -> (t, 1) on the interval (-half_width, half_width).
struct Clock {
  double half_width = 10.0;
};

VectorField clock_field(const Clock& c = {});

enum class Method { Rk4, Picard };
const char* method_name(Method m);

/// A sampled integral curve on a uniform grid starting at t = 0.
struct Trajectory {
  std::vector<double> times;
  std::vector<Vector> states;
  double dt = 0.0;
  Method method = Method::Rk4;
  std::size_t iterations = 0;  // Picard sweeps; 0 for RK4

  std::size_t size() const { return states.size(); }
  const Vector& final_state() const { return states.back(); }
};

/// Number of fixed steps used to reach t_end with steps no longer than dt.
/// The effective step is t_end / steps, so the last time is exactly t_end.
std::size_t step_count(double t_end, double dt);

/// Classical fixed-step RK4. Throws SingularityError naming the step when
/// any stage leaves the region.
Trajectory integrate_rk4(const VectorField& x, const Vector& q0, double t_end, double dt);

/// Fixed-point iteration of x -> q0 + int_0^t field(x(s)) ds with
/// trapezoidal quadrature on `grid` uniform nodes. Stops once the sup-norm
/// change between sweeps is <= tol; throws NonContractionError otherwise.
Trajectory integrate_picard(const VectorField& x, const Vector& q0, double t_end,
                            std::size_t grid = 256, std::size_t max_iter = 200,
                            double tol = 1e-12);

struct TrajectoryResidual {
  double max_residual = 0.0;        // over interior points, centered differences
  std::vector<double> per_point;    // one per state; ends use one-sided stencils
};

/// Compares finite-difference velocities of the samples with the field.
TrajectoryResidual check_trajectory(const VectorField& x, const Trajectory& tr);

/// max over samples of |D f(x) X(x) - Y(f(x))|.
double check_f_related(const SmoothMap& f, const VectorField& x, const VectorField& y,
                       const std::vector<Vector>& samples);

/// Endpoint of the RK4 solution at time t (negative t runs backwards).
Vector flow(const VectorField& x, const Vector& q0, double t, double dt);

}  // namespace functorad
