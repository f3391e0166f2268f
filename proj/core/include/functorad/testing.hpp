#pragma once

#include <optional>
#include <string>
#include <vector>

#include "functorad/smoothmap.hpp"
#include "functorad/tangent.hpp"

namespace functorad {

/// A curve s -> p(s) through a manifold, defined for s in (-half_width, half_width).
class Path {
 public:
  /// Throws ContractError unless map has a 1-dim domain and half_width > 0.
  explicit Path(SmoothMap map, double half_width = 1.0);

  const SmoothMap& map() const { return map_; }
  double half_width() const { return half_width_; }
  Eigen::Index dim() const { return map_.codomain_dim(); }
  Vector at(double s) const;

 private:
  SmoothMap map_;
  double half_width_;
};

/// A real-valued observable x -> t(x) on a manifold.
class Test {
 public:
  /// Throws ContractError unless map has a 1-dim codomain.
  explicit Test(SmoothMap map);

  const SmoothMap& map() const { return map_; }
  Eigen::Index dim() const { return map_.domain_dim(); }

 private:
  SmoothMap map_;
};

/// The straight line s -> u + s e.
Path line_path(const Vector& u, const Vector& e, double half_width = 1.0);
/// x -> <c, x>.
Test linear_test(const Vector& c);

/// D(t o p)(0): how the test sees the path move at s = 0.
double correlate(const Path& p, const Test& t);

/// Canonical representative (p(0), Dp(0) 1) of the path's class.
TangentVector tangent_of_path(const Path& p);

/// Same base point and velocity at 0, each within tol.
bool paths_equivalent(const Path& p1, const Path& p2, double tol = 1e-9);

/// The finite monomial battery: coordinates x_i (degree 1) and products
/// x_i x_j, i <= j (degree 2).
std::vector<Test> monomial_battery(Eigen::Index n, int degree);

/// Looks for a battery test whose first-order observation of the two paths
/// differs by more than 1e-9: either the value t(p(0)) or the correlation
/// D(t o p)(0). Returns the first such test, or nullopt when none exists.
std::optional<Test> separating_test_search(const Path& p1, const Path& p2, int degree);

/// |correlate(f o p, t) - correlate(p, t o f)|.
double check_dinaturality(const SmoothMap& f, const Path& p, const Test& t);

/// Riesz representative of e -> Dt(x) e.
Covector covector_of_test(const Test& t, const Vector& x);

}  // namespace functorad
