#include "functorad/testing.hpp"

#include <cmath>

#include "functorad/errors.hpp"

namespace functorad {

namespace {
constexpr double kSeparation = 1e-9;
const Vector& origin() {
  static const Vector zero = Vector::Zero(1);
  return zero;
}
const Vector& unit() {
  static const Vector one = Vector::Ones(1);
  return one;
}
}  // namespace

Path::Path(SmoothMap map, double half_width) : map_(std::move(map)), half_width_(half_width) {
  if (map_.domain_dim() != 1) throw ContractError("Path: map must have a 1-dimensional domain");
  if (!(half_width_ > 0.0)) throw ContractError("Path: window half-width must be positive");
}

Vector Path::at(double s) const {
  if (!(std::abs(s) < half_width_)) throw DomainError("Path: parameter outside window");
  return evaluate(map_, Vector::Constant(1, s));
}

Test::Test(SmoothMap map) : map_(std::move(map)) {
  if (map_.codomain_dim() != 1) throw ContractError("Test: map must be real-valued");
}

Path line_path(const Vector& u, const Vector& e, double half_width) {
  require_same_dim(u, e, "line_path");
  Matrix dir = e;  // n x 1
  const SmoothMap s = SmoothMap::identity(1);
  return Path(SmoothMap::constant(1, u) + apply_linear(dir, s), half_width);
}

Test linear_test(const Vector& c) { return Test(SmoothMap::linear(c.transpose())); }

double correlate(const Path& p, const Test& t) {
  if (p.dim() != t.dim()) throw ContractError("correlate: path and test live in different spaces");
  return differential(compose(t.map(), p.map()), origin(), unit())[0];
}

TangentVector tangent_of_path(const Path& p) {
  JetValue j = jet(p.map(), origin(), unit());
  return {std::move(j.value), std::move(j.first)};
}

bool paths_equivalent(const Path& p1, const Path& p2, double tol) {
  if (p1.dim() != p2.dim()) return false;
  const TangentVector a = tangent_of_path(p1);
  const TangentVector b = tangent_of_path(p2);
  return (a.base - b.base).norm() <= tol && (a.dir - b.dir).norm() <= tol;
}

std::vector<Test> monomial_battery(Eigen::Index n, int degree) {
  if (degree < 1 || degree > 2) throw ContractError("monomial_battery: degree must be 1 or 2");
  std::vector<Test> tests;
  for (Eigen::Index i = 0; i < n; ++i) tests.emplace_back(SmoothMap::coordinate(n, i));
  if (degree == 2)
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i; j < n; ++j)
        tests.emplace_back(SmoothMap::coordinate(n, i) * SmoothMap::coordinate(n, j));
  return tests;
}

std::optional<Test> separating_test_search(const Path& p1, const Path& p2, int degree) {
  if (p1.dim() != p2.dim()) throw ContractError("separating_test_search: dimension mismatch");
  for (Test& t : monomial_battery(p1.dim(), degree)) {
    const JetValue a = jet(compose(t.map(), p1.map()), origin(), unit());
    const JetValue b = jet(compose(t.map(), p2.map()), origin(), unit());
    if (std::abs(a.value[0] - b.value[0]) > kSeparation ||
        std::abs(a.first[0] - b.first[0]) > kSeparation)
      return std::move(t);
  }
  return std::nullopt;
}

double check_dinaturality(const SmoothMap& f, const Path& p, const Test& t) {
  const Path pushed(compose(f, p.map()), p.half_width());
  const Test pulled(compose(t.map(), f));
  return std::abs(correlate(pushed, t) - correlate(p, pulled));
}

Covector covector_of_test(const Test& t, const Vector& x) {
  return {x, jacobian(t.map(), x).row(0).transpose()};
}

}  // namespace functorad
