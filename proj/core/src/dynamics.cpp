#include "functorad/dynamics.hpp"

#include <cmath>
#include <sstream>

#include "functorad/errors.hpp"

namespace functorad {

VectorField::VectorField(BasicManifold manifold, SmoothMap field)
    : manifold_(std::move(manifold)), field_(std::move(field)) {
  if (field_.domain_dim() != manifold_.dim() || field_.codomain_dim() != manifold_.dim())
    throw ContractError("VectorField: field must map R^n to R^n for the manifold dimension");
}

TangentVector VectorField::coalgebra(const Vector& x) const { return {x, velocity(x)}; }

Vector VectorField::velocity(const Vector& x) const {
  manifold_.require(x, "vector field");
  return evaluate(field_, x);
}

VectorField negated(const VectorField& x) {
  return VectorField(x.manifold(), scale(-1.0, x.field()));
}

VectorField clock_field(const Clock& c) {
  if (!(c.half_width > 0.0)) throw ContractError("clock: interval must contain 0");
  return VectorField(BasicManifold(Region::box(Vector::Constant(1, -c.half_width),
                                               Vector::Constant(1, c.half_width))),
                     SmoothMap::constant(1, Vector::Ones(1)));
}

const char* method_name(Method m) { return m == Method::Rk4 ? "rk4" : "picard"; }

std::size_t step_count(double t_end, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ContractError("dt must be positive");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw ContractError("t_end must be positive");
  if (dt > t_end * (1.0 + 1e-12)) throw ContractError("dt must not exceed t_end");
  const double ratio = t_end / dt;
  return static_cast<std::size_t>(std::max(1.0, std::ceil(ratio - 1e-9)));
}

namespace {

void require_start(const VectorField& x, const Vector& q0) {
  if (q0.size() != x.dim()) throw ContractError("initial state has the wrong dimension");
  if (!x.manifold().contains(q0)) throw DomainError("initial state outside the region");
}

Vector stage(const VectorField& x, const Vector& point, std::size_t step) {
  if (!x.manifold().contains(point))
    throw SingularityError("integration left region " + x.manifold().region.name(), step);
  try {
    return evaluate(x.field(), point);
  } catch (const DomainError& e) {
    throw SingularityError(e.what(), step);
  }
}

}  // namespace

Trajectory integrate_rk4(const VectorField& x, const Vector& q0, double t_end, double dt) {
  require_start(x, q0);
  const std::size_t steps = step_count(t_end, dt);
  const double h = t_end / static_cast<double>(steps);

  Trajectory tr;
  tr.dt = h;
  tr.method = Method::Rk4;
  tr.times.reserve(steps + 1);
  tr.states.reserve(steps + 1);
  tr.times.push_back(0.0);
  tr.states.push_back(q0);

  Vector q = q0;
  for (std::size_t k = 1; k <= steps; ++k) {
    const Vector k1 = stage(x, q, k);
    const Vector k2 = stage(x, q + 0.5 * h * k1, k);
    const Vector k3 = stage(x, q + 0.5 * h * k2, k);
    const Vector k4 = stage(x, q + h * k3, k);
    q += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!x.manifold().contains(q))
      throw SingularityError("integration left region " + x.manifold().region.name(), k);
    tr.times.push_back(k == steps ? t_end : t_end * static_cast<double>(k) / static_cast<double>(steps));
    tr.states.push_back(q);
  }
  return tr;
}

Trajectory integrate_picard(const VectorField& x, const Vector& q0, double t_end,
                            std::size_t grid, std::size_t max_iter, double tol) {
  require_start(x, q0);
  if (!(t_end > 0.0)) throw ContractError("t_end must be positive");
  if (grid < 2) throw ContractError("picard grid needs at least 2 nodes");
  if (max_iter < 1) throw ContractError("max_iter must be >= 1");
  if (!(tol > 0.0)) throw ContractError("tol must be positive");

  const double h = t_end / static_cast<double>(grid - 1);
  std::vector<Vector> current(grid, q0);
  std::vector<Vector> next(grid, q0);
  std::vector<Vector> rates(grid);
  double change = 0.0;

  for (std::size_t iter = 1; iter <= max_iter; ++iter) {
    for (std::size_t i = 0; i < grid; ++i) {
      if (!x.manifold().contains(current[i]))
        throw NonContractionError("picard iterate left the region", change);
      try {
        rates[i] = evaluate(x.field(), current[i]);
      } catch (const DomainError&) {
        throw NonContractionError("picard iterate hit a singularity", change);
      }
    }
    next[0] = q0;
    for (std::size_t i = 1; i < grid; ++i) next[i] = next[i - 1] + 0.5 * h * (rates[i - 1] + rates[i]);

    change = 0.0;
    for (std::size_t i = 0; i < grid; ++i) change = std::max(change, (next[i] - current[i]).norm());
    if (!std::isfinite(change)) throw NonContractionError("picard iteration diverged", change);
    std::swap(current, next);

    if (change <= tol) {
      Trajectory tr;
      tr.dt = h;
      tr.method = Method::Picard;
      tr.iterations = iter;
      tr.states = std::move(current);
      tr.times.resize(grid);
      for (std::size_t i = 0; i < grid; ++i)
        tr.times[i] = i + 1 == grid ? t_end : h * static_cast<double>(i);
      return tr;
    }
  }
  std::ostringstream os;
  os << "picard iteration did not converge in " << max_iter << " sweeps (last change " << change
     << ")";
  throw NonContractionError(os.str(), change);
}

TrajectoryResidual check_trajectory(const VectorField& x, const Trajectory& tr) {
  TrajectoryResidual out;
  const std::size_t n = tr.states.size();
  out.per_point.assign(n, 0.0);
  if (n < 2 || !(tr.dt > 0.0)) return out;
  const double h = tr.dt;
  const auto& s = tr.states;
  auto resid = [&](std::size_t k, const Vector& velocity) {
    return (velocity - evaluate(x.field(), s[k])).norm();
  };
  if (n == 2) {
    const Vector v = (s[1] - s[0]) / h;
    out.per_point[0] = resid(0, v);
    out.per_point[1] = resid(1, v);
    return out;
  }
  for (std::size_t k = 1; k + 1 < n; ++k) {
    out.per_point[k] = resid(k, (s[k + 1] - s[k - 1]) / (2.0 * h));
    out.max_residual = std::max(out.max_residual, out.per_point[k]);
  }
  out.per_point[0] = resid(0, (-3.0 * s[0] + 4.0 * s[1] - s[2]) / (2.0 * h));
  out.per_point[n - 1] = resid(n - 1, (3.0 * s[n - 1] - 4.0 * s[n - 2] + s[n - 3]) / (2.0 * h));
  return out;
}

double check_f_related(const SmoothMap& f, const VectorField& x, const VectorField& y,
                       const std::vector<Vector>& samples) {
  if (f.domain_dim() != x.dim() || f.codomain_dim() != y.dim())
    throw ContractError("check_f_related: map does not connect the two manifolds");
  double worst = 0.0;
  for (const Vector& p : samples) {
    const TangentVector pushed = tangent_map(f, x.coalgebra(p));
    const Vector target = y.velocity(pushed.base);
    worst = std::max(worst, (pushed.dir - target).norm());
  }
  return worst;
}

Vector flow(const VectorField& x, const Vector& q0, double t, double dt) {
  if (t == 0.0) {
    require_start(x, q0);
    return q0;
  }
  const double span = std::abs(t);
  const double step = std::min(dt, span);
  if (t > 0.0) return integrate_rk4(x, q0, span, step).final_state();
  return integrate_rk4(negated(x), q0, span, step).final_state();
}

}  // namespace functorad
