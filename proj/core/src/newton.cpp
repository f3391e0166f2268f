#include "functorad/newton.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Geometry>

#include "functorad/errors.hpp"

namespace functorad::newton {

namespace {

std::vector<Eigen::Index> range(Eigen::Index from, Eigen::Index count) {
  std::vector<Eigen::Index> v;
  for (Eigen::Index i = 0; i < count; ++i) v.push_back(from + i);
  return v;
}

void require_3d(const Vector& v, const char* what) {
  if (v.size() != 3) throw ContractError(std::string(what) + ": expected a 3-vector");
}

void require_radius(double r, double min_radius) {
  if (!(r > min_radius)) {
    std::ostringstream os;
    os << "radius " << r << " is not above the minimum " << min_radius;
    throw SingularityError(os.str());
  }
}

// k * x / |x|^3 as an expression, with x guarded away from the origin.
SmoothMap inverse_square(const SmoothMap& x, double k, double min_radius) {
  const SmoothMap safe = guard(x, min_radius);
  return scale(k, power(reciprocal(euclidean_norm(safe)), 3) * safe);
}

}  // namespace

void GravityParams::validate() const {
  if (!(G >= 0.0) || !std::isfinite(G)) throw ContractError("G must be non-negative");
  if (!(m1 > 0.0) || !(m2 > 0.0)) throw ContractError("masses must be positive");
  if (!(min_radius > 0.0)) throw ContractError("min_radius must be positive");
}

double potential(const GravityParams& gp, const Vector& r) {
  const double d = r.norm();
  require_radius(d, gp.min_radius);
  return gp.G * gp.m1 / d;
}

SmoothMap potential_map(const GravityParams& gp) {
  const SmoothMap r = guard(SmoothMap::identity(3), gp.min_radius);
  return scale(gp.G * gp.m1, reciprocal(euclidean_norm(r)));
}

Vector gravity_force(const GravityParams& gp, const Vector& r) {
  require_3d(r, "gravity_force");
  const double d = r.norm();
  require_radius(d, gp.min_radius);
  return (-gp.G * gp.m1 * gp.m2 / (d * d * d)) * r;
}

SmoothMap gravity_force_map(const GravityParams& gp) {
  return inverse_square(SmoothMap::identity(3), -gp.G * gp.m1 * gp.m2, gp.min_radius);
}

VectorField lagrangian_field(const GravityParams& gp) {
  gp.validate();
  const SmoothMap r = SmoothMap::projection(6, range(0, 3));
  const SmoothMap v = SmoothMap::projection(6, range(3, 3));
  const SmoothMap accel = inverse_square(r, -gp.G * gp.m1, gp.min_radius);
  return VectorField(BasicManifold(Region::punctured(6, 3, gp.min_radius)), tuple({v, accel}));
}

VectorField hamiltonian_field(const GravityParams& gp) {
  gp.validate();
  const SmoothMap r = SmoothMap::projection(6, range(0, 3));
  const SmoothMap p = SmoothMap::projection(6, range(3, 3));
  const SmoothMap force = inverse_square(r, -gp.G * gp.m1 * gp.m2, gp.min_radius);
  return VectorField(BasicManifold(Region::punctured(6, 3, gp.min_radius)),
                     tuple({scale(1.0 / gp.m2, p), force}));
}

SmoothMap legendre_map(double m) {
  if (!(m > 0.0)) throw ContractError("mass must be positive");
  Matrix a = Matrix::Identity(6, 6);
  a.bottomRightCorner(3, 3) *= m;
  return SmoothMap::linear(a);
}

double kinetic_pairing(const PhaseState& ps, const ConfigState& cs, double /*m*/) {
  require_same_dim(ps.r, cs.r, "kinetic_pairing");
  require_same_dim(ps.p, cs.v, "kinetic_pairing");
  if ((ps.r - cs.r).norm() > 1e-9)
    throw ContractError("kinetic_pairing: phase and configuration states at different positions");
  return 0.5 * ps.p.dot(cs.v);
}

double total_energy(const GravityParams& gp, const ConfigState& cs) {
  require_same_dim(cs.r, cs.v, "total_energy");
  const double d = cs.r.norm();
  require_radius(d, gp.min_radius);
  return 0.5 * gp.m2 * cs.v.squaredNorm() - gp.G * gp.m1 * gp.m2 / d;
}

Vector angular_momentum(const ConfigState& cs, double m) {
  require_3d(cs.r, "angular_momentum");
  require_3d(cs.v, "angular_momentum");
  const Eigen::Vector3d r = cs.r;
  const Eigen::Vector3d v = cs.v;
  return m * r.cross(v);
}

PairForces pair_forces(double G, double m1, double m2, double min_radius, const Vector& r1,
                       const Vector& r2) {
  require_3d(r1, "pair_forces");
  require_3d(r2, "pair_forces");
  const Vector sep = r2 - r1;
  const double d = sep.norm();
  require_radius(d, min_radius);
  const Vector on_2 = (-G * m1 * m2 / (d * d * d)) * sep;
  return {-on_2, on_2};
}

VectorField two_body_field(double G, double m1, double m2, double min_radius) {
  GravityParams{G, m1, m2, min_radius}.validate();
  const SmoothMap r1 = SmoothMap::projection(12, range(0, 3));
  const SmoothMap v1 = SmoothMap::projection(12, range(3, 3));
  const SmoothMap r2 = SmoothMap::projection(12, range(6, 3));
  const SmoothMap v2 = SmoothMap::projection(12, range(9, 3));
  // F12 = -G m1 m2 s / |s|^3 with s = r2 - r1; F21 = -F12.
  const SmoothMap f12 = inverse_square(r2 - r1, -G * m1 * m2, min_radius);
  const SmoothMap a1 = scale(-1.0 / m1, f12);
  const SmoothMap a2 = scale(1.0 / m2, f12);
  const Region separated = Region::custom(
      12, [min_radius](const Vector& x) { return (x.segment(6, 3) - x.head(3)).norm() > min_radius; },
      false, "separated pair");
  return VectorField(BasicManifold(separated), tuple({v1, a1, v2, a2}));
}

Vector total_momentum(const Vector& state, double m1, double m2) {
  if (state.size() != 12) throw ContractError("two-body state must have 12 coordinates");
  return m1 * state.segment(3, 3) + m2 * state.segment(9, 3);
}

double two_body_energy(const Vector& state, double G, double m1, double m2) {
  if (state.size() != 12) throw ContractError("two-body state must have 12 coordinates");
  const double d = (state.segment(6, 3) - state.head(3)).norm();
  return 0.5 * m1 * state.segment(3, 3).squaredNorm() + 0.5 * m2 * state.segment(9, 3).squaredNorm() -
         G * m1 * m2 / d;
}

Vector two_body_angular_momentum(const Vector& state, double m1, double m2) {
  if (state.size() != 12) throw ContractError("two-body state must have 12 coordinates");
  return angular_momentum({state.head(3), state.segment(3, 3)}, m1) +
         angular_momentum({state.segment(6, 3), state.segment(9, 3)}, m2);
}

}  // namespace functorad::newton
