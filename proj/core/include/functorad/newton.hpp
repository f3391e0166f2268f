#pragma once

#include "functorad/dynamics.hpp"
#include "functorad/smoothmap.hpp"

namespace functorad::newton {

/// Point-source gravity: source mass m1 fixed at the origin acting on a
/// test mass m2. Positions closer than min_radius are rejected.
struct GravityParams {
  double G = 1.0;
  double m1 = 1.0;
  double m2 = 1.0;
  double min_radius = 1e-9;

  /// Throws ContractError unless all fields are positive (G may be 0 to
  /// switch gravity off).
  void validate() const;
};

/// Configuration-space state (r, v).
struct ConfigState {
  Vector r;
  Vector v;
};

/// Phase-space state (r, p).
struct PhaseState {
  Vector r;
  Vector p;
};

/// phi(r) = G m1 / |r|, vanishing at infinity. The potential energy of the
/// test mass is -m2 phi(r), so the force is m2 times the gradient of phi.
double potential(const GravityParams& gp, const Vector& r);
/// phi as a smooth map R^3 -> R, guarded by |r| > min_radius.
SmoothMap potential_map(const GravityParams& gp);

/// F(r) = -G m1 m2 r / |r|^3 (attractive).
Vector gravity_force(const GravityParams& gp, const Vector& r);
/// F as a smooth map R^3 -> R^3.
SmoothMap gravity_force_map(const GravityParams& gp);

/// (r, v) -> (v, F(r) / m2) on R^6 with |r| > min_radius.
VectorField lagrangian_field(const GravityParams& gp);
/// (r, p) -> (p / m2, F(r)) on R^6 with |r| > min_radius.
VectorField hamiltonian_field(const GravityParams& gp);
/// The linear map (r, v) -> (r, m v) from configuration to phase space.
SmoothMap legendre_map(double m);

/// (1/2) <p, v>: the kinetic energy once p = m v. ContractError if the
/// two states sit over different positions.
double kinetic_pairing(const PhaseState& ps, const ConfigState& cs, double m);

/// (1/2) m2 |v|^2 - G m1 m2 / |r|.
double total_energy(const GravityParams& gp, const ConfigState& cs);

/// m (r x v). ContractError unless both vectors are 3-dimensional.
Vector angular_momentum(const ConfigState& cs, double m);

/// Mutual forces of two gravitating bodies; force_on_2 = -force_on_1.
struct PairForces {
  Vector on_1;  // F21, exerted by body 2 on body 1
  Vector on_2;  // F12, exerted by body 1 on body 2
};
PairForces pair_forces(double G, double m1, double m2, double min_radius, const Vector& r1,
                       const Vector& r2);

/// State (r1, v1, r2, v2) in R^12 under mutual gravity, with the
/// separation guarded by |r2 - r1| > min_radius.
VectorField two_body_field(double G, double m1, double m2, double min_radius);

/// m1 v1 + m2 v2 for a stacked two-body state.
Vector total_momentum(const Vector& state, double m1, double m2);
/// Kinetic plus mutual potential energy of a stacked two-body state.
double two_body_energy(const Vector& state, double G, double m1, double m2);
/// Total angular momentum about the origin of a stacked two-body state.
Vector two_body_angular_momentum(const Vector& state, double m1, double m2);

}  // namespace functorad::newton
