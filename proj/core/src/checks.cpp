#include "functorad/checks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <future>
#include <numbers>
#include <random>

#include <Eigen/LU>

#include "functorad/dynamics.hpp"
#include "functorad/newton.hpp"
#include "functorad/random_maps.hpp"
#include "functorad/tangent.hpp"
#include "functorad/testing.hpp"

namespace functorad::checks {

namespace {

using sampling::random_vector;

double rel(const Vector& a, const Vector& b) { return (a - b).norm() / std::max(1.0, b.norm()); }

double dyadic(std::mt19937_64& rng) {
  return static_cast<double>(std::uniform_int_distribution<int>(-4096, 4096)(rng)) / 1024.0;
}

Vector dyadic_vector(Eigen::Index n, std::mt19937_64& rng) {
  Vector v(n);
  for (auto& x : v) x = dyadic(rng);
  return v;
}

struct Suite {
  const char* name;
  double threshold;
  std::size_t samples;
  std::function<double(std::mt19937_64&)> body;  // returns worst deviation
};

double functoriality(std::mt19937_64& rng) {
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const auto cp = sampling::random_composable_pair(rng);
    const TangentVector tv{cp.point, cp.direction};
    const TangentVector lhs = tangent_map(compose(cp.g, cp.f), tv);
    const TangentVector rhs = tangent_map(cp.g, tangent_map(cp.f, tv));
    worst = std::max({worst, rel(lhs.base, rhs.base), rel(lhs.dir, rhs.dir)});
  }
  return worst;
}

double ad_vs_fd(std::mt19937_64& rng) {
  double worst = 0.0;
  for (const auto p : sampling::all_primitives()) {
    for (int i = 0; i < 100; ++i) {
      const auto s = sampling::sample_primitive(p, rng);
      worst = std::max(worst, rel(differential(s.map, s.point, s.direction),
                                  fd_oracle(s.map, s.point, s.direction, 1e-5)));
    }
  }
  return worst;
}

SecondTangent random_second(Eigen::Index n, std::mt19937_64& rng) {
  return {random_vector(n, -1, 1, rng), random_vector(n, -1, 1, rng),
          random_vector(n, -1, 1, rng), random_vector(n, -1, 1, rng)};
}

double second_tangent(std::mt19937_64& rng) {
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto cp = sampling::random_composable_pair(rng);
    const SecondTangent st = random_second(cp.f.domain_dim(), rng);
    const Vector direct = stack(second_tangent_map(cp.f, st));
    const Vector lifted = evaluate(tangent_lift(tangent_lift(cp.f)), stack(st));
    worst = std::max(worst, rel(direct, lifted));
  }
  return worst;
}

double flip_naturality(std::mt19937_64& rng) {
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto cp = sampling::random_composable_pair(rng);
    const SecondTangent st = random_second(cp.f.domain_dim(), rng);
    const Vector lhs = stack(second_tangent_map(cp.f, canonical_flip(st)));
    const Vector rhs = stack(canonical_flip(second_tangent_map(cp.f, st)));
    worst = std::max(worst, rel(lhs, rhs));
  }
  return worst;
}

double epsilon_laws(std::mt19937_64& rng) {
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const auto cp = sampling::random_composable_pair(rng);
    const TangentVector tv{cp.point, cp.direction};
    worst = std::max(worst, rel(evaluate(cp.f, projection(tv)), projection(tangent_map(cp.f, tv))));
    const VectorField x(BasicManifold::euclidean(cp.f.domain_dim()),
                        sampling::random_map(cp.f.domain_dim(), cp.f.domain_dim(), 1, rng));
    worst = std::max(worst, rel(projection(x.coalgebra(cp.point)), cp.point));
  }
  return worst;
}

double monad_laws(std::mt19937_64& rng) {
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Eigen::Index n = std::uniform_int_distribution<int>(1, 3)(rng);
    const TangentVector tv{dyadic_vector(n, rng), dyadic_vector(n, rng)};
    const Vector x = stack(tv);
    // mu o eta_T and mu o T(eta).
    const TangentVector left = monad_mult(SecondTangent{tv.base, tv.dir, Vector::Zero(n), Vector::Zero(n)});
    const TangentVector right =
        monad_mult(unstack_second(evaluate(tangent_lift(monad_unit_map(n)), x)));
    worst = std::max({worst, rel(stack(left), x), rel(stack(right), x)});
    // mu o mu_T and mu o T(mu) on a third-level point.
    const Vector t3 = dyadic_vector(8 * n, rng);
    const Vector via_outer =
        stack(monad_mult(unstack_second(evaluate(monad_mult_map(2 * n), t3))));
    const Vector via_lift =
        stack(monad_mult(unstack_second(evaluate(tangent_lift(monad_mult_map(n)), t3))));
    worst = std::max(worst, rel(via_outer, via_lift));
  }
  return worst;
}

Path quadratic_path(const Vector& u, const Vector& e, const Vector& c) {
  const SmoothMap s = SmoothMap::identity(1);
  return Path(SmoothMap::constant(1, u) + apply_linear(Matrix(e), s) +
              apply_linear(Matrix(c), power(s, 2)));
}

double testing_quotient(std::mt19937_64& rng) {
  double mismatches = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Eigen::Index n = std::uniform_int_distribution<int>(1, 3)(rng);
    const Vector u = random_vector(n, -1, 1, rng);
    const Vector e = random_vector(n, -1, 1, rng);
    Vector u2 = u, e2 = e;
    switch (i % 3) {
      case 1: e2 += random_vector(n, -1, 1, rng); break;
      case 2: u2 += random_vector(n, -1, 1, rng); break;
      default: break;
    }
    const Path p1 = quadratic_path(u, e, random_vector(n, -1, 1, rng));
    const Path p2 = quadratic_path(u2, e2, random_vector(n, -1, 1, rng));
    const bool eq = paths_equivalent(p1, p2);
    const bool separated = separating_test_search(p1, p2, 2).has_value();
    if (eq == separated) mismatches += 1.0;
  }
  return mismatches;
}

double dinaturality(std::mt19937_64& rng) {
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Eigen::Index n = std::uniform_int_distribution<int>(1, 3)(rng);
    const Eigen::Index k = std::uniform_int_distribution<int>(1, 3)(rng);
    const SmoothMap f = sampling::random_map(n, k, 2, rng);
    const Path p = quadratic_path(random_vector(n, -1, 1, rng), random_vector(n, -1, 1, rng),
                                  random_vector(n, -1, 1, rng));
    const Test t(sampling::random_map(k, 1, 2, rng));
    worst = std::max(worst, check_dinaturality(f, p, t));
  }
  return worst;
}

double linear_ode(std::mt19937_64&) {
  const VectorField x(BasicManifold::euclidean(1), SmoothMap::identity(1));
  const Trajectory tr = integrate_rk4(x, Vector::Ones(1), 1.0, 1e-3);
  return std::abs(tr.final_state()[0] - std::numbers::e);
}

double picard_vs_rk4(std::mt19937_64&) {
  const VectorField x(BasicManifold::euclidean(1), SmoothMap::identity(1));
  const Vector a = integrate_rk4(x, Vector::Ones(1), 0.5, 1e-3).final_state();
  const Vector b = integrate_picard(x, Vector::Ones(1), 0.5).final_state();
  return (a - b).norm();
}

Vector circular_start() {
  Vector q(6);
  q << 1, 0, 0, 0, 1, 0;
  return q;
}

double orbit_return(std::mt19937_64&) {
  const auto x = newton::lagrangian_field({});
  const Trajectory tr = integrate_rk4(x, circular_start(), 2.0 * std::numbers::pi, 1e-3);
  return (tr.final_state().head(3) - circular_start().head(3)).norm();
}

double orbit_energy(std::mt19937_64&) {
  const newton::GravityParams gp;
  const Trajectory tr =
      integrate_rk4(newton::lagrangian_field(gp), circular_start(), 2.0 * std::numbers::pi, 1e-3);
  const double e0 = newton::total_energy(gp, {tr.states[0].head(3), tr.states[0].tail(3)});
  double worst = 0.0;
  for (const auto& s : tr.states)
    worst = std::max(worst, std::abs(newton::total_energy(gp, {s.head(3), s.tail(3)}) - e0) /
                                std::abs(e0));
  return worst;
}

double free_particle(std::mt19937_64& rng) {
  const newton::GravityParams gp{0.0, 1.0, 1.0, 1e-9};
  Vector q0(6);
  q0 << 1, 0.5, -0.25, random_vector(3, -1, 1, rng);
  const Trajectory tr = integrate_rk4(newton::lagrangian_field(gp), q0, 10.0, 1e-2);
  double worst = 0.0;
  for (std::size_t k = 0; k < tr.size(); ++k) {
    const Vector line = q0.head(3) + tr.times[k] * q0.tail(3);
    worst = std::max(worst, (tr.states[k].head(3) - line).norm());
  }
  return worst;
}

double two_body_momentum(std::mt19937_64&) {
  const double v = std::sqrt(0.5);
  Vector q0(12);
  q0 << -0.5, 0, 0, 0, -v, 0, 0.5, 0, 0, 0, v, 0;
  const Trajectory tr = integrate_rk4(newton::two_body_field(1, 1, 1, 1e-9), q0, 1.0, 1e-3);
  const Vector p0 = newton::total_momentum(q0, 1, 1);
  double worst = 0.0;
  for (const auto& s : tr.states) worst = std::max(worst, (newton::total_momentum(s, 1, 1) - p0).norm());
  return worst;
}

double legendre(std::mt19937_64& rng) {
  const newton::GravityParams gp{1.0, 1.0, 2.0, 1e-9};
  std::vector<Vector> samples;
  for (int i = 0; i < 100; ++i) {
    Vector s = random_vector(6, -2, 2, rng);
    if (s.head(3).norm() < 0.5) s.head(3) += Vector::Constant(3, 1.0);
    samples.push_back(s);
  }
  return check_f_related(newton::legendre_map(gp.m2), newton::lagrangian_field(gp),
                         newton::hamiltonian_field(gp), samples);
}

double cotangent_roundtrip(std::mt19937_64& rng) {
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Eigen::Index n = std::uniform_int_distribution<int>(1, 4)(rng);
    Matrix a = Matrix::Identity(n, n) + 0.3 * Matrix(random_vector(n * n, -1, 1, rng).reshaped(n, n));
    const Vector b = random_vector(n, -1, 1, rng);
    const SmoothMap f = apply_linear(a, SmoothMap::identity(n)) + SmoothMap::constant(n, b);
    const SmoothMap f_inv =
        apply_linear(a.inverse(), SmoothMap::identity(n) - SmoothMap::constant(n, b));
    const Covector cv{random_vector(n, -1, 1, rng), random_vector(n, -1, 1, rng)};
    const Covector back = pullback(f, pushforward_diffeo(f, f_inv, cv), cv.base);
    worst = std::max(worst, rel(back.coeffs, cv.coeffs));
  }
  return worst;
}

double norm_axioms(std::mt19937_64& rng) {
  double failures = 0.0;
  for (const auto& spec : {NormSpec::euclidean(), NormSpec::max(), NormSpec::p_norm(1.0),
                           NormSpec::p_norm(3.0)}) {
    const auto seed = rng();
    failures += static_cast<double>(check_norm_axioms(spec, 100, seed).violations.size());
    failures += static_cast<double>(check_metric_axioms(spec, 100, seed).violations.size());
  }
  return failures;
}

const std::vector<Suite>& suites() {
  static const std::vector<Suite> all{
      {"functoriality", 1e-12, 200, functoriality},
      {"ad-vs-fd", 1e-6, 1400, ad_vs_fd},
      {"second-tangent", 1e-12, 100, second_tangent},
      {"flip-naturality", 1e-10, 100, flip_naturality},
      {"epsilon-laws", 1e-14, 200, epsilon_laws},
      {"monad-laws", 0.0, 100, monad_laws},
      {"testing-quotient", 0.0, 100, testing_quotient},
      {"dinaturality", 1e-12, 100, dinaturality},
      {"linear-ode", 1e-9, 1, linear_ode},
      {"picard-vs-rk4", 1e-6, 1, picard_vs_rk4},
      {"orbit-return", 1e-4, 1, orbit_return},
      {"orbit-energy", 1e-7, 1, orbit_energy},
      {"free-particle", 1e-9, 1, free_particle},
      {"two-body-momentum", 1e-9, 1, two_body_momentum},
      {"legendre-related", 1e-12, 100, legendre},
      {"cotangent-roundtrip", 1e-9, 100, cotangent_roundtrip},
      {"norm-axioms", 0.0, 800, norm_axioms},
  };
  return all;
}

CheckResult run_suite(const Suite& s, std::uint64_t seed) {
  CheckResult r{s.name, false, 0.0, s.threshold, s.samples, {}};
  std::mt19937_64 rng(seed);
  try {
    r.measured = s.body(rng);
    r.passed = r.measured <= s.threshold;
  } catch (const std::exception& e) {
    r.measured = std::numeric_limits<double>::quiet_NaN();
    r.note = e.what();
  }
  return r;
}

}  // namespace

std::vector<CheckResult> run_battery(std::uint64_t seed, bool parallel) {
  std::vector<CheckResult> out;
  const auto& all = suites();
  if (!parallel) {
    for (std::size_t i = 0; i < all.size(); ++i) out.push_back(run_suite(all[i], seed + i));
    return out;
  }
  std::vector<std::future<CheckResult>> pending;
  for (std::size_t i = 0; i < all.size(); ++i)
    pending.push_back(std::async(std::launch::async, run_suite, std::cref(all[i]), seed + i));
  for (auto& f : pending) out.push_back(f.get());
  return out;
}

std::string format_report(const std::vector<CheckResult>& results) {
  std::string out;
  std::size_t passed = 0;
  char buf[256];
  for (const auto& r : results) {
    passed += r.passed ? 1 : 0;
    std::snprintf(buf, sizeof buf, "%-4s %-20s measured=%-12.4g threshold=%-8.1g samples=%zu",
                  r.passed ? "PASS" : "FAIL", r.name.c_str(), r.measured, r.threshold, r.samples);
    out += buf;
    if (!r.note.empty()) out += "  (" + r.note + ")";
    out += "\n";
  }
  std::snprintf(buf, sizeof buf, "%zu/%zu suites passed\n", passed, results.size());
  return out + buf;
}

}  // namespace functorad::checks
