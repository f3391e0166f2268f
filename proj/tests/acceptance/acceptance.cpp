// Acceptance suite: one line per criterion, non-zero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/LU>

#include "functorad/dynamics.hpp"
#include "functorad/newton.hpp"
#include "functorad/random_maps.hpp"
#include "functorad/scenario.hpp"
#include "functorad/tangent.hpp"
#include "functorad/testing.hpp"

using namespace functorad;
using sampling::random_vector;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double rel(const Vector& a, const Vector& b) { return (a - b).norm() / std::max(1.0, b.norm()); }

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Central difference written out here rather than borrowed from the library.
Vector central_difference(const SmoothMap& f, const Vector& u, const Vector& e, double h) {
  return (evaluate(f, u + h * e) - evaluate(f, u - h * e)) / (2.0 * h);
}

Vector dyadic(Eigen::Index n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> k(-8192, 8192);
  Vector v(n);
  for (auto& x : v) x = k(rng) / 2048.0;
  return v;
}

Vector cat(std::initializer_list<Vector> parts) {
  Eigen::Index n = 0;
  for (const auto& p : parts) n += p.size();
  Vector out(n);
  Eigen::Index at = 0;
  for (const auto& p : parts) {
    out.segment(at, p.size()) = p;
    at += p.size();
  }
  return out;
}

Outcome functoriality() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(1001);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const auto cp = sampling::random_composable_pair(rng);
    const TangentVector tv{cp.point, cp.direction};
    const TangentVector lhs = tangent_map(compose(cp.g, cp.f), tv);
    const TangentVector rhs = tangent_map(cp.g, tangent_map(cp.f, tv));
    worst = std::max({worst, rel(lhs.base, rhs.base), rel(lhs.dir, rhs.dir)});
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-12 && secs < 5.0,
          fmt("200 pairs, max rel deviation %.3g (<= 1e-12), %.3f s (< 5 s)", worst, secs)};
}

Outcome ad_vs_fd() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(1002);
  double worst = 0.0;
  std::string worst_name = "-";
  for (const auto p : sampling::all_primitives()) {
    for (int i = 0; i < 100; ++i) {
      const auto s = sampling::sample_primitive(p, rng);
      const Vector ad = differential(s.map, s.point, s.direction);
      const Vector fd = central_difference(s.map, s.point, s.direction, 1e-5);
      const double err = (ad - fd).norm() / std::max(1.0, ad.norm());
      if (err > worst) {
        worst = err;
        worst_name = sampling::primitive_name(p);
      }
    }
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-6 && secs < 5.0,
          fmt("14 primitives x 100, max rel error %.3g (<= 1e-6), %.3f s (< 5 s)", worst, secs) +
              ", worst " + worst_name};
}

Outcome second_tangent() {
  std::mt19937_64 rng(1003);
  double lift = 0.0, flip = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto cp = sampling::random_composable_pair(rng);
    const auto n = cp.f.domain_dim();
    const SecondTangent st{random_vector(n, -1, 1, rng), random_vector(n, -1, 1, rng),
                           random_vector(n, -1, 1, rng), random_vector(n, -1, 1, rng)};
    const Vector direct = stack(second_tangent_map(cp.f, st));
    lift = std::max(lift, rel(direct, evaluate(tangent_lift(tangent_lift(cp.f)), stack(st))));
    // flip by hand: swap the e1 and e2 blocks.
    const SecondTangent swapped{st.base, st.e2, st.e1, st.e3};
    const SecondTangent out = second_tangent_map(cp.f, st);
    const SecondTangent out_swapped{out.base, out.e2, out.e1, out.e3};
    flip = std::max(flip, rel(stack(second_tangent_map(cp.f, swapped)), stack(out_swapped)));
  }
  return {lift <= 1e-12 && flip <= 1e-10,
          fmt("100 samples, double-lift deviation %.3g (<= 1e-12), flip naturality %.3g (<= 1e-10)", lift,
              flip)};
}

Outcome epsilon_laws() {
  std::mt19937_64 rng(1004);
  double naturality = 0.0, section = 0.0;
  for (int i = 0; i < 200; ++i) {
    const auto cp = sampling::random_composable_pair(rng);
    const TangentVector tv{cp.point, cp.direction};
    naturality = std::max(naturality, rel(tangent_map(cp.f, tv).base, evaluate(cp.f, tv.base)));
    const auto n = cp.f.domain_dim();
    const VectorField x(BasicManifold::euclidean(n), sampling::random_map(n, n, 2, rng));
    section = std::max(section, rel(projection(x.coalgebra(cp.point)), cp.point));
  }
  return {naturality <= 1e-14 && section <= 1e-14,
          fmt("200 samples, eps-naturality %.3g, cross-section %.3g (<= 1e-14)", naturality, section)};
}

Outcome monad_laws() {
  std::mt19937_64 rng(1005);
  std::size_t failures = 0;
  for (int i = 0; i < 100; ++i) {
    const Eigen::Index n = 1 + i % 3;
    const Vector u = dyadic(n, rng), e = dyadic(n, rng);
    const Vector zero = Vector::Zero(n);
    const Vector tv = cat({u, e});
    // mu o eta_T: eta at the point (u, e) of TU is ((u, e), (0, 0)).
    if (stack(monad_mult({u, e, zero, zero})) != tv) ++failures;
    // mu o T eta, with T eta taken from the lifted unit map.
    if (stack(monad_mult(unstack_second(evaluate(tangent_lift(monad_unit_map(n)), tv)))) != tv) ++failures;
    // Associativity on a third-level point (u, e1, e2, e3, d0, d1, d2, d3).
    const Vector t3 = dyadic(8 * n, rng);
    auto blk = [&](int k) -> Vector { return t3.segment(k * n, n); };
    // mu at TU sums the two first-order directions of the doubled bundle:
    // ((u, e1), (e2, e3), (d0, d1), (d2, d3)) -> ((u, e1), (e2 + d0, e3 + d1)).
    const SecondTangent mu_t{blk(0), blk(1), blk(2) + blk(4), blk(3) + blk(5)};
    const Vector left = stack(monad_mult(mu_t));
    const Vector right = stack(monad_mult(unstack_second(evaluate(tangent_lift(monad_mult_map(n)), t3))));
    const Vector want = cat({blk(0), Vector(blk(1) + blk(2) + blk(4))});
    if (left != right || left != want) ++failures;
  }
  return {failures == 0, fmt("100 samples, %.0f exact mismatches (unit laws and associativity)",
                             static_cast<double>(failures))};
}

Path quadratic(const Vector& u, const Vector& e, const Vector& c) {
  const SmoothMap s = SmoothMap::identity(1);
  return Path(SmoothMap::constant(1, u) + apply_linear(Matrix(e), s) + apply_linear(Matrix(c), power(s, 2)));
}

Outcome testing_quotient() {
  std::mt19937_64 rng(1006);
  std::size_t mismatches = 0, equivalent = 0;
  for (int i = 0; i < 100; ++i) {
    const Eigen::Index n = 1 + i % 3;
    const Vector u = random_vector(n, -1, 1, rng), e = random_vector(n, -1, 1, rng);
    Vector u2 = u, e2 = e;
    if (i % 4 == 1) e2 += random_vector(n, -1, 1, rng);
    if (i % 4 == 2) u2 += random_vector(n, -1, 1, rng);
    if (i % 4 == 3) e2 = random_vector(n, -1, 1, rng);
    const Path p1 = quadratic(u, e, random_vector(n, -1, 1, rng));
    const Path p2 = quadratic(u2, e2, random_vector(n, -1, 1, rng));
    const bool eq = paths_equivalent(p1, p2);
    equivalent += eq ? 1 : 0;
    if (eq == separating_test_search(p1, p2, 2).has_value()) ++mismatches;
  }
  double dinat = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Eigen::Index n = 1 + i % 3, k = 1 + (i / 3) % 3;
    const SmoothMap f = sampling::random_map(n, k, 2, rng);
    const Path p = quadratic(random_vector(n, -1, 1, rng), random_vector(n, -1, 1, rng), random_vector(n, -1, 1, rng));
    const Test t(sampling::random_map(k, 1, 2, rng));
    const double ref = std::max(1.0, std::abs(correlate(p, Test(compose(t.map(), f)))));
    dinat = std::max(dinat, check_dinaturality(f, p, t) / ref);
  }
  return {mismatches == 0 && dinat <= 1e-12,
          fmt("100 pairs (%.0f equivalent), %.0f mismatches; dinaturality %.3g (<= 1e-12)",
              static_cast<double>(equivalent), static_cast<double>(mismatches), dinat)};
}

Outcome linear_ode() {
  const VectorField x(BasicManifold::euclidean(1), SmoothMap::identity(1));
  const Vector one = Vector::Ones(1);
  auto err = [&](double dt) {
    return std::abs(integrate_rk4(x, one, 1.0, dt).final_state()[0] - std::numbers::e);
  };
  const double e3 = err(1e-3);
  const double ratio = err(1e-2) / err(5e-3);
  const Trajectory pic = integrate_picard(x, one, 0.5);
  const Trajectory rk = integrate_rk4(x, one, 0.5, pic.dt);
  double sup = 0.0;
  for (std::size_t k = 0; k < pic.size(); ++k) sup = std::max(sup, std::abs(pic.states[k][0] - rk.states[k][0]));
  return {e3 <= 1e-9 && ratio >= 12 && ratio <= 20 && sup <= 1e-6,
          fmt("|x(1)-e| %.3g (<= 1e-9), halving ratio %.3f (in [12,20]), picard-rk4 sup %.3g (<= 1e-6)", e3,
              ratio, sup)};
}

Vector circular_q0() {
  Vector q(6);
  q << 1, 0, 0, 0, 1, 0;
  return q;
}

Outcome circular_orbit() {
  const auto t0 = Clock::now();
  const newton::GravityParams gp{1, 1, 1, 1e-9};
  const Vector q0 = circular_q0();
  const Trajectory tr = integrate_rk4(newton::lagrangian_field(gp), q0, 2 * std::numbers::pi, 1e-3);
  const double ret = (tr.final_state().head(3) - q0.head(3)).norm();
  // Closed-form invariants of the unit circular orbit: E = -1/2, L = (0, 0, 1).
  double de = 0.0, dl = 0.0;
  for (const auto& s : tr.states) {
    const double e = 0.5 * s.tail(3).squaredNorm() - 1.0 / s.head(3).norm();
    de = std::max(de, std::abs(e + 0.5) / 0.5);
    const Vector l = (Vector(3) << s[1] * s[5] - s[2] * s[4], s[2] * s[3] - s[0] * s[5],
                      s[0] * s[4] - s[1] * s[3]).finished();
    dl = std::max(dl, (l - Vector::Unit(3, 2)).norm());
  }
  const double secs = seconds_since(t0);
  return {ret <= 1e-4 && de <= 1e-7 && dl <= 1e-8 && secs < 10.0,
          fmt("return %.3g (<= 1e-4), energy drift %.3g (<= 1e-7), ", ret, de) +
              fmt("L drift %.3g (<= 1e-8), %.3f s (< 10 s)", dl, secs)};
}

Outcome newton_principles() {
  Vector q0(6);
  q0 << 1, -2, 0.5, 0.3, 0.1, -0.2;
  const Trajectory free = integrate_rk4(newton::lagrangian_field({0.0, 1, 1, 1e-9}), q0, 10.0, 1e-3);
  double np1 = 0.0;
  for (std::size_t k = 0; k < free.size(); ++k)
    np1 = std::max(np1, (free.states[k].head(3) - (q0.head(3) + free.times[k] * q0.tail(3))).norm());

  const double v = std::sqrt(0.5);
  Vector b0(12);
  b0 << -0.5, 0, 0, 0, -v, 0, 0.5, 0, 0, 0, v, 0;
  const Trajectory two = integrate_rk4(newton::two_body_field(1, 1, 1, 1e-9), b0, 1.0, 1e-3);
  double np3 = 0.0;
  for (const auto& s : two.states) np3 = std::max(np3, (s.segment(3, 3) + s.segment(9, 3)).norm());
  return {np1 <= 1e-9 && np3 <= 1e-9,
          fmt("NP1 line deviation %.3g (<= 1e-9), NP3 momentum drift %.3g (<= 1e-9)", np1, np3)};
}

Outcome lagrange_hamilton() {
  const newton::GravityParams gp{1, 1, 2, 1e-9};
  std::mt19937_64 rng(1010);
  std::vector<Vector> samples;
  for (int i = 0; i < 100; ++i) {
    Vector s = random_vector(6, -2, 2, rng);
    while (s.head(3).norm() < 0.2) s.head(3) = random_vector(3, -2, 2, rng);
    samples.push_back(s);
  }
  const VectorField lag = newton::lagrangian_field(gp), ham = newton::hamiltonian_field(gp);
  const double related = check_f_related(newton::legendre_map(gp.m2), lag, ham, samples);

  const Vector q0 = circular_q0();
  Vector p0 = q0;
  p0.tail(3) *= gp.m2;
  const double period = 2 * std::numbers::pi;
  const Trajectory a = integrate_rk4(lag, q0, period, 1e-3);
  const Trajectory b = integrate_rk4(ham, p0, period, 1e-3);
  double sup = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    Vector mapped = a.states[k];
    mapped.tail(3) *= gp.m2;
    sup = std::max(sup, (mapped - b.states[k]).cwiseAbs().maxCoeff());
  }
  return {related <= 1e-12 && sup <= 1e-9,
          fmt("f-relatedness %.3g (<= 1e-12), orbit sup difference %.3g (<= 1e-9)", related, sup)};
}

Outcome cotangent_roundtrip() {
  std::mt19937_64 rng(1011);
  double worst = 0.0, oracle = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Eigen::Index n = 1 + i % 4;
    Matrix a = Matrix::Identity(n, n);
    for (Eigen::Index r = 0; r < n; ++r)
      for (Eigen::Index c = 0; c < n; ++c) a(r, c) += 0.4 * random_vector(1, -1, 1, rng)[0];
    const Vector b = random_vector(n, -1, 1, rng);
    const SmoothMap f = apply_linear(a, SmoothMap::identity(n)) + SmoothMap::constant(n, b);
    const SmoothMap f_inv = apply_linear(a.inverse(), SmoothMap::identity(n) - SmoothMap::constant(n, b));
    const Covector cv{random_vector(n, -2, 2, rng), random_vector(n, -1, 1, rng)};
    const Covector pushed = pushforward_diffeo(f, f_inv, cv);
    oracle = std::max(oracle, rel(pushed.coeffs, a.transpose().lu().solve(cv.coeffs)));
    worst = std::max(worst, rel(pullback(f, pushed, cv.base).coeffs, cv.coeffs));
  }
  return {worst <= 1e-9 && oracle <= 1e-9,
          fmt("100 affine diffeos, roundtrip %.3g (<= 1e-9), A^-T oracle %.3g", worst, oracle)};
}

std::string preset_config(const scenario::PresetInfo& info) {
  std::string text = std::string("[scenario]\npreset = ") + scenario::preset_name(info.preset) + "\n";
  if (info.preset == scenario::Preset::Custom)
    text += "[field]\nexpr = (x1, -1 * sin(x0))\n[initial]\nstate = 1, 0\n[params]\nt_end = 5\ndt = 1e-2\n";
  return text;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome cli_determinism() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "functorad_acceptance";
  fs::create_directories(dir);
  std::size_t compared = 0, differing = 0;
  for (const auto& info : scenario::presets()) {
    const std::string name = scenario::preset_name(info.preset);
    const fs::path cfg_path = dir / (name + ".ini");
    std::ofstream(cfg_path, std::ios::binary) << preset_config(info);
    std::string first, second;
#ifdef FUNCTORAD_CLI_PATH
    for (int run = 0; run < 2; ++run) {
      const fs::path out = dir / (name + "_" + std::to_string(run) + ".csv");
      fs::remove(out);
      const std::string cmd = std::string(FUNCTORAD_CLI_PATH) + " run " + cfg_path.string() + " --out " +
                              out.string() + " > /dev/null";
      if (std::system(cmd.c_str()) != 0) return {false, "CLI run failed for preset " + name};
      (run ? second : first) = slurp(out);
    }
#else
    const auto cfg = scenario::parse_config(slurp(cfg_path));
    first = scenario::csv_text(scenario::run_scenario(cfg));
    second = scenario::csv_text(scenario::run_scenario(cfg));
#endif
    ++compared;
    if (first.empty() || first != second) ++differing;
  }
  return {differing == 0, fmt("%.0f presets run twice, %.0f byte differences", static_cast<double>(compared),
                              static_cast<double>(differing))};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"functoriality", functoriality},
      {"ad-vs-fd oracle", ad_vs_fd},
      {"second tangent", second_tangent},
      {"epsilon-naturality and cross-section", epsilon_laws},
      {"monad laws", monad_laws},
      {"testing quotient", testing_quotient},
      {"linear ode", linear_ode},
      {"circular orbit", circular_orbit},
      {"NP1 and NP3", newton_principles},
      {"lagrangian/hamiltonian equivalence", lagrange_hamilton},
      {"pullback/pushforward roundtrip", cotangent_roundtrip},
      {"cli determinism", cli_determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::printf("%s [%2zu] %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failed), criteria.size());
  return failed == 0 ? 0 : 1;
}
