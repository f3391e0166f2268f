#include "functorad/tangent.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "functorad/errors.hpp"

namespace functorad {

// ---- regions ----------------------------------------------------------------

Region Region::whole(Eigen::Index n) {
  return Region(n, [n](const Vector& x) { return x.size() == n; }, true, "R^" + std::to_string(n));
}

Region Region::ball(Vector center, double radius) {
  if (!(radius > 0.0)) throw ContractError("ball: radius must be positive");
  const auto n = center.size();
  return Region(
      n,
      [c = std::move(center), radius](const Vector& x) {
        return x.size() == c.size() && (x - c).norm() < radius;
      },
      true, "ball");
}

Region Region::box(Vector lower, Vector upper) {
  require_same_dim(lower, upper, "box");
  if (!((upper - lower).array() > 0.0).all()) throw ContractError("box: empty");
  const auto n = lower.size();
  return Region(
      n,
      [lo = std::move(lower), hi = std::move(upper)](const Vector& x) {
        return x.size() == lo.size() && (x.array() > lo.array()).all() &&
               (x.array() < hi.array()).all();
      },
      true, "box");
}

Region Region::punctured(Eigen::Index n, Eigen::Index k, double radius) {
  if (k < 1 || k > n) throw ContractError("punctured: bad block size");
  if (!(radius >= 0.0)) throw ContractError("punctured: bad radius");
  return Region(
      n,
      [n, k, radius](const Vector& x) { return x.size() == n && x.head(k).norm() > radius; },
      false, "punctured");
}

Region Region::custom(Eigen::Index n, std::function<bool(const Vector&)> contains, bool convex,
                      std::string name) {
  return Region(n, std::move(contains), convex, std::move(name));
}

bool Region::contains(const Vector& x) const {
  return x.size() == dim_ && x.allFinite() && pred_(x);
}

void BasicManifold::require(const Vector& x, const char* what) const {
  if (x.size() != dim()) throw ContractError(std::string(what) + ": dimension mismatch");
  if (!contains(x)) throw DomainError(std::string(what) + ": point outside region " + region.name());
}

std::size_t count_convexity_failures(const BasicManifold& m, const std::vector<Vector>& points,
                                     std::size_t steps) {
  std::size_t failures = 0;
  for (std::size_t i = 0; i + 1 < points.size(); i += 2) {
    const Vector& x = points[i];
    const Vector& y = points[i + 1];
    if (!m.contains(x) || !m.contains(y)) continue;
    for (std::size_t s = 0; s <= steps; ++s) {
      const double t = static_cast<double>(s) / static_cast<double>(steps);
      if (!m.contains(t * x + (1.0 - t) * y)) {
        ++failures;
        break;
      }
    }
  }
  return failures;
}

// ---- pairing ------------------------------------------------------------------

double pair(const Covector& cv, const Vector& w) {
  require_same_dim(cv.coeffs, w, "pair");
  return cv.coeffs.dot(w);
}

double pair(const Covector& cv, const Vector& w, const InnerProduct& ip) {
  return inner(cv.coeffs, w, ip);
}

// ---- tangent functor --------------------------------------------------------

TangentVector tangent_map(const SmoothMap& f, const TangentVector& tv) {
  JetValue j = jet(f, tv.base, tv.dir);
  return {std::move(j.value), std::move(j.first)};
}

namespace {

struct Lifted {
  SmoothMap value;
  SmoothMap dir;
};

std::vector<Eigen::Index> iota(Eigen::Index from, Eigen::Index count) {
  std::vector<Eigen::Index> v(static_cast<std::size_t>(count));
  std::iota(v.begin(), v.end(), from);
  return v;
}

class Lifter {
 public:
  explicit Lifter(Eigen::Index n)
      : n_(n),
        value_in_(SmoothMap::projection(2 * n, iota(0, n))),
        dir_in_(SmoothMap::projection(2 * n, iota(n, n))) {}

  const Lifted& lift(const NodePtr& node) {
    if (auto it = memo_.find(node.get()); it != memo_.end()) return it->second;
    Lifted l = compute(*node);
    return memo_.emplace(node.get(), std::move(l)).first->second;
  }

 private:
  SmoothMap zeros(Eigen::Index m) const { return SmoothMap::constant(2 * n_, Vector::Zero(m)); }

  Lifted compute(const Node& node) {
    switch (node.op) {
      case Op::Input:
        return {value_in_, dir_in_};
      case Op::Constant:
        return {SmoothMap::constant(2 * n_, node.constant), zeros(node.dim)};
      case Op::Project: {
        const Lifted& a = lift(node.args[0]);
        return {project(a.value, node.indices), project(a.dir, node.indices)};
      }
      case Op::Linear: {
        const Lifted& a = lift(node.args[0]);
        return {apply_linear(node.matrix, a.value), apply_linear(node.matrix, a.dir)};
      }
      case Op::Add: {
        const Lifted& a = lift(node.args[0]);
        const Lifted& b = lift(node.args[1]);
        return {a.value + b.value, a.dir + b.dir};
      }
      case Op::Scale: {
        const Lifted& a = lift(node.args[0]);
        return {scale(node.scalar, a.value), scale(node.scalar, a.dir)};
      }
      case Op::Multiply: {
        const Lifted& a = lift(node.args[0]);
        const Lifted& b = lift(node.args[1]);
        return {a.value * b.value, a.dir * b.value + a.value * b.dir};
      }
      case Op::Tuple: {
        std::vector<SmoothMap> vals, dirs;
        for (const auto& arg : node.args) {
          const Lifted& a = lift(arg);
          vals.push_back(a.value);
          dirs.push_back(a.dir);
        }
        return {tuple(vals), tuple(dirs)};
      }
      case Op::Sin: {
        const Lifted& a = lift(node.args[0]);
        return {sin(a.value), a.dir * cos(a.value)};
      }
      case Op::Cos: {
        const Lifted& a = lift(node.args[0]);
        return {cos(a.value), scale(-1.0, a.dir * sin(a.value))};
      }
      case Op::Exp: {
        const Lifted& a = lift(node.args[0]);
        SmoothMap e = exp(a.value);
        return {e, a.dir * e};
      }
      case Op::Reciprocal: {
        const Lifted& a = lift(node.args[0]);
        SmoothMap r = reciprocal(a.value);
        return {r, scale(-1.0, a.dir * (r * r))};
      }
      case Op::Norm: {
        const Lifted& a = lift(node.args[0]);
        SmoothMap nv = euclidean_norm(a.value);
        return {nv, dot(a.value, a.dir) * reciprocal(nv)};
      }
      case Op::Power: {
        const Lifted& a = lift(node.args[0]);
        const int k = node.exponent;
        SmoothMap v = power(a.value, k);
        if (k == 0) return {v, zeros(node.dim)};
        if (k == 1) return {v, a.dir};
        return {v, scale(static_cast<double>(k), power(a.value, k - 1) * a.dir)};
      }
      case Op::Guard: {
        const Lifted& a = lift(node.args[0]);
        return {guard(a.value, node.scalar), a.dir};
      }
    }
    throw ContractError("tangent_lift: unknown op");
  }

  Eigen::Index n_;
  SmoothMap value_in_;
  SmoothMap dir_in_;
  std::unordered_map<const Node*, Lifted> memo_;
};

}  // namespace

SmoothMap tangent_lift(const SmoothMap& f) {
  Lifter lifter(f.domain_dim());
  const Lifted& l = lifter.lift(f.body());
  return tuple({l.value, l.dir});
}

SecondTangent second_tangent_map(const SmoothMap& f, const SecondTangent& st) {
  SecondJet j = second_jet(f, st.base, st.e1, st.e2, st.e3);
  return {std::move(j.value), std::move(j.d1), std::move(j.d2), std::move(j.d12)};
}

SecondTangent canonical_flip(const SecondTangent& st) { return {st.base, st.e2, st.e1, st.e3}; }

Vector projection(const TangentVector& tv) { return tv.base; }

TangentVector zero_section(const Vector& u) { return {u, Vector::Zero(u.size())}; }

SecondTangent delta_candidate(const TangentVector& tv) { return {tv.base, tv.dir, tv.dir, tv.dir}; }

TangentVector monad_unit(const BasicManifold& m, const Vector& u) {
  m.require(u, "monad_unit");
  return zero_section(u);
}

TangentVector monad_mult(const SecondTangent& st) { return {st.base, st.e1 + st.e2}; }

// ---- stacked coordinates ------------------------------------------------------

Vector stack(const TangentVector& tv) {
  require_same_dim(tv.base, tv.dir, "stack");
  Vector v(2 * tv.base.size());
  v << tv.base, tv.dir;
  return v;
}

Vector stack(const SecondTangent& st) {
  const auto n = st.base.size();
  if (st.e1.size() != n || st.e2.size() != n || st.e3.size() != n)
    throw ContractError("stack: second tangent components differ in dimension");
  Vector v(4 * n);
  v << st.base, st.e1, st.e2, st.e3;
  return v;
}

TangentVector unstack_tangent(const Vector& v) {
  if (v.size() % 2 != 0) throw ContractError("unstack_tangent: odd dimension");
  const auto n = v.size() / 2;
  return {v.head(n), v.tail(n)};
}

SecondTangent unstack_second(const Vector& v) {
  if (v.size() % 4 != 0) throw ContractError("unstack_second: dimension not divisible by 4");
  const auto n = v.size() / 4;
  return {v.segment(0, n), v.segment(n, n), v.segment(2 * n, n), v.segment(3 * n, n)};
}

SmoothMap monad_unit_map(Eigen::Index n) {
  const SmoothMap id = SmoothMap::identity(n);
  return tuple({id, SmoothMap::constant(n, Vector::Zero(n))});
}

SmoothMap monad_mult_map(Eigen::Index n) {
  // (u, e1, e2, e3) -> (u, e1 + e2)
  const SmoothMap u = SmoothMap::projection(4 * n, iota(0, n));
  const SmoothMap e1 = SmoothMap::projection(4 * n, iota(n, n));
  const SmoothMap e2 = SmoothMap::projection(4 * n, iota(2 * n, n));
  return tuple({u, e1 + e2});
}

// ---- cotangent side -----------------------------------------------------------

namespace {
constexpr double kBaseTol = 1e-9;
}

Covector pullback(const SmoothMap& f, const Covector& cv, const Vector& u) {
  const Vector fu = evaluate(f, u);
  if (cv.base.size() != fu.size() || cv.coeffs.size() != fu.size())
    throw ContractError("pullback: covector dimension does not match codomain");
  if ((fu - cv.base).norm() > kBaseTol) {
    std::ostringstream os;
    os << "pullback: covector base differs from f(u) by " << (fu - cv.base).norm();
    throw ContractError(os.str());
  }
  Vector q(f.domain_dim());
  for (Eigen::Index j = 0; j < f.domain_dim(); ++j)
    q[j] = cv.coeffs.dot(differential(f, u, Vector::Unit(f.domain_dim(), j)));
  return {u, q};
}

Covector pushforward_diffeo(const SmoothMap& f, const SmoothMap& f_inv, const Covector& cv) {
  if (f.domain_dim() != f.codomain_dim() || f_inv.domain_dim() != f.codomain_dim() ||
      f_inv.codomain_dim() != f.domain_dim())
    throw ContractError("pushforward_diffeo: maps are not mutually inverse in shape");
  require_same_dim(cv.base, cv.coeffs, "pushforward_diffeo");
  const Vector& u = cv.base;
  const double delta = 1e-3 * std::max(1.0, u.norm());
  std::vector<Vector> battery{u};
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    battery.push_back(u + delta * Vector::Unit(u.size(), i));
    battery.push_back(u - delta * Vector::Unit(u.size(), i));
  }
  for (const Vector& x : battery) {
    const double err = (evaluate(f_inv, evaluate(f, x)) - x).norm();
    if (err > kBaseTol * std::max(1.0, x.norm())) {
      std::ostringstream os;
      os << "pushforward_diffeo: f_inv(f(x)) misses x by " << err;
      throw ContractError(os.str());
    }
  }
  const Vector y = evaluate(f, u);
  return {y, jacobian(f_inv, y).transpose() * cv.coeffs};
}

TransitionReport check_transition_smooth(const SmoothMap& phi0, const SmoothMap& phi0_inv,
                                         const SmoothMap& phi1,
                                         const std::vector<Vector>& overlap_samples) {
  const SmoothMap transition = compose(phi1, phi0_inv);
  TransitionReport report;
  for (const Vector& s : overlap_samples) {
    const Vector point = evaluate(phi0_inv, s);
    if ((evaluate(phi0, point) - s).norm() > kBaseTol * std::max(1.0, s.norm()))
      throw DomainError("check_transition_smooth: sample outside the first chart image");
    evaluate(phi1, point);

    const double h = fd_step(s);
    const auto n = s.size();
    for (Eigen::Index i = 0; i < n; ++i) {
      const Vector ei = Vector::Unit(n, i);
      const Vector ad = differential(transition, s, ei);
      const Vector fd = fd_oracle(transition, s, ei, h);
      report.max_first_deviation = std::max(report.max_first_deviation, (ad - fd).norm());
      for (Eigen::Index j = 0; j < n; ++j) {
        const Vector ej = Vector::Unit(n, j);
        const Vector ad2 = second_differential(transition, s, ei, ej);
        const Vector fd2 = (differential(transition, s + h * ei, ej) -
                            differential(transition, s - h * ei, ej)) /
                           (2.0 * h);
        report.max_second_deviation = std::max(report.max_second_deviation, (ad2 - fd2).norm());
      }
    }
    ++report.samples;
  }
  return report;
}

namespace {

// (x, y) -> (x, y, y, y) on stacked coordinates of any even dimension.
Vector delta_stacked(const Vector& v) {
  const auto h = v.size() / 2;
  Vector out(4 * h);
  out << v.head(h), v.tail(h), v.tail(h), v.tail(h);
  return out;
}

SmoothMap delta_map(Eigen::Index n) {
  const SmoothMap u = SmoothMap::projection(2 * n, iota(0, n));
  const SmoothMap e = SmoothMap::projection(2 * n, iota(n, n));
  return tuple({u, e, e, e});
}

}  // namespace

DeltaReport delta_report(const SmoothMap& f, const std::vector<TangentVector>& samples) {
  DeltaReport r;
  if (samples.empty()) return r;
  const SmoothMap lifted_delta = tangent_lift(delta_map(samples.front().base.size()));
  auto dist = [](const TangentVector& a, const TangentVector& b) {
    return std::max((a.base - b.base).norm(), (a.dir - b.dir).norm());
  };
  for (const auto& tv : samples) {
    const SecondTangent d = delta_candidate(tv);
    // eps at TU projects TTU onto its base point (u, e1).
    r.counit_outer = std::max(r.counit_outer, dist({d.base, d.e1}, tv));
    // T eps sends (u, e1, e2, e3) to (u, e2).
    r.counit_inner = std::max(r.counit_inner, dist({d.base, d.e2}, tv));

    // delta_{TU} o delta vs T(delta) o delta, on stacked third-level points.
    const Vector dd = stack(d);
    const Vector via_outer = delta_stacked(dd);
    const Vector via_lift = evaluate(lifted_delta, dd);
    r.coassociativity = std::max(r.coassociativity, (via_outer - via_lift).norm());

    const SecondTangent lhs = second_tangent_map(f, d);
    const TangentVector ftv = tangent_map(f, tv);
    const SecondTangent rhs = delta_candidate(ftv);
    r.naturality = std::max(r.naturality, (stack(lhs) - stack(rhs)).norm());
  }
  return r;
}

}  // namespace functorad
