#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "functorad/smoothmap.hpp"
#include "functorad/vecspace.hpp"

namespace functorad {

/// Open subset of R^n a manifold lives on. `convex` records whether the
/// predicate describes an open convex set; punctured regions such as
/// R^3 minus a ball are allowed but flagged non-convex.
class Region {
 public:
  static Region whole(Eigen::Index n);
  static Region ball(Vector center, double radius);
  static Region box(Vector lower, Vector upper);
  /// Points whose first `k` coordinates have norm > radius; the rest are free.
  static Region punctured(Eigen::Index n, Eigen::Index k, double radius);
  static Region custom(Eigen::Index n, std::function<bool(const Vector&)> contains,
                       bool convex, std::string name);

  Eigen::Index dim() const { return dim_; }
  bool convex() const { return convex_; }
  const std::string& name() const { return name_; }
  bool contains(const Vector& x) const;

 private:
  Region(Eigen::Index n, std::function<bool(const Vector&)> pred, bool convex, std::string name)
      : dim_(n), pred_(std::move(pred)), convex_(convex), name_(std::move(name)) {}
  Eigen::Index dim_;
  std::function<bool(const Vector&)> pred_;
  bool convex_;
  std::string name_;
};

/// An open region of R^n with a norm: the chart-free case where the
/// tangent bundle is simply U x R^n.
struct BasicManifold {
  Region region;
  NormSpec norm = NormSpec::euclidean();

  explicit BasicManifold(Region r, NormSpec spec = NormSpec::euclidean())
      : region(std::move(r)), norm(spec) {}
  static BasicManifold euclidean(Eigen::Index n) { return BasicManifold(Region::whole(n)); }

  Eigen::Index dim() const { return region.dim(); }
  bool contains(const Vector& x) const { return region.contains(x); }
  /// Throws DomainError when x is outside the region.
  void require(const Vector& x, const char* what) const;
};

/// Samples pairs of points inside the region and checks that the segment
/// between them stays inside. Returns the number of failures.
std::size_t count_convexity_failures(const BasicManifold& m, const std::vector<Vector>& points,
                                     std::size_t steps = 16);

/// A point (u, e) of TU = U x E.
struct TangentVector {
  Vector base;
  Vector dir;
};

/// A point (u, e1, e2, e3) of TTU = (U x E) x (E x E). The outer tangent
/// is taken at the inner point (u, e1) with direction (e2, e3).
struct SecondTangent {
  Vector base;
  Vector e1;
  Vector e2;
  Vector e3;
};

/// A linear functional at a point, stored by its Riesz representative:
/// w -> <coeffs, w>.
struct Covector {
  Vector base;
  Vector coeffs;
};

/// <cv, w> under the identity Gram matrix.
double pair(const Covector& cv, const Vector& w);
/// <cv, w> under a supplied inner product.
double pair(const Covector& cv, const Vector& w, const InnerProduct& ip);

/// Tf(u, e) = (f(u), Df(u) e).
TangentVector tangent_map(const SmoothMap& f, const TangentVector& tv);

/// Tf as a new smooth map R^{2n} -> R^{2m} on stacked (u, e). The result
/// can be lifted again, which is how TTf is built.
SmoothMap tangent_lift(const SmoothMap& f);

/// TTf(u, e1, e2, e3) = (f(u), Df e1, Df e2, D^2 f(e1, e2) + Df e3).
SecondTangent second_tangent_map(const SmoothMap& f, const SecondTangent& st);

/// (u, e1, e2, e3) -> (u, e2, e1, e3).
SecondTangent canonical_flip(const SecondTangent& st);

/// Bundle projection (u, e) -> u.
Vector projection(const TangentVector& tv);
/// Zero section u -> (u, 0); same as monad_unit without a region check.
TangentVector zero_section(const Vector& u);

/// (u, e) -> (u, e, e, e). Coassociative but not a comonad structure:
/// it fails naturality in f once f is non-linear (see DeltaReport).
SecondTangent delta_candidate(const TangentVector& tv);

/// u -> (u, 0); DomainError if u is outside m.
TangentVector monad_unit(const BasicManifold& m, const Vector& u);
/// (u, e1, e2, e3) -> (u, e1 + e2): the sum of the two projections of TTU
/// onto TU.
TangentVector monad_mult(const SecondTangent& st);

/// Stacked-coordinate helpers, used to feed bundle points to lifted maps.
Vector stack(const TangentVector& tv);
Vector stack(const SecondTangent& st);
TangentVector unstack_tangent(const Vector& v);
SecondTangent unstack_second(const Vector& v);

/// monad_unit and monad_mult as smooth maps on stacked coordinates, so
/// they can be tangent-lifted (T eta, T mu).
SmoothMap monad_unit_map(Eigen::Index n);
SmoothMap monad_mult_map(Eigen::Index n);

/// Pulls a covector at f(u) back to u: q = Df(u)^T p. ContractError if
/// cv.base differs from f(u) by more than 1e-9.
Covector pullback(const SmoothMap& f, const Covector& cv, const Vector& u);

/// Direct image of a covector at u along an invertible f, given its
/// inverse: acts as w -> <cv, Df^{-1}(f(u)) w>. ContractError unless
/// f_inv(f(x)) = x within 1e-9 on a small battery around u.
Covector pushforward_diffeo(const SmoothMap& f, const SmoothMap& f_inv, const Covector& cv);

struct TransitionReport {
  std::size_t samples = 0;
  double max_first_deviation = 0.0;   // |D tau - FD(tau)|
  double max_second_deviation = 0.0;  // |D^2 tau - FD(D tau)|
};

/// Checks the transition map phi1 o phi0_inv against finite differences at
/// each overlap sample (given in phi0 coordinates). DomainError if a
/// sample falls outside either chart.
TransitionReport check_transition_smooth(const SmoothMap& phi0, const SmoothMap& phi0_inv,
                                         const SmoothMap& phi1,
                                         const std::vector<Vector>& overlap_samples);

/// Diagnostics for delta_candidate on sample points and a map f.
struct DeltaReport {
  double counit_outer = 0.0;   // max |eps_T(delta(tv)) - tv|
  double counit_inner = 0.0;   // max |T eps(delta(tv)) - tv|
  double coassociativity = 0.0;
  double naturality = 0.0;     // max |TTf(delta(tv)) - delta(Tf(tv))|
};
DeltaReport delta_report(const SmoothMap& f, const std::vector<TangentVector>& samples);

}  // namespace functorad
