#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "functorad/errors.hpp"
#include "functorad/random_maps.hpp"
#include "functorad/testing.hpp"

using namespace functorad;
using ScalarTest = functorad::Test;
using sampling::random_vector;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

const SmoothMap s = SmoothMap::identity(1);

Path curve(std::vector<SmoothMap> parts) { return Path(tuple(parts)); }

SmoothMap lit(double c) { return SmoothMap::constant(1, Vector::Constant(1, c)); }

const SmoothMap X = SmoothMap::coordinate(2, 0);
const SmoothMap Y = SmoothMap::coordinate(2, 1);

// u + s e + s^2 c
Path quadratic(const Vector& u, const Vector& e, const Vector& c) {
  return Path(SmoothMap::constant(1, u) + apply_linear(Matrix(e), s) +
              apply_linear(Matrix(c), power(s, 2)));
}

}  // namespace

TEST(Correlate, Examples) {
  const Vector u = vec({1, 2, 3}), e = vec({0.5, -1, 2}), c = vec({2, 0, 1});
  EXPECT_DOUBLE_EQ(correlate(line_path(u, e), linear_test(c)), c.dot(e));
  const Path diag = curve({s, scale(2.0, s)});
  EXPECT_EQ(correlate(diag, ScalarTest(X * Y)), 0.0);
  EXPECT_EQ(correlate(diag, ScalarTest(X + Y)), 3.0);
  EXPECT_THROW(correlate(diag, linear_test(vec({1, 2, 3}))), ContractError);
  EXPECT_THROW(correlate(line_path(vec({0, 0}), vec({1, 0})), ScalarTest(reciprocal(X))), DomainError);
}

TEST(Path, Contracts) {
  EXPECT_THROW(Path(SmoothMap::identity(2)), ContractError);
  EXPECT_THROW(Path(s, 0.0), ContractError);
  EXPECT_THROW(ScalarTest(SmoothMap::identity(2)), ContractError);
  const Path p = line_path(vec({1}), vec({2}), 0.5);
  EXPECT_EQ(p.at(0.25)[0], 1.5);
  EXPECT_THROW(p.at(0.5), DomainError);
}

TEST(TangentOfPath, Examples) {
  const TangentVector line = tangent_of_path(line_path(vec({1, 2}), vec({3, 4})));
  EXPECT_EQ(line.base, vec({1, 2}));
  EXPECT_EQ(line.dir, vec({3, 4}));
  const TangentVector circle = tangent_of_path(curve({cos(s), sin(s)}));
  EXPECT_EQ(circle.base, vec({1, 0}));
  EXPECT_EQ(circle.dir, vec({0, 1}));
  const TangentVector constant = tangent_of_path(Path(SmoothMap::constant(1, vec({4, 5}))));
  EXPECT_EQ(constant.base, vec({4, 5}));
  EXPECT_EQ(constant.dir, Vector::Zero(2));
}

TEST(Equivalence, Examples) {
  const Path bent = curve({s, s * s});
  const Path flat = curve({s, lit(0)});
  const Path fast = curve({scale(2.0, s), lit(0)});
  const Path vertical = curve({lit(0), s});
  EXPECT_TRUE(paths_equivalent(bent, flat));
  EXPECT_FALSE(paths_equivalent(flat, fast));
  EXPECT_TRUE(paths_equivalent(bent, bent));
  EXPECT_FALSE(separating_test_search(bent, flat, 2).has_value());
  EXPECT_FALSE(separating_test_search(bent, bent, 1).has_value());
  const auto sep = separating_test_search(flat, vertical, 1);
  ASSERT_TRUE(sep.has_value());
  EXPECT_GT(std::abs(correlate(flat, *sep) - correlate(vertical, *sep)), 1e-9);
  EXPECT_FALSE(paths_equivalent(flat, Path(SmoothMap::constant(1, vec({1, 2, 3})))));
  EXPECT_THROW(separating_test_search(flat, flat, 3), ContractError);
}

TEST(Equivalence, SoundAndCompleteOnRandomPairs) {
  std::mt19937_64 rng(30);
  for (int i = 0; i < 300; ++i) {
    const Eigen::Index n = 1 + i % 3;
    const Vector u = random_vector(n, -1, 1, rng);
    const Vector e = random_vector(n, -1, 1, rng);
    const Path p1 = quadratic(u, e, random_vector(n, -1, 1, rng));
    const Path same = quadratic(u, e, random_vector(n, -1, 1, rng));
    EXPECT_TRUE(paths_equivalent(p1, same));
    EXPECT_FALSE(separating_test_search(p1, same, 2).has_value());
    // A perturbation of the velocity alone, well above the 1e-6 floor.
    Vector e2 = e;
    e2[i % n] += (i % 2 ? 1 : -1) * (1e-5 + 1e-3 * (i % 7));
    const Path moved = quadratic(u, e2, random_vector(n, -1, 1, rng));
    EXPECT_FALSE(paths_equivalent(p1, moved));
    EXPECT_TRUE(separating_test_search(p1, moved, 1).has_value());
  }
}

TEST(Battery, Shape) {
  EXPECT_EQ(monomial_battery(3, 1).size(), 3u);
  EXPECT_EQ(monomial_battery(3, 2).size(), 9u);
  EXPECT_THROW(monomial_battery(2, 0), ContractError);
}

TEST(Dinaturality, Examples) {
  const Path p = curve({sin(s), s * s + s});
  EXPECT_EQ(check_dinaturality(SmoothMap::identity(2), p, ScalarTest(X * Y)), 0.0);
  const SmoothMap diag = tuple({s, s});
  EXPECT_EQ(check_dinaturality(diag, Path(s), ScalarTest(X * Y)), 0.0);
  EXPECT_EQ(correlate(Path(compose(diag, s)), ScalarTest(X * Y)), 0.0);
  std::mt19937_64 rng(31);
  for (int i = 0; i < 100; ++i) {
    const SmoothMap f = sampling::random_map(2, 3, 2, rng);
    const Path q = quadratic(random_vector(2, -1, 1, rng), random_vector(2, -1, 1, rng),
                             random_vector(2, -1, 1, rng));
    const ScalarTest t(sampling::random_map(3, 1, 2, rng));
    const double scale_ref = std::max(1.0, std::abs(correlate(q, ScalarTest(compose(t.map(), f)))));
    EXPECT_LE(check_dinaturality(f, q, t) / scale_ref, 1e-12);
  }
}

TEST(CovectorOfTest, Examples) {
  EXPECT_EQ(covector_of_test(linear_test(vec({1, -2})), vec({7, 8})).coeffs, vec({1, -2}));
  EXPECT_EQ(covector_of_test(ScalarTest(X * Y), vec({2, 3})).coeffs, vec({3, 2}));
}

TEST(Pairing, CorrelationFactorsThroughCovector) {
  std::mt19937_64 rng(32);
  for (int i = 0; i < 100; ++i) {
    const Path p = quadratic(random_vector(3, -1, 1, rng), random_vector(3, -1, 1, rng),
                             random_vector(3, -1, 1, rng));
    const ScalarTest t(sampling::random_map(3, 1, 2, rng));
    const TangentVector tv = tangent_of_path(p);
    const Covector cv = covector_of_test(t, tv.base);
    const double c = correlate(p, t);
    EXPECT_LE(std::abs(c - pair(cv, tv.dir)), 1e-12 * std::max(1.0, std::abs(c)));
    // Line through x with direction e sees the same number.
    EXPECT_LE(std::abs(correlate(line_path(tv.base, tv.dir), t) - c), 1e-12 * std::max(1.0, std::abs(c)));
  }
}

TEST(Pairing, Bilinear) {
  std::mt19937_64 rng(33);
  for (int i = 0; i < 100; ++i) {
    const Covector a{Vector::Zero(3), random_vector(3, -1, 1, rng)};
    const Covector b{Vector::Zero(3), random_vector(3, -1, 1, rng)};
    const Vector v = random_vector(3, -1, 1, rng), w = random_vector(3, -1, 1, rng);
    const double al = 0.75, be = -1.25;
    EXPECT_NEAR(pair({a.base, al * a.coeffs + be * b.coeffs}, v), al * pair(a, v) + be * pair(b, v), 1e-12);
    EXPECT_NEAR(pair(a, al * v + be * w), al * pair(a, v) + be * pair(a, w), 1e-12);
  }
}
