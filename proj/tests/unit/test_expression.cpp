#include <random>

#include <gtest/gtest.h>

#include "functorad/errors.hpp"
#include "functorad/expression.hpp"
#include "functorad/random_maps.hpp"

using namespace functorad;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

}  // namespace

TEST(Parse, RotationField) {
  const SmoothMap f = parse_expression("(x1, -x0)", 2);
  EXPECT_EQ(f.codomain_dim(), 2);
  EXPECT_EQ(evaluate(f, vec({3, 5})), vec({5, -3}));
}

TEST(Parse, Operators) {
  EXPECT_EQ(evaluate(parse_expression("x0 * x0 + 2 * x1 - 1", 2), vec({3, 4}))[0], 16.0);
  EXPECT_EQ(evaluate(parse_expression("x0 / x1", 2), vec({3, 4}))[0], 0.75);
  EXPECT_EQ(evaluate(parse_expression("pow(x, 2)", 2), vec({3, 4})), vec({9, 16}));
  EXPECT_EQ(evaluate(parse_expression("norm(x)", 2), vec({3, 4}))[0], 5.0);
  EXPECT_EQ(evaluate(parse_expression("lin([[1, 2], [0, -1]], x)", 2), vec({3, 4})), vec({11, -4}));
  EXPECT_EQ(evaluate(parse_expression("proj(x, 1, 1)", 2), vec({3, 4})), vec({4, 4}));
  EXPECT_EQ(evaluate(parse_expression("const(1.5, -2)", 1), vec({9})), vec({1.5, -2}));
  EXPECT_EQ(evaluate(parse_expression("tuple(x0)", 2), vec({3, 4})), vec({3}));
  EXPECT_DOUBLE_EQ(evaluate(parse_expression("sin(x0) + cos(x0) + exp(x0) + recip(x1)", 2),
                            vec({0, 4}))[0],
                   0 + 1 + 1 + 0.25);
  EXPECT_THROW(evaluate(parse_expression("guard(x, 1)", 2), vec({0.5, 0.5})), DomainError);
}

TEST(Parse, Errors) {
  for (const char* bad : {"", "x0 +", "(x0, x1", "foo(x)", "x5", "pow(x, y)", "lin([[1,2],[3]], x)",
                          "x0 + x", "#", "x0 x1", "proj(x)"}) {
    try {
      parse_expression(bad, 2);
      ADD_FAILURE() << "accepted: " << bad;
    } catch (const ParseError& e) {
      EXPECT_EQ(e.field(), "expression") << bad;
    }
  }
}

TEST(Print, Canonical) {
  EXPECT_EQ(to_string(parse_expression("(x1, -x0)", 2)), "(x1, (-1 * x0))");
  EXPECT_EQ(to_string(SmoothMap::identity(3)), "x");
}

TEST(RoundTrip, HandWritten) {
  for (const char* text : {"(x1, -x0)", "sin(x0) * exp(x1) / (1 + x0 * x0)",
                           "guard(lin([[1, 0.5], [0, 2]], x) + const(0.1, 0.2), 1e-9)",
                           "pow(norm(x), 3)", "tuple(norm(x))", "proj(sin(x), 0)"}) {
    const SmoothMap f = parse_expression(text, 2);
    const std::string printed = to_string(f);
    const SmoothMap g = parse_expression(printed, 2);
    EXPECT_TRUE(f == g) << text << " -> " << printed;
    EXPECT_EQ(to_string(g), printed);
  }
}

TEST(RoundTrip, RandomMaps) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 200; ++i) {
    const Eigen::Index n = 1 + i % 3;
    const SmoothMap f = sampling::random_map(n, 1 + i % 2, 3, rng);
    const SmoothMap g = parse_expression(to_string(f), n);
    ASSERT_TRUE(f == g) << to_string(f);
    const Vector u = sampling::random_vector(n, -1, 1, rng);
    EXPECT_EQ(evaluate(f, u), evaluate(g, u));
  }
}
