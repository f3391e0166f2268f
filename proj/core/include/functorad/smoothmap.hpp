#pragma once

#include <initializer_list>
#include <memory>
#include <optional>
#include <vector>

#include "functorad/vecspace.hpp"

namespace functorad {

/// Primitive operations an expression body is built from.
enum class Op {
  Input,       // the whole argument vector
  Constant,    // fixed vector
  Project,     // select coordinates of the operand
  Linear,      // matrix times operand
  Add,         // operand sum, equal dims
  Scale,       // scalar times operand
  Multiply,    // pointwise product; a 1-dim operand broadcasts
  Tuple,       // concatenation of operands
  Sin,
  Cos,
  Exp,
  Reciprocal,  // pointwise 1/x, undefined at 0
  Norm,        // euclidean norm, 1-dim result
  Power,       // pointwise x^k, integer k >= 0
  Guard,       // passes the operand through iff ||operand|| > radius
};

const char* op_name(Op op);

struct Node;
using NodePtr = std::shared_ptr<const Node>;

/// One vertex of an expression DAG. Immutable once built; subtrees are
/// shared freely between maps.
struct Node {
  Op op = Op::Input;
  Eigen::Index dim = 0;  // output dimension
  std::vector<NodePtr> args;
  Vector constant;                     // Constant
  std::vector<Eigen::Index> indices;   // Project
  Matrix matrix;                       // Linear
  double scalar = 0.0;                 // Scale factor, Guard radius
  int exponent = 0;                    // Power
};

/// A smooth map R^n -> R^m held as an expression DAG over a single Input
/// leaf of dimension n. Composition substitutes the inner body for the
/// outer map's Input, so the result is again an ordinary expression and
/// can be differentiated or tangent-lifted further.
class SmoothMap {
 public:
  /// Identity on R^n.
  static SmoothMap identity(Eigen::Index n);
  static SmoothMap constant(Eigen::Index n, Vector value);
  /// x -> x_i, as a map R^n -> R.
  static SmoothMap coordinate(Eigen::Index n, Eigen::Index i);
  static SmoothMap projection(Eigen::Index n, std::vector<Eigen::Index> indices);
  static SmoothMap linear(Matrix a);

  /// Wraps an existing body. Throws ContractError if the DAG is
  /// ill-formed or its Input leaf has a dimension other than n.
  static SmoothMap from_body(Eigen::Index n, NodePtr body);

  Eigen::Index domain_dim() const { return domain_dim_; }
  Eigen::Index codomain_dim() const { return body_->dim; }
  const NodePtr& body() const { return body_; }

  /// This map restricted to the open region ||u|| > radius.
  SmoothMap restricted(double radius) const;

 private:
  SmoothMap(Eigen::Index n, NodePtr body) : domain_dim_(n), body_(std::move(body)) {}
  Eigen::Index domain_dim_;
  NodePtr body_;
};

SmoothMap operator+(const SmoothMap& a, const SmoothMap& b);
SmoothMap operator-(const SmoothMap& a, const SmoothMap& b);
SmoothMap operator-(const SmoothMap& a);
SmoothMap operator*(const SmoothMap& a, const SmoothMap& b);
SmoothMap operator*(double s, const SmoothMap& a);
/// a * reciprocal(b).
SmoothMap operator/(const SmoothMap& a, const SmoothMap& b);

SmoothMap scale(double s, const SmoothMap& a);
SmoothMap multiply(const SmoothMap& a, const SmoothMap& b);
SmoothMap tuple(const std::vector<SmoothMap>& parts);
SmoothMap project(const SmoothMap& a, std::vector<Eigen::Index> indices);
SmoothMap apply_linear(const Matrix& m, const SmoothMap& a);
SmoothMap sin(const SmoothMap& a);
SmoothMap cos(const SmoothMap& a);
SmoothMap exp(const SmoothMap& a);
SmoothMap reciprocal(const SmoothMap& a);
SmoothMap euclidean_norm(const SmoothMap& a);
SmoothMap power(const SmoothMap& a, int k);
/// Same values as a; evaluation fails with DomainError where ||a|| <= radius.
SmoothMap guard(const SmoothMap& a, double radius);
/// Sum of pointwise products, a 1-dim map.
SmoothMap dot(const SmoothMap& a, const SmoothMap& b);

/// g after f. Throws ContractError unless f's codomain is g's domain.
SmoothMap compose(const SmoothMap& g, const SmoothMap& f);

/// Deep structural equality of bodies (same ops, parameters, shape).
bool structurally_equal(const SmoothMap& a, const SmoothMap& b);
inline bool operator==(const SmoothMap& a, const SmoothMap& b) { return structurally_equal(a, b); }

/// Value with first and optional second directional derivative.
struct JetValue {
  Vector value;
  Vector first;
  std::optional<Vector> second;
};

/// f(u). DomainError on a guard violation or a reciprocal of zero;
/// ContractError on dimension mismatch.
Vector evaluate(const SmoothMap& f, const Vector& u);

/// Df(u) e by forward propagation of first-order jets.
Vector differential(const SmoothMap& f, const Vector& u, const Vector& e);

/// (f(u), Df(u) e) in one pass.
JetValue jet(const SmoothMap& f, const Vector& u, const Vector& e);

/// (f(u), Df(u) e1, D^2 f(u)(e1, e2)) via nested jets.
JetValue jet2(const SmoothMap& f, const Vector& u, const Vector& e1, const Vector& e2);

/// m x n matrix whose column j is Df(u) basis_j.
Matrix jacobian(const SmoothMap& f, const Vector& u);

/// D^2 f(u)(e1, e2).
Vector second_differential(const SmoothMap& f, const Vector& u, const Vector& e1,
                           const Vector& e2);

/// Components of T^2 f at (u, e1, e2, e3), computed in one nested-jet pass:
/// (f(u), Df e1, Df e2, D^2 f(e1, e2) + Df e3).
struct SecondJet {
  Vector value;
  Vector d1;
  Vector d2;
  Vector d12;
};
SecondJet second_jet(const SmoothMap& f, const Vector& u, const Vector& e1,
                     const Vector& e2, const Vector& e3);

/// Default central-difference step, 1e-5 * max(1, ||u||).
double fd_step(const Vector& u);

/// (f(u + h e) - f(u - h e)) / (2h).
Vector fd_oracle(const SmoothMap& f, const Vector& u, const Vector& e, double h);

/// Bilinear map given componentwise: B(a, b)_k = a^T M_k b.
struct BilinearMap {
  std::vector<Matrix> components;

  Eigen::Index left_dim() const;
  Eigen::Index right_dim() const;
  Vector operator()(const Vector& a, const Vector& b) const;

  /// Product of reals, R x R -> R.
  static BilinearMap scalar_product();
  /// <a, b>_G for a Gram matrix G.
  static BilinearMap inner(const Matrix& gram);
};

/// B(f1, f2) as a smooth map.
SmoothMap apply_bilinear(const BilinearMap& b, const SmoothMap& f1, const SmoothMap& f2);

/// || D(B(f1,f2))(u) e - B(Df1(u) e, f2(u)) - B(f1(u), Df2(u) e) ||.
double check_leibniz(const BilinearMap& b, const SmoothMap& f1, const SmoothMap& f2,
                     const Vector& u, const Vector& e);

}  // namespace functorad
