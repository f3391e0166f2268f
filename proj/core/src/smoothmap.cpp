#include "functorad/smoothmap.hpp"

#include <cmath>
#include <set>
#include <sstream>
#include <type_traits>
#include <unordered_map>
#include <unordered_set>

#include "functorad/dual.hpp"
#include "functorad/errors.hpp"

namespace functorad {

const char* op_name(Op op) {
  switch (op) {
    case Op::Input: return "input";
    case Op::Constant: return "const";
    case Op::Project: return "proj";
    case Op::Linear: return "lin";
    case Op::Add: return "add";
    case Op::Scale: return "scale";
    case Op::Multiply: return "mul";
    case Op::Tuple: return "tuple";
    case Op::Sin: return "sin";
    case Op::Cos: return "cos";
    case Op::Exp: return "exp";
    case Op::Reciprocal: return "recip";
    case Op::Norm: return "norm";
    case Op::Power: return "pow";
    case Op::Guard: return "guard";
  }
  return "?";
}

namespace {

[[noreturn]] void contract(const std::string& msg) { throw ContractError(msg); }

std::shared_ptr<Node> make(Op op, Eigen::Index dim, std::vector<NodePtr> args = {}) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->dim = dim;
  n->args = std::move(args);
  return n;
}

NodePtr unary(Op op, const NodePtr& a) { return make(op, a->dim, {a}); }

// Checks one node's local shape rules; children are assumed checked.
void check_node(const Node& n) {
  auto arity = [&](std::size_t k) {
    if (n.args.size() != k) contract(std::string(op_name(n.op)) + ": wrong arity");
    for (const auto& a : n.args)
      if (!a) contract(std::string(op_name(n.op)) + ": null operand");
  };
  if (n.dim < 1) contract(std::string(op_name(n.op)) + ": dimension must be >= 1");
  switch (n.op) {
    case Op::Input: arity(0); break;
    case Op::Constant:
      arity(0);
      if (n.constant.size() != n.dim || !n.constant.allFinite())
        contract("const: bad value");
      break;
    case Op::Project:
      arity(1);
      if (static_cast<Eigen::Index>(n.indices.size()) != n.dim) contract("proj: bad indices");
      for (auto i : n.indices)
        if (i < 0 || i >= n.args[0]->dim) contract("proj: index out of range");
      break;
    case Op::Linear:
      arity(1);
      if (n.matrix.cols() != n.args[0]->dim || n.matrix.rows() != n.dim)
        contract("lin: matrix shape does not match operand");
      if (!n.matrix.allFinite()) contract("lin: non-finite matrix");
      break;
    case Op::Add:
      arity(2);
      if (n.args[0]->dim != n.dim || n.args[1]->dim != n.dim) contract("add: dimension mismatch");
      break;
    case Op::Scale:
      arity(1);
      if (n.args[0]->dim != n.dim || !std::isfinite(n.scalar)) contract("scale: bad operand");
      break;
    case Op::Multiply: {
      arity(2);
      const auto da = n.args[0]->dim, db = n.args[1]->dim;
      if (!(da == db || da == 1 || db == 1) || n.dim != std::max(da, db))
        contract("mul: dimension mismatch");
      break;
    }
    case Op::Tuple: {
      if (n.args.empty()) contract("tuple: no operands");
      Eigen::Index total = 0;
      for (const auto& a : n.args) {
        if (!a) contract("tuple: null operand");
        total += a->dim;
      }
      if (total != n.dim) contract("tuple: dimension mismatch");
      break;
    }
    case Op::Sin:
    case Op::Cos:
    case Op::Exp:
    case Op::Reciprocal:
      arity(1);
      if (n.args[0]->dim != n.dim) contract("pointwise op: dimension mismatch");
      break;
    case Op::Norm:
      arity(1);
      if (n.dim != 1) contract("norm: result must be 1-dimensional");
      break;
    case Op::Power:
      arity(1);
      if (n.exponent < 0) contract("pow: exponent must be >= 0");
      if (n.args[0]->dim != n.dim) contract("pow: dimension mismatch");
      break;
    case Op::Guard:
      arity(1);
      if (n.args[0]->dim != n.dim) contract("guard: dimension mismatch");
      if (!(n.scalar >= 0.0) || !std::isfinite(n.scalar)) contract("guard: bad radius");
      break;
  }
}

void validate(const NodePtr& root, Eigen::Index n) {
  std::unordered_set<const Node*> seen;
  std::vector<const Node*> stack{root.get()};
  if (!root) contract("null body");
  while (!stack.empty()) {
    const Node* cur = stack.back();
    stack.pop_back();
    if (!seen.insert(cur).second) continue;
    check_node(*cur);
    if (cur->op == Op::Input && cur->dim != n) contract("input leaf dimension differs from domain");
    for (const auto& a : cur->args) stack.push_back(a.get());
  }
}

void require_domain(const SmoothMap& a, const SmoothMap& b, const char* what) {
  if (a.domain_dim() != b.domain_dim())
    contract(std::string(what) + ": operands have different domains");
}

NodePtr substitute(const NodePtr& node, const NodePtr& replacement,
                   std::unordered_map<const Node*, NodePtr>& memo) {
  if (auto it = memo.find(node.get()); it != memo.end()) return it->second;
  NodePtr out;
  if (node->op == Op::Input) {
    out = replacement;
  } else if (node->args.empty()) {
    out = node;
  } else {
    std::vector<NodePtr> args;
    args.reserve(node->args.size());
    bool changed = false;
    for (const auto& a : node->args) {
      args.push_back(substitute(a, replacement, memo));
      changed = changed || args.back() != a;
    }
    if (changed) {
      auto copy = std::make_shared<Node>(*node);
      copy->args = std::move(args);
      out = copy;
    } else {
      out = node;
    }
  }
  memo.emplace(node.get(), out);
  return out;
}

using NodePair = std::pair<const Node*, const Node*>;

bool nodes_equal(const Node* a, const Node* b, std::set<NodePair>& proven) {
  if (a == b) return true;
  const NodePair key{a, b};
  if (proven.count(key)) return true;
  if (a->op != b->op || a->dim != b->dim || a->args.size() != b->args.size()) return false;
  switch (a->op) {
    case Op::Constant:
      if (a->constant != b->constant) return false;
      break;
    case Op::Project:
      if (a->indices != b->indices) return false;
      break;
    case Op::Linear:
      if (a->matrix.rows() != b->matrix.rows() || a->matrix.cols() != b->matrix.cols() ||
          a->matrix != b->matrix)
        return false;
      break;
    case Op::Scale:
    case Op::Guard:
      if (a->scalar != b->scalar) return false;
      break;
    case Op::Power:
      if (a->exponent != b->exponent) return false;
      break;
    default:
      break;
  }
  for (std::size_t i = 0; i < a->args.size(); ++i)
    if (!nodes_equal(a->args[i].get(), b->args[i].get(), proven)) return false;
  proven.insert(key);
  return true;
}

// ---- evaluation over a generic scalar ------------------------------------

template <class T>
T lift_const(double c) {
  return T(c);
}

template <class T>
T ipow(const T& x, int k) {
  if (k == 0) return lift_const<T>(1.0);
  T r = x;
  for (int i = 1; i < k; ++i) r = r * x;
  return r;
}

template <class T>
double primal_norm(const std::vector<T>& v) {
  double s = 0.0;
  for (const auto& x : v) s += primal(x) * primal(x);
  return std::sqrt(s);
}

template <class T>
class Evaluator {
 public:
  explicit Evaluator(const std::vector<T>& input) : input_(input) {}

  const std::vector<T>& eval(const Node* n) {
    if (auto it = memo_.find(n); it != memo_.end()) return it->second;
    auto value = compute(n);
    return memo_.emplace(n, std::move(value)).first->second;
  }

 private:
  std::vector<T> compute(const Node* n) {
    const auto dim = static_cast<std::size_t>(n->dim);
    std::vector<T> out;
    out.reserve(dim);
    switch (n->op) {
      case Op::Input:
        return input_;
      case Op::Constant:
        for (double c : n->constant) out.push_back(lift_const<T>(c));
        return out;
      case Op::Project: {
        const auto& a = eval(n->args[0].get());
        for (auto i : n->indices) out.push_back(a[static_cast<std::size_t>(i)]);
        return out;
      }
      case Op::Linear: {
        const auto& a = eval(n->args[0].get());
        for (Eigen::Index r = 0; r < n->matrix.rows(); ++r) {
          T acc = n->matrix(r, 0) * a[0];
          for (Eigen::Index c = 1; c < n->matrix.cols(); ++c)
            acc = acc + n->matrix(r, c) * a[static_cast<std::size_t>(c)];
          out.push_back(acc);
        }
        return out;
      }
      case Op::Add: {
        const auto& a = eval(n->args[0].get());
        const auto& b = eval(n->args[1].get());
        for (std::size_t i = 0; i < dim; ++i) out.push_back(a[i] + b[i]);
        return out;
      }
      case Op::Scale: {
        const auto& a = eval(n->args[0].get());
        for (const auto& x : a) out.push_back(n->scalar * x);
        return out;
      }
      case Op::Multiply: {
        const auto& a = eval(n->args[0].get());
        const auto& b = eval(n->args[1].get());
        for (std::size_t i = 0; i < dim; ++i)
          out.push_back(a[a.size() == 1 ? 0 : i] * b[b.size() == 1 ? 0 : i]);
        return out;
      }
      case Op::Tuple:
        for (const auto& arg : n->args) {
          const auto& a = eval(arg.get());
          out.insert(out.end(), a.begin(), a.end());
        }
        return out;
      case Op::Sin:
        for (const auto& x : eval(n->args[0].get())) out.push_back(sin_of(x));
        return out;
      case Op::Cos:
        for (const auto& x : eval(n->args[0].get())) out.push_back(cos_of(x));
        return out;
      case Op::Exp:
        for (const auto& x : eval(n->args[0].get())) out.push_back(exp(x));
        return out;
      case Op::Reciprocal:
        for (const auto& x : eval(n->args[0].get())) {
          if (primal(x) == 0.0) throw DomainError("recip: division by zero");
          out.push_back(recip(x));
        }
        return out;
      case Op::Norm: {
        const auto& a = eval(n->args[0].get());
        T acc = a[0] * a[0];
        for (std::size_t i = 1; i < a.size(); ++i) acc = acc + a[i] * a[i];
        if constexpr (!std::is_same_v<T, double>) {
          if (primal(acc) == 0.0) throw DomainError("norm: not differentiable at 0");
        }
        out.push_back(sqrt(acc));
        return out;
      }
      case Op::Power:
        for (const auto& x : eval(n->args[0].get())) out.push_back(ipow(x, n->exponent));
        return out;
      case Op::Guard: {
        const auto& a = eval(n->args[0].get());
        const double r = primal_norm(a);
        if (!(r > n->scalar)) {
          std::ostringstream os;
          os << "guard violated: norm " << r << " <= " << n->scalar;
          throw DomainError(os.str());
        }
        return a;
      }
    }
    return out;
  }

  const std::vector<T>& input_;
  std::unordered_map<const Node*, std::vector<T>> memo_;
};

void require_input(const SmoothMap& f, const Vector& u, const char* what) {
  if (u.size() != f.domain_dim()) {
    std::ostringstream os;
    os << what << ": point has dimension " << u.size() << ", map expects " << f.domain_dim();
    throw ContractError(os.str());
  }
  if (!u.allFinite()) throw DomainError(std::string(what) + ": non-finite point");
}

void require_direction(const SmoothMap& f, const Vector& e, const char* what) {
  if (e.size() != f.domain_dim())
    throw ContractError(std::string(what) + ": direction dimension mismatch");
  if (!e.allFinite()) throw DomainError(std::string(what) + ": non-finite direction");
}

using D1 = Dual<double>;
using D2 = Dual<D1>;

std::vector<D1> seed1(const Vector& u, const Vector& e) {
  std::vector<D1> x;
  x.reserve(static_cast<std::size_t>(u.size()));
  for (Eigen::Index i = 0; i < u.size(); ++i) x.emplace_back(u[i], e[i]);
  return x;
}

template <class T>
std::vector<T> run(const SmoothMap& f, const std::vector<T>& x) {
  Evaluator<T> ev(x);
  return ev.eval(f.body().get());
}

}  // namespace

// ---- SmoothMap construction ------------------------------------------------

SmoothMap SmoothMap::identity(Eigen::Index n) {
  if (n < 1) contract("identity: dimension must be >= 1");
  return SmoothMap(n, make(Op::Input, n));
}

SmoothMap SmoothMap::constant(Eigen::Index n, Vector value) {
  if (n < 1) contract("constant: domain dimension must be >= 1");
  auto node = make(Op::Constant, value.size());
  node->constant = std::move(value);
  check_node(*node);
  return SmoothMap(n, node);
}

SmoothMap SmoothMap::coordinate(Eigen::Index n, Eigen::Index i) {
  return projection(n, {i});
}

SmoothMap SmoothMap::projection(Eigen::Index n, std::vector<Eigen::Index> indices) {
  return project(identity(n), std::move(indices));
}

SmoothMap SmoothMap::linear(Matrix a) {
  const auto n = a.cols();
  return apply_linear(a, identity(n));
}

SmoothMap SmoothMap::from_body(Eigen::Index n, NodePtr body) {
  if (n < 1) contract("from_body: dimension must be >= 1");
  validate(body, n);
  return SmoothMap(n, std::move(body));
}

SmoothMap SmoothMap::restricted(double radius) const {
  return compose(*this, guard(identity(domain_dim_), radius));
}

SmoothMap operator+(const SmoothMap& a, const SmoothMap& b) {
  require_domain(a, b, "add");
  auto node = make(Op::Add, a.codomain_dim(), {a.body(), b.body()});
  check_node(*node);
  return SmoothMap::from_body(a.domain_dim(), node);
}

SmoothMap operator-(const SmoothMap& a) { return scale(-1.0, a); }
SmoothMap operator-(const SmoothMap& a, const SmoothMap& b) { return a + scale(-1.0, b); }
SmoothMap operator*(const SmoothMap& a, const SmoothMap& b) { return multiply(a, b); }
SmoothMap operator*(double s, const SmoothMap& a) { return scale(s, a); }
SmoothMap operator/(const SmoothMap& a, const SmoothMap& b) { return multiply(a, reciprocal(b)); }

SmoothMap scale(double s, const SmoothMap& a) {
  auto node = make(Op::Scale, a.codomain_dim(), {a.body()});
  node->scalar = s;
  check_node(*node);
  return SmoothMap::from_body(a.domain_dim(), node);
}

SmoothMap multiply(const SmoothMap& a, const SmoothMap& b) {
  require_domain(a, b, "mul");
  auto node = make(Op::Multiply, std::max(a.codomain_dim(), b.codomain_dim()),
                   {a.body(), b.body()});
  check_node(*node);
  return SmoothMap::from_body(a.domain_dim(), node);
}

SmoothMap tuple(const std::vector<SmoothMap>& parts) {
  if (parts.empty()) contract("tuple: no operands");
  std::vector<NodePtr> args;
  Eigen::Index total = 0;
  for (const auto& p : parts) {
    require_domain(parts.front(), p, "tuple");
    args.push_back(p.body());
    total += p.codomain_dim();
  }
  return SmoothMap::from_body(parts.front().domain_dim(), make(Op::Tuple, total, std::move(args)));
}

SmoothMap project(const SmoothMap& a, std::vector<Eigen::Index> indices) {
  auto node = make(Op::Project, static_cast<Eigen::Index>(indices.size()), {a.body()});
  node->indices = std::move(indices);
  check_node(*node);
  return SmoothMap::from_body(a.domain_dim(), node);
}

SmoothMap apply_linear(const Matrix& m, const SmoothMap& a) {
  auto node = make(Op::Linear, m.rows(), {a.body()});
  node->matrix = m;
  check_node(*node);
  return SmoothMap::from_body(a.domain_dim(), node);
}

SmoothMap sin(const SmoothMap& a) { return SmoothMap::from_body(a.domain_dim(), unary(Op::Sin, a.body())); }
SmoothMap cos(const SmoothMap& a) { return SmoothMap::from_body(a.domain_dim(), unary(Op::Cos, a.body())); }
SmoothMap exp(const SmoothMap& a) { return SmoothMap::from_body(a.domain_dim(), unary(Op::Exp, a.body())); }
SmoothMap reciprocal(const SmoothMap& a) {
  return SmoothMap::from_body(a.domain_dim(), unary(Op::Reciprocal, a.body()));
}
SmoothMap euclidean_norm(const SmoothMap& a) {
  return SmoothMap::from_body(a.domain_dim(), make(Op::Norm, 1, {a.body()}));
}

SmoothMap power(const SmoothMap& a, int k) {
  auto node = make(Op::Power, a.codomain_dim(), {a.body()});
  node->exponent = k;
  check_node(*node);
  return SmoothMap::from_body(a.domain_dim(), node);
}

SmoothMap guard(const SmoothMap& a, double radius) {
  auto node = make(Op::Guard, a.codomain_dim(), {a.body()});
  node->scalar = radius;
  check_node(*node);
  return SmoothMap::from_body(a.domain_dim(), node);
}

SmoothMap dot(const SmoothMap& a, const SmoothMap& b) {
  if (a.codomain_dim() != b.codomain_dim()) contract("dot: dimension mismatch");
  return apply_linear(Matrix::Ones(1, a.codomain_dim()), multiply(a, b));
}

SmoothMap compose(const SmoothMap& g, const SmoothMap& f) {
  if (f.codomain_dim() != g.domain_dim()) {
    std::ostringstream os;
    os << "compose: inner codomain " << f.codomain_dim() << " != outer domain " << g.domain_dim();
    contract(os.str());
  }
  std::unordered_map<const Node*, NodePtr> memo;
  return SmoothMap::from_body(f.domain_dim(), substitute(g.body(), f.body(), memo));
}

bool structurally_equal(const SmoothMap& a, const SmoothMap& b) {
  if (a.domain_dim() != b.domain_dim()) return false;
  std::set<NodePair> proven;
  return nodes_equal(a.body().get(), b.body().get(), proven);
}

// ---- evaluation and differentiation ---------------------------------------

Vector evaluate(const SmoothMap& f, const Vector& u) {
  require_input(f, u, "evaluate");
  std::vector<double> x(u.begin(), u.end());
  const auto y = run(f, x);
  return Eigen::Map<const Vector>(y.data(), static_cast<Eigen::Index>(y.size()));
}

JetValue jet(const SmoothMap& f, const Vector& u, const Vector& e) {
  require_input(f, u, "differential");
  require_direction(f, e, "differential");
  const auto y = run(f, seed1(u, e));
  JetValue out{Vector(f.codomain_dim()), Vector(f.codomain_dim()), std::nullopt};
  for (std::size_t i = 0; i < y.size(); ++i) {
    out.value[static_cast<Eigen::Index>(i)] = y[i].v;
    out.first[static_cast<Eigen::Index>(i)] = y[i].d;
  }
  return out;
}

Vector differential(const SmoothMap& f, const Vector& u, const Vector& e) {
  return jet(f, u, e).first;
}

Matrix jacobian(const SmoothMap& f, const Vector& u) {
  Matrix j(f.codomain_dim(), f.domain_dim());
  for (Eigen::Index c = 0; c < f.domain_dim(); ++c)
    j.col(c) = differential(f, u, Vector::Unit(f.domain_dim(), c));
  return j;
}

SecondJet second_jet(const SmoothMap& f, const Vector& u, const Vector& e1, const Vector& e2,
                     const Vector& e3) {
  require_input(f, u, "second_jet");
  require_direction(f, e1, "second_jet");
  require_direction(f, e2, "second_jet");
  require_direction(f, e3, "second_jet");
  std::vector<D2> x;
  x.reserve(static_cast<std::size_t>(u.size()));
  for (Eigen::Index i = 0; i < u.size(); ++i) x.emplace_back(D1(u[i], e1[i]), D1(e2[i], e3[i]));
  const auto y = run(f, x);
  const auto m = f.codomain_dim();
  SecondJet out{Vector(m), Vector(m), Vector(m), Vector(m)};
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& yi = y[static_cast<std::size_t>(i)];
    out.value[i] = yi.v.v;
    out.d1[i] = yi.v.d;
    out.d2[i] = yi.d.v;
    out.d12[i] = yi.d.d;
  }
  return out;
}

JetValue jet2(const SmoothMap& f, const Vector& u, const Vector& e1, const Vector& e2) {
  auto sj = second_jet(f, u, e1, e2, Vector::Zero(u.size()));
  return {std::move(sj.value), std::move(sj.d1), std::move(sj.d12)};
}

Vector second_differential(const SmoothMap& f, const Vector& u, const Vector& e1,
                           const Vector& e2) {
  return *jet2(f, u, e1, e2).second;
}

double fd_step(const Vector& u) { return 1e-5 * std::max(1.0, u.norm()); }

Vector fd_oracle(const SmoothMap& f, const Vector& u, const Vector& e, double h) {
  if (!(h > 0.0)) contract("fd_oracle: step must be positive");
  require_input(f, u, "fd_oracle");
  require_direction(f, e, "fd_oracle");
  const Vector plus = evaluate(f, u + h * e);
  const Vector minus = evaluate(f, u - h * e);
  return (plus - minus) / (2.0 * h);
}

// ---- bilinear maps and the Leibniz rule -----------------------------------

Eigen::Index BilinearMap::left_dim() const {
  return components.empty() ? 0 : components.front().rows();
}

Eigen::Index BilinearMap::right_dim() const {
  return components.empty() ? 0 : components.front().cols();
}

Vector BilinearMap::operator()(const Vector& a, const Vector& b) const {
  if (a.size() != left_dim() || b.size() != right_dim())
    contract("bilinear: operand dimension mismatch");
  Vector out(static_cast<Eigen::Index>(components.size()));
  for (std::size_t k = 0; k < components.size(); ++k)
    out[static_cast<Eigen::Index>(k)] = a.dot(components[k] * b);
  return out;
}

BilinearMap BilinearMap::scalar_product() { return {{Matrix::Ones(1, 1)}}; }

BilinearMap BilinearMap::inner(const Matrix& gram) { return {{gram}}; }

SmoothMap apply_bilinear(const BilinearMap& b, const SmoothMap& f1, const SmoothMap& f2) {
  if (b.components.empty()) contract("bilinear: no components");
  for (const auto& m : b.components)
    if (m.rows() != b.left_dim() || m.cols() != b.right_dim())
      contract("bilinear: components have inconsistent shapes");
  if (f1.codomain_dim() != b.left_dim() || f2.codomain_dim() != b.right_dim())
    contract("bilinear: map codomains do not match the pairing");
  std::vector<SmoothMap> parts;
  for (const auto& m : b.components) parts.push_back(dot(f1, apply_linear(m, f2)));
  return parts.size() == 1 ? parts.front() : tuple(parts);
}

double check_leibniz(const BilinearMap& b, const SmoothMap& f1, const SmoothMap& f2,
                     const Vector& u, const Vector& e) {
  const SmoothMap paired = apply_bilinear(b, f1, f2);
  const Vector lhs = differential(paired, u, e);
  const JetValue j1 = jet(f1, u, e);
  const JetValue j2 = jet(f2, u, e);
  const Vector rhs = b(j1.first, j2.value) + b(j1.value, j2.first);
  return (lhs - rhs).norm();
}

}  // namespace functorad
